"""Coverage tests for lazy package exports."""

import pytest

import ris_uav_planner
import ris_uav_planner.baselines as baselines
import ris_uav_planner.core as core
import ris_uav_planner.env as env
import ris_uav_planner.learning as learning
import ris_uav_planner.physics as physics
import ris_uav_planner.reporting as reporting
import ris_uav_planner.services as services
import ris_uav_planner.utils as utils

SUBPACKAGES = [baselines, core, env, learning, physics, reporting, services, utils]


def test_root_package_lazy_exports() -> None:
    """Root package exposes expected public symbols lazily."""
    for name in ris_uav_planner.__all__:
        assert getattr(ris_uav_planner, name) is not None
    assert ris_uav_planner.__version__ == "0.1.0"


def test_subpackage_lazy_exports() -> None:
    """Every name in a subpackage's __all__ resolves."""
    for module in SUBPACKAGES:
        for name in module.__all__:
            assert getattr(module, name) is not None, f"{module.__name__}.{name}"


@pytest.mark.parametrize("module", [ris_uav_planner, *SUBPACKAGES])
def test_unknown_attribute_raises(module) -> None:
    with pytest.raises(AttributeError):
        _ = module.not_a_real_symbol

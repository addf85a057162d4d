#!/usr/bin/env python3
"""
Multilayer perceptrons for the actor and critic networks.
Forward pass with cached activations, exact backpropagation, an Adam/SGD
optimizer, Polyak target updates and a portable JSON checkpoint format.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ris_uav_planner.core.errors import NonFiniteError, ShapeMismatchError, StaleCacheError

CHECKPOINT_FORMAT = "ris-uav-checkpoint"
CHECKPOINT_VERSION = 1
HIDDEN_ACTIVATIONS = ("relu", "tanh")
OUTPUT_ACTIVATIONS = ("tanh", "identity")


def _activate(name: str, z: np.ndarray) -> np.ndarray:
    if name == "relu":
        return np.maximum(z, 0.0)
    if name == "tanh":
        return np.tanh(z)
    return z


def _activation_slope(name: str, z: np.ndarray, y: np.ndarray) -> np.ndarray:
    if name == "relu":
        return (z > 0.0).astype(float)
    if name == "tanh":
        return 1.0 - y ** 2
    return np.ones_like(z)


@dataclass
class MlpParameters:
    """Layer sizes, weights (in x out) and biases of one network."""
    layer_dims: List[int]
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    hidden_activation: str = "relu"
    output_activation: str = "tanh"
    version: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if self.hidden_activation not in HIDDEN_ACTIVATIONS:
            raise ValueError(f"hidden_activation={self.hidden_activation!r} must be one of {HIDDEN_ACTIVATIONS}")
        if self.output_activation not in OUTPUT_ACTIVATIONS:
            raise ValueError(f"output_activation={self.output_activation!r} must be one of {OUTPUT_ACTIVATIONS}")
        if len(self.layer_dims) < 2 or len(self.weights) != len(self.layer_dims) - 1 or len(self.biases) != len(self.weights):
            raise ShapeMismatchError(f"layer_dims={self.layer_dims} do not match {len(self.weights)} weight matrices")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            expected = (self.layer_dims[i], self.layer_dims[i + 1])
            if w.shape != expected or b.shape != (expected[1],):
                raise ShapeMismatchError(f"layer {i}: weights {w.shape} / biases {b.shape}, expected {expected}")

    @classmethod
    def initialize(
        cls,
        layer_dims: Sequence[int],
        rng: np.random.Generator,
        hidden_activation: str = "relu",
        output_activation: str = "tanh"
    ) -> "MlpParameters":
        """Uniform fan-in initialisation: U(-1/sqrt(fan_in), 1/sqrt(fan_in))."""
        dims = [int(d) for d in layer_dims]
        weights, biases = [], []
        for fan_in, fan_out in zip(dims[:-1], dims[1:]):
            bound = 1.0 / math.sqrt(fan_in)
            weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            biases.append(rng.uniform(-bound, bound, size=fan_out))
        return cls(dims, weights, biases, hidden_activation, output_activation)

    @property
    def input_dim(self) -> int:
        return self.layer_dims[0]

    @property
    def output_dim(self) -> int:
        return self.layer_dims[-1]

    def parameters(self) -> List[np.ndarray]:
        """Weights then biases, in layer order; the order optimizers use."""
        return [*self.weights, *self.biases]

    def copy(self) -> "MlpParameters":
        return MlpParameters(
            list(self.layer_dims),
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.hidden_activation,
            self.output_activation,
        )

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.parameters())

    def same_shape(self, other: "MlpParameters") -> bool:
        return (
            list(self.layer_dims) == list(other.layer_dims)
            and self.hidden_activation == other.hidden_activation
            and self.output_activation == other.output_activation
        )

    def touch(self) -> None:
        """Mark parameters as changed so older forward caches go stale."""
        self.version += 1


@dataclass
class ForwardCache:
    """Per-layer inputs and activations recorded by forward()."""
    layer_inputs: List[np.ndarray]
    pre_activations: List[np.ndarray]
    activations: List[np.ndarray]
    network_id: int
    version: int
    single: bool


@dataclass
class MlpGradients:
    """Gradients with the same layout as MlpParameters."""
    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def parameters(self) -> List[np.ndarray]:
        return [*self.weights, *self.biases]

    def __add__(self, other: "MlpGradients") -> "MlpGradients":
        return MlpGradients(
            [a + b for a, b in zip(self.weights, other.weights)],
            [a + b for a, b in zip(self.biases, other.biases)],
        )

    def scaled(self, factor: float) -> "MlpGradients":
        return MlpGradients([w * factor for w in self.weights], [b * factor for b in self.biases])

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(g)) for g in self.parameters())


def forward(net: MlpParameters, inputs: np.ndarray) -> Tuple[np.ndarray, ForwardCache]:
    """Evaluate the network on one input vector or a (batch, dim) matrix."""
    x = np.asarray(inputs, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != net.input_dim:
        raise ShapeMismatchError(f"input shape {np.shape(inputs)} does not match input dim {net.input_dim}")

    layer_inputs, pre_activations, activations = [], [], []
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        layer_inputs.append(x)
        z = x @ w + b
        x = _activate(net.output_activation if i == last else net.hidden_activation, z)
        pre_activations.append(z)
        activations.append(x)

    cache = ForwardCache(layer_inputs, pre_activations, activations, id(net), net.version, single)
    return (x[0] if single else x), cache


def predict(net: MlpParameters, inputs: np.ndarray) -> np.ndarray:
    """forward() without keeping the cache."""
    output, _ = forward(net, inputs)
    return output


def backward(net: MlpParameters, cache: ForwardCache, output_gradient: np.ndarray) -> Tuple[MlpGradients, np.ndarray]:
    """
    Backpropagate dL/d(output) through the network.

    Gradients are summed over the batch; callers averaging a loss pass an
    output gradient that already carries the 1/batch factor.

    Returns:
        (parameter gradients, dL/d(input)) with the input gradient shaped like
        the forward() input.
    """
    if cache.network_id != id(net) or cache.version != net.version:
        raise StaleCacheError("forward cache does not belong to the current network parameters")
    delta = np.asarray(output_gradient, dtype=float)
    if cache.single:
        delta = delta[None, :]
    if delta.shape != cache.activations[-1].shape:
        raise ShapeMismatchError(f"output gradient shape {delta.shape} != output shape {cache.activations[-1].shape}")

    n_layers = len(net.weights)
    grad_w: List[Optional[np.ndarray]] = [None] * n_layers
    grad_b: List[Optional[np.ndarray]] = [None] * n_layers
    for i in reversed(range(n_layers)):
        name = net.output_activation if i == n_layers - 1 else net.hidden_activation
        delta = delta * _activation_slope(name, cache.pre_activations[i], cache.activations[i])
        grad_w[i] = cache.layer_inputs[i].T @ delta
        grad_b[i] = delta.sum(axis=0)
        delta = delta @ net.weights[i].T

    input_gradient = delta[0] if cache.single else delta
    return MlpGradients(grad_w, grad_b), input_gradient


@dataclass
class OptimizerState:
    """Adam moments (or plain SGD) for one network."""
    learning_rate: float
    first_moment: List[np.ndarray]
    second_moment: List[np.ndarray]
    method: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step: int = 0

    @classmethod
    def for_network(cls, net: MlpParameters, learning_rate: float, method: str = "adam") -> "OptimizerState":
        if method not in ("adam", "sgd"):
            raise ValueError(f"method={method!r} must be 'adam' or 'sgd'")
        zeros = [np.zeros_like(p) for p in net.parameters()]
        return cls(learning_rate, zeros, [z.copy() for z in zeros], method)


def apply_update(net: MlpParameters, grads: MlpGradients, opt: OptimizerState) -> MlpParameters:
    """Take one descent step in place. Ascent is descent on the negated objective."""
    params = net.parameters()
    grad_list = grads.parameters()
    if len(grad_list) != len(params) or any(g.shape != p.shape for g, p in zip(grad_list, params)):
        raise ShapeMismatchError("gradient layout does not match the network")
    if not grads.is_finite():
        raise NonFiniteError("non-finite gradient; update refused")

    opt.step += 1
    if opt.method == "sgd":
        for p, g in zip(params, grad_list):
            p -= opt.learning_rate * g
    else:
        bias1 = 1.0 - opt.beta1 ** opt.step
        bias2 = 1.0 - opt.beta2 ** opt.step
        for p, g, m, v in zip(params, grad_list, opt.first_moment, opt.second_moment):
            m *= opt.beta1
            m += (1.0 - opt.beta1) * g
            v *= opt.beta2
            v += (1.0 - opt.beta2) * g * g
            p -= opt.learning_rate * (m / bias1) / (np.sqrt(v / bias2) + opt.epsilon)
    net.touch()
    return net


def soft_update(target: MlpParameters, online: MlpParameters, tau: float) -> MlpParameters:
    """target <- tau * online + (1 - tau) * target, in place."""
    if not target.same_shape(online):
        raise ShapeMismatchError(f"target dims {target.layer_dims} != online dims {online.layer_dims}")
    for t, o in zip(target.parameters(), online.parameters()):
        t *= (1.0 - tau)
        t += tau * o
    target.touch()
    return target


def gradient_check(
    net: MlpParameters,
    inputs: np.ndarray,
    rng: np.random.Generator,
    samples_per_array: int = 8,
    eps: float = 1e-5,
    floor: float = 1e-4
) -> float:
    """
    Largest relative error between backward() and central differences.

    The scalar loss is sum(output * w) for a random w. A sampled subset of
    entries of every weight/bias array is perturbed by +-eps; the error of
    one entry is |analytic - numeric| / max(|analytic|, |numeric|, floor).
    """
    x = np.atleast_2d(np.asarray(inputs, dtype=float))
    out, cache = forward(net, x)
    upstream = rng.standard_normal(out.shape)
    grads, _ = backward(net, cache, upstream)

    def loss() -> float:
        return float(np.sum(predict(net, x) * upstream))

    worst = 0.0
    for param, grad in zip(net.parameters(), grads.parameters()):
        picks = rng.choice(param.size, size=min(samples_per_array, param.size), replace=False)
        for index in picks:
            where = np.unravel_index(index, param.shape)
            original = param[where]
            param[where] = original + eps
            plus = loss()
            param[where] = original - eps
            minus = loss()
            param[where] = original
            numeric = (plus - minus) / (2.0 * eps)
            analytic = float(grad.reshape(-1)[index])
            worst = max(worst, abs(analytic - numeric) / max(abs(analytic), abs(numeric), floor))
    return worst


def network_to_dict(net: MlpParameters) -> Dict[str, Any]:
    return {
        "layer_dims": list(net.layer_dims),
        "hidden_activation": net.hidden_activation,
        "output_activation": net.output_activation,
        "weights": [w.tolist() for w in net.weights],
        "biases": [b.tolist() for b in net.biases],
    }


def network_from_dict(data: Dict[str, Any]) -> MlpParameters:
    return MlpParameters(
        [int(d) for d in data["layer_dims"]],
        [np.array(w, dtype=float).reshape(len(w), -1) for w in data["weights"]],
        [np.array(b, dtype=float) for b in data["biases"]],
        data["hidden_activation"],
        data["output_activation"],
    )


def optimizer_to_dict(opt: OptimizerState) -> Dict[str, Any]:
    return {
        "method": opt.method,
        "learning_rate": opt.learning_rate,
        "beta1": opt.beta1,
        "beta2": opt.beta2,
        "epsilon": opt.epsilon,
        "step": opt.step,
        "first_moment": [m.tolist() for m in opt.first_moment],
        "second_moment": [v.tolist() for v in opt.second_moment],
    }


def optimizer_from_dict(data: Dict[str, Any]) -> OptimizerState:
    return OptimizerState(
        learning_rate=data["learning_rate"],
        first_moment=[np.array(m, dtype=float) for m in data["first_moment"]],
        second_moment=[np.array(v, dtype=float) for v in data["second_moment"]],
        method=data["method"],
        beta1=data["beta1"],
        beta2=data["beta2"],
        epsilon=data["epsilon"],
        step=int(data["step"]),
    )


def dump_checkpoint(
    networks: Dict[str, MlpParameters],
    optimizers: Dict[str, OptimizerState],
    metadata: Dict[str, Any]
) -> str:
    """Versioned JSON text; floats keep 17 significant digits so reloads are exact."""
    document = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "metadata": metadata,
        "networks": {name: network_to_dict(net) for name, net in networks.items()},
        "optimizers": {name: optimizer_to_dict(opt) for name, opt in optimizers.items()},
    }
    return json.dumps(document, sort_keys=True)


def parse_checkpoint(text: str) -> Tuple[Dict[str, MlpParameters], Dict[str, OptimizerState], Dict[str, Any]]:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"Invalid JSON in checkpoint: {exc}")
    if document.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"not a checkpoint document (format={document.get('format')!r})")
    if document.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {document.get('version')!r}")
    networks = {name: network_from_dict(data) for name, data in document["networks"].items()}
    optimizers = {name: optimizer_from_dict(data) for name, data in document["optimizers"].items()}
    return networks, optimizers, document.get("metadata", {})


def write_checkpoint(
    path: str,
    networks: Dict[str, MlpParameters],
    optimizers: Dict[str, OptimizerState],
    metadata: Dict[str, Any]
) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dump_checkpoint(networks, optimizers, metadata))


def read_checkpoint(path: str) -> Tuple[Dict[str, MlpParameters], Dict[str, OptimizerState], Dict[str, Any]]:
    with open(path, 'r', encoding='utf-8') as f:
        return parse_checkpoint(f.read())

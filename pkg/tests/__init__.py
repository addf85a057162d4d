"""Test package for ris_uav_planner."""

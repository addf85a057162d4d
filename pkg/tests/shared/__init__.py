"""Shared test utilities."""


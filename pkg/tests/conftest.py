"""Shared fixtures: memoized exact-diagonalization results (they dominate runtime)."""

from __future__ import annotations

import functools

import pytest

from clusterchain import ModelParams, ground_space


@functools.lru_cache(maxsize=128)
def cached_ground_space(jx: float, jy: float, h: float, n: int, deg_tol: float = 1e-8):
    return ground_space(ModelParams(jx=jx, jy=jy, h=h, n=n), deg_tol=deg_tol)


@pytest.fixture(scope="session")
def ed_cache():
    return cached_ground_space

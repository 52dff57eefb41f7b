"""Shared fixtures and independent oracles for the test suite."""

import numpy as np
import pytest

from biconf import catalog, geometry


def central_difference(fn, point, alpha, step=1e-2):
    """Iterated 5-point central differences for d^alpha fn at point.

    Independent of the jet machinery: only calls fn at shifted points.
    Error is O(step^4) per derivative order, which comfortably beats the
    1e-5 relative tolerance on the well-conditioned corpus points.
    """
    alpha = tuple(alpha)
    total = sum(alpha)
    if total == 0:
        return fn(np.asarray(point, dtype=float))
    axis = next(a for a, v in enumerate(alpha) if v > 0)
    inner = tuple(v - 1 if a == axis else v for a, v in enumerate(alpha))

    def shifted(offset):
        q = np.array(point, dtype=float)
        q[axis] += offset
        return central_difference(fn, q, inner, step)

    return (-shifted(2 * step) + 8 * shifted(step)
            - 8 * shifted(-step) + shifted(-2 * step)) / (12 * step)


def rel_err(got, want, floor=1e-12):
    return abs(got - want) / max(abs(want), floor)


@pytest.fixture
def rng():
    return geometry.rng_from_seed(20240611)


def solution_members():
    """Catalog configurations that admit the construction."""
    sqrt3 = float(np.sqrt(3))
    return [
        catalog.build_example("euclidean_graph", m=4, t=0.5),
        catalog.build_example("euclidean_graph", m=5, t=-2.0),
        catalog.build_example("hyperbolic_slice", m=3, t=sqrt3 - 1),
        catalog.build_example("hyperbolic_slice", m=4, t=1.0),
        catalog.build_example("hyperbolic_slice", m=5, t=2.0),
        catalog.build_example("sphere_equator", m=4),
        catalog.build_example("sphere_umbilic", m=4, a_radius=sqrt3 / 2,
                              b_height=0.5),
        catalog.build_example("sphere_umbilic", m=4, a_radius=sqrt3 / 2,
                              b_height=-0.5),
    ]


def nonsolution_members():
    return [
        catalog.build_example("euclidean_graph", m=5, t=1.0),
        catalog.build_example("hyperbolic_slice", m=5, t=0.7),
        catalog.build_example("sphere_umbilic", m=4, a_radius=0.8,
                              b_height=0.6),
    ]

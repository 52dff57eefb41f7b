"""Kernel backend agreement: the compiled convolution and the numpy
fallback must produce identical jet products."""

import numpy as np
import pytest

from biconf import jets
from biconf.jets import backend


def random_jet(space, rng):
    return jets.Jet(space, rng.standard_normal(space.size))


@pytest.mark.skipif("compiled" not in backend.available_backends(),
                    reason="compiled kernel not built")
@pytest.mark.parametrize("dim,order", [(1, 4), (3, 4), (5, 4), (7, 3),
                                       (4, 2), (2, 0)])
def test_backends_agree(dim, order, rng):
    space = jets.space(dim, order)
    previous = backend.backend_name()
    try:
        for _ in range(5):
            a = random_jet(space, rng)
            b = random_jet(space, rng)
            backend.set_backend("compiled")
            fast = (a * b).coeffs
            backend.set_backend("python")
            slow = (a * b).coeffs
            np.testing.assert_allclose(fast, slow, rtol=1e-15, atol=0.0)
    finally:
        backend.set_backend(previous)


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        backend.set_backend("fortran")


def test_backend_roundtrip():
    previous = backend.backend_name()
    other = backend.set_backend("python")
    assert other == previous
    assert backend.backend_name() == "python"
    backend.set_backend(previous)

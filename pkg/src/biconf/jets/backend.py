"""Kernel backend selection for jet multiplication.

At import time the compiled Cython kernel is preferred when it built
successfully; otherwise (or when ``BICONF_PURE_PYTHON`` is set in the
environment) the numpy fallback is used.  Both produce identical
coefficient arrays; ``benchmarks/bench_kernels.py`` compares their speed.
"""

import os

from . import _kernels_py

_IMPLS = {"python": _kernels_py.mul_into}

try:  # pragma: no cover - depends on whether the extension was built
    from . import _kernels as _compiled
    _IMPLS["compiled"] = _compiled.mul_into
except ImportError:  # pragma: no cover
    _compiled = None

if "compiled" in _IMPLS and not os.environ.get("BICONF_PURE_PYTHON"):
    _current = "compiled"
else:
    _current = "python"


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_IMPLS))


def backend_name() -> str:
    return _current


def set_backend(name: str) -> str:
    """Switch the multiplication kernel; returns the previous backend name."""
    global _current
    if name not in _IMPLS:
        raise ValueError(f"unknown backend {name!r}; have {available_backends()}")
    previous = _current
    _current = name
    return previous


def mul_into(ii, jj, kk, a, b, out):
    _IMPLS[_current](ii, jj, kk, a, b, out)

"""Kernel backend selection.

Two interchangeable implementations of the hot loops exist:

* ``numba_impl`` -- @njit-compiled, the default when numba imports;
* ``numpy_impl`` -- chunked vectorized numpy, always available.

Both produce bit-identical results; the env var ``CAPSEARCH_BACKEND``
(``numba`` or ``numpy``) forces a choice.  ``set_backend`` exists for tests
and the benchmark script; objects snapshot the backend at construction.
"""

from __future__ import annotations

import os

ENV_BACKEND = "CAPSEARCH_BACKEND"

_active = None
_name = None


def _load(name: str):
    if name == "numpy":
        from . import numpy_impl

        return numpy_impl
    if name == "numba":
        from . import numba_impl

        return numba_impl
    raise ValueError(f"unknown kernel backend {name!r} (expected 'numba' or 'numpy')")


def default_name() -> str:
    requested = os.environ.get(ENV_BACKEND)
    if requested:
        return requested.strip().lower()
    try:
        import numba  # noqa: F401

        return "numba"
    except ImportError:
        return "numpy"


def set_backend(name: str):
    global _active, _name
    _active = _load(name)
    _name = name
    return _active


def active():
    if _active is None:
        set_backend(default_name())
    return _active


def backend_name() -> str:
    active()
    return _name

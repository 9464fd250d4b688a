"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy implementation in ``_fallback`` takes over. ``set_backend`` switches
explicitly (benchmarks and equivalence tests use it).
"""
from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

kernels = _compiled if _compiled is not None else _fallback


def available():
    names = [_fallback.NAME]
    if _compiled is not None:
        names.insert(0, _compiled.NAME)
    return names


def get_backend(name):
    if name == _fallback.NAME:
        return _fallback
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def set_backend(name):
    global kernels
    kernels = get_backend(name)
    return kernels

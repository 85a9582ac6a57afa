"""Select the compiled kernels when importable, otherwise the numpy ones.

Set ``VILENKIN_BACKEND=python`` to force the numpy fallback.
"""

import os

import numpy as np

from . import _pycore

BACKEND = "python"
_impl = _pycore

if os.environ.get("VILENKIN_BACKEND", "").lower() not in ("python", "numpy", "pure"):
    try:
        from . import _core as _compiled
    except ImportError:
        _compiled = None
    else:
        _impl = _compiled
        BACKEND = "compiled"
else:
    _compiled = None


def compiled_available() -> bool:
    return _compiled is not None


def get_impl(name: str | None = None):
    if name is None:
        return _impl
    if name == "python":
        return _pycore
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled extension is not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def _radices(radices):
    return np.ascontiguousarray(radices, dtype=np.int64)


def mixed_radix_transform(data, radices, sign, backend=None):
    data = np.ascontiguousarray(np.atleast_2d(data), dtype=np.complex128)
    return get_impl(backend).mixed_radix_transform(data, _radices(radices), int(sign))


def translation_norms(f, radices, translations, ps, backend=None):
    return get_impl(backend).translation_norms(
        np.ascontiguousarray(f, dtype=np.complex128),
        _radices(radices),
        np.ascontiguousarray(translations, dtype=np.int64),
        np.ascontiguousarray(ps, dtype=np.float64),
    )


def convolve_direct(f, g, radices, backend=None):
    return get_impl(backend).convolve_direct(
        np.ascontiguousarray(f, dtype=np.complex128),
        np.ascontiguousarray(g, dtype=np.complex128),
        _radices(radices),
    )

"""Numpy implementations of the hot kernels (used when the extension is absent)."""

import numpy as np

# rows of x+t index tables built per chunk; bounds temporary memory
_CHUNK_ELEMS = 1 << 22


def _scales(radices):
    return np.concatenate([[1], np.cumprod(radices)]).astype(np.int64)


def _digits(idx, radices, scales):
    return (idx[..., None] // scales[:-1]) % radices


def mixed_radix_transform(data, radices, sign):
    data = np.asarray(data, dtype=np.complex128)
    rows, size = data.shape
    # axis -1 carries coordinate 0 (fastest varying digit)
    tensor = data.reshape((rows,) + tuple(int(m) for m in radices[::-1]))
    for k, m in enumerate(radices):
        m = int(m)
        d = np.arange(m)
        W = np.exp(sign * 2j * np.pi * (np.outer(d, d) % m) / m)
        axis = tensor.ndim - 1 - k
        tensor = np.moveaxis(np.tensordot(tensor, W, axes=([axis], [1])), -1, axis)
    return np.ascontiguousarray(tensor.reshape(rows, size))


def translation_norms(f, radices, translations, ps):
    f = np.asarray(f, dtype=np.complex128)
    radices = np.asarray(radices, dtype=np.int64)
    scales = _scales(radices)
    size = f.shape[0]
    xdig = _digits(np.arange(size, dtype=np.int64), radices, scales)
    translations = np.asarray(translations, dtype=np.int64)
    out = np.zeros((translations.shape[0], len(ps)))
    step = max(1, _CHUNK_ELEMS // max(size * len(radices), 1))
    for lo in range(0, translations.shape[0], step):
        tdig = _digits(translations[lo:lo + step], radices, scales)
        idx = ((xdig[None] + tdig[:, None]) % radices) @ scales[:-1]
        diff = np.abs(f[idx] - f[None, :])
        for j, p in enumerate(ps):
            if np.isinf(p):
                out[lo:lo + step, j] = diff.max(axis=1)
            else:
                out[lo:lo + step, j] = np.mean(diff**p, axis=1) ** (1.0 / p)
    return out


def convolve_direct(f, g, radices):
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    radices = np.asarray(radices, dtype=np.int64)
    scales = _scales(radices)
    size = f.shape[0]
    dig = _digits(np.arange(size, dtype=np.int64), radices, scales)
    out = np.empty(size, dtype=np.complex128)
    step = max(1, _CHUNK_ELEMS // max(size * len(radices), 1))
    for lo in range(0, size, step):
        xdig = dig[lo:lo + step]
        idx = ((xdig[:, None] - dig[None] + radices) % radices) @ scales[:-1]
        out[lo:lo + step] = (g[idx] @ f) / size
    return out

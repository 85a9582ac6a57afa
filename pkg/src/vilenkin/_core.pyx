# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: coordinate-wise transform, translation norms, convolution.

Signatures mirror :mod:`vilenkin._pycore`; inputs are validated there.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, pi, hypot, pow, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()


def mixed_radix_transform(const double complex[:, ::1] data, const long[::1] radices, int sign):
    """Apply the per-coordinate DFT along every digit axis of each row.

    ``sign=-1`` gives the unnormalised forward transform (conjugate
    characters), ``sign=+1`` the inverse.  Arithmetic is done on interleaved
    real/imaginary doubles.
    """
    cdef Py_ssize_t rows = data.shape[0], size = data.shape[1]
    cdef Py_ssize_t ncoord = radices.shape[0]
    cdef Py_ssize_t k, r, base, j, d, e, stride, m, span, mmax = 0
    cdef double wr, wi, xr, xi, ar, ai, br, bi
    cdef double *src
    cdef double *dst
    cdef double *a
    out_np = np.array(data, copy=True)
    cdef double[:, ::1] out = out_np.view(np.float64)
    if size == 0 or rows == 0:
        return out_np
    for k in range(ncoord):
        if radices[k] > mmax:
            mmax = radices[k]
    cdef double *Wr = <double *> malloc(mmax * mmax * sizeof(double))
    cdef double *Wi = <double *> malloc(mmax * mmax * sizeof(double))
    cdef double *tmp = <double *> malloc(2 * size * sizeof(double))
    if Wr == NULL or Wi == NULL or tmp == NULL:
        free(Wr)
        free(Wi)
        free(tmp)
        raise MemoryError()
    try:
        with nogil:
            stride = 1
            for k in range(ncoord):
                m = radices[k]
                span = stride * m
                # angle reduced mod m so the roots are exact up to one rounding
                for d in range(m):
                    for e in range(m):
                        Wr[d * m + e] = cos(2.0 * pi * ((d * e) % m) / m)
                        Wi[d * m + e] = sign * sin(2.0 * pi * ((d * e) % m) / m)
                for r in range(rows):
                    base = 0
                    while base < size:
                        src = &out[r, 2 * base]
                        if m == 2:
                            for j in range(stride):
                                ar = src[2 * j]
                                ai = src[2 * j + 1]
                                br = src[2 * (stride + j)]
                                bi = src[2 * (stride + j) + 1]
                                src[2 * j] = ar + br
                                src[2 * j + 1] = ai + bi
                                src[2 * (stride + j)] = ar - br
                                src[2 * (stride + j) + 1] = ai - bi
                        else:
                            for d in range(m):
                                dst = &tmp[2 * d * stride]
                                for j in range(2 * stride):
                                    dst[j] = 0.0
                                for e in range(m):
                                    wr = Wr[d * m + e]
                                    wi = Wi[d * m + e]
                                    a = &src[2 * e * stride]
                                    for j in range(stride):
                                        xr = a[2 * j]
                                        xi = a[2 * j + 1]
                                        dst[2 * j] += xr * wr - xi * wi
                                        dst[2 * j + 1] += xr * wi + xi * wr
                            for j in range(2 * span):
                                src[j] = tmp[j]
                        base += span
                stride = span
    finally:
        free(Wr)
        free(Wi)
        free(tmp)
    return out_np


def translation_norms(const double complex[::1] f, const long[::1] radices,
                      const long[::1] translations, const double[::1] ps):
    """``||f(. + t) - f||_p`` for every ``t`` in ``translations`` and ``p`` in ``ps``."""
    cdef Py_ssize_t size = f.shape[0], ncoord = radices.shape[0]
    cdef Py_ssize_t nt = translations.shape[0], npw = ps.shape[0]
    cdef Py_ssize_t it, ip, k, x, y, old, new, rest
    cdef double a
    out_np = np.zeros((nt, npw), dtype=np.float64)
    cdef double[:, ::1] out = out_np
    cdef long *scales = <long *> malloc((ncoord + 1) * sizeof(long))
    cdef long *xd = <long *> malloc(ncoord * sizeof(long))
    cdef long *td = <long *> malloc(ncoord * sizeof(long))
    if scales == NULL or xd == NULL or td == NULL:
        free(scales)
        free(xd)
        free(td)
        raise MemoryError()
    try:
        with nogil:
            scales[0] = 1
            for k in range(ncoord):
                scales[k + 1] = scales[k] * radices[k]
            for it in range(nt):
                rest = translations[it]
                for k in range(ncoord):
                    td[k] = rest % radices[k]
                    rest = rest // radices[k]
                    xd[k] = 0
                y = translations[it]
                for x in range(size):
                    a = hypot((f[y] - f[x]).real, (f[y] - f[x]).imag)
                    for ip in range(npw):
                        if ps[ip] == INFINITY:
                            if a > out[it, ip]:
                                out[it, ip] = a
                        elif ps[ip] == 1.0:
                            out[it, ip] += a
                        elif ps[ip] == 2.0:
                            out[it, ip] += a * a
                        else:
                            out[it, ip] += pow(a, ps[ip])
                    # odometer step on x, keeping y = index(x + t)
                    k = 0
                    while k < ncoord:
                        old = (xd[k] + td[k]) % radices[k]
                        xd[k] += 1
                        if xd[k] == radices[k]:
                            xd[k] = 0
                        new = (xd[k] + td[k]) % radices[k]
                        y += (new - old) * scales[k]
                        if xd[k] != 0:
                            break
                        k += 1
                for ip in range(npw):
                    if ps[ip] != INFINITY:
                        out[it, ip] = pow(out[it, ip] / size, 1.0 / ps[ip])
    finally:
        free(scales)
        free(xd)
        free(td)
    return out_np


def convolve_direct(const double complex[::1] f, const double complex[::1] g, const long[::1] radices):
    """``(1/M) sum_t f(t) g(x - t)`` by direct summation over the group."""
    cdef Py_ssize_t size = f.shape[0], ncoord = radices.shape[0]
    cdef Py_ssize_t x, t, k, y, old, new, rest
    cdef double complex acc
    out_np = np.zeros(size, dtype=np.complex128)
    cdef double complex[::1] out = out_np
    cdef long *scales = <long *> malloc((ncoord + 1) * sizeof(long))
    cdef long *xd = <long *> malloc(ncoord * sizeof(long))
    cdef long *td = <long *> malloc(ncoord * sizeof(long))
    if scales == NULL or xd == NULL or td == NULL:
        free(scales)
        free(xd)
        free(td)
        raise MemoryError()
    try:
        with nogil:
            scales[0] = 1
            for k in range(ncoord):
                scales[k + 1] = scales[k] * radices[k]
            for x in range(size):
                rest = x
                for k in range(ncoord):
                    xd[k] = rest % radices[k]
                    rest = rest // radices[k]
                    td[k] = 0
                y = x
                acc = 0
                for t in range(size):
                    acc = acc + f[t] * g[y]
                    # odometer step on t, keeping y = index(x - t)
                    k = 0
                    while k < ncoord:
                        old = (xd[k] - td[k] + radices[k]) % radices[k]
                        td[k] += 1
                        if td[k] == radices[k]:
                            td[k] = 0
                        new = (xd[k] - td[k] + radices[k]) % radices[k]
                        y += (new - old) * scales[k]
                        if td[k] != 0:
                            break
                        k += 1
                out[x] = acc / size
    finally:
        free(scales)
        free(xd)
        free(td)
    return out_np

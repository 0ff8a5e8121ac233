# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels.

Gates arrive pre-encoded as an (n_gates, 3) int64 table ``[opcode, a, b]``
plus a float64 angle per gate; see ``qksvm._simkernel_py`` for the
reference semantics this module must reproduce.

Amplitudes are handled as interleaved (re, im) doubles with the complex
products written out by hand; C99 complex multiplication goes through a
slow NaN-checking helper otherwise.
"""

from libc.math cimport cos, sin, sqrt

cdef enum:
    OP_H = 0
    OP_RX = 1
    OP_RY = 2
    OP_RZ = 3
    OP_CNOT = 4


cdef inline void _h(double* s, Py_ssize_t dim, Py_ssize_t stride) noexcept nogil:
    cdef Py_ssize_t blk, j, lo, hi, nblk = dim // (2 * stride)
    cdef double ar, ai, br, bi
    cdef double r = 1.0 / sqrt(2.0)
    for blk in range(nblk):
        for j in range(blk * 2 * stride, blk * 2 * stride + stride):
            lo = 2 * j
            hi = 2 * (j + stride)
            ar = s[lo]; ai = s[lo + 1]
            br = s[hi]; bi = s[hi + 1]
            s[lo] = (ar + br) * r; s[lo + 1] = (ai + bi) * r
            s[hi] = (ar - br) * r; s[hi + 1] = (ai - bi) * r


cdef inline void _rx(double* s, Py_ssize_t dim, Py_ssize_t stride, double theta) noexcept nogil:
    cdef Py_ssize_t blk, j, lo, hi, nblk = dim // (2 * stride)
    cdef double ar, ai, br, bi
    cdef double c = cos(0.5 * theta)
    cdef double sn = sin(0.5 * theta)
    for blk in range(nblk):
        for j in range(blk * 2 * stride, blk * 2 * stride + stride):
            lo = 2 * j
            hi = 2 * (j + stride)
            ar = s[lo]; ai = s[lo + 1]
            br = s[hi]; bi = s[hi + 1]
            # [[c, -i sn], [-i sn, c]]
            s[lo] = c * ar + sn * bi; s[lo + 1] = c * ai - sn * br
            s[hi] = sn * ai + c * br; s[hi + 1] = c * bi - sn * ar


cdef inline void _ry(double* s, Py_ssize_t dim, Py_ssize_t stride, double theta) noexcept nogil:
    cdef Py_ssize_t blk, j, lo, hi, nblk = dim // (2 * stride)
    cdef double ar, ai, br, bi
    cdef double c = cos(0.5 * theta)
    cdef double sn = sin(0.5 * theta)
    for blk in range(nblk):
        for j in range(blk * 2 * stride, blk * 2 * stride + stride):
            lo = 2 * j
            hi = 2 * (j + stride)
            ar = s[lo]; ai = s[lo + 1]
            br = s[hi]; bi = s[hi + 1]
            s[lo] = c * ar - sn * br; s[lo + 1] = c * ai - sn * bi
            s[hi] = sn * ar + c * br; s[hi + 1] = sn * ai + c * bi


cdef inline void _rz(double* s, Py_ssize_t dim, Py_ssize_t stride, double theta) noexcept nogil:
    cdef Py_ssize_t blk, j, lo, hi, nblk = dim // (2 * stride)
    cdef double ar, ai
    cdef double c = cos(0.5 * theta)
    cdef double sn = sin(0.5 * theta)
    for blk in range(nblk):
        for j in range(blk * 2 * stride, blk * 2 * stride + stride):
            lo = 2 * j
            hi = 2 * (j + stride)
            # times (c - i sn) on the |0> half, (c + i sn) on the |1> half
            ar = s[lo]; ai = s[lo + 1]
            s[lo] = ar * c + ai * sn; s[lo + 1] = ai * c - ar * sn
            ar = s[hi]; ai = s[hi + 1]
            s[hi] = ar * c - ai * sn; s[hi + 1] = ai * c + ar * sn


cdef inline Py_ssize_t _insert_zero(Py_ssize_t k, int bit) noexcept nogil:
    cdef Py_ssize_t low = k & (((<Py_ssize_t>1) << bit) - 1)
    return ((k >> bit) << (bit + 1)) | low


cdef inline void _cnot(double* s, Py_ssize_t dim, int control, int target) noexcept nogil:
    # visit only indices with control = 1, target = 0 and swap with target = 1
    cdef int lo_bit = control if control < target else target
    cdef int hi_bit = target if control < target else control
    cdef Py_ssize_t cmask = (<Py_ssize_t>1) << control
    cdef Py_ssize_t tmask = (<Py_ssize_t>1) << target
    cdef Py_ssize_t m, k, a, b
    cdef double tr, ti
    for m in range(dim >> 2):
        k = _insert_zero(_insert_zero(m, lo_bit), hi_bit) | cmask
        a = 2 * k
        b = 2 * (k | tmask)
        tr = s[a]; ti = s[a + 1]
        s[a] = s[b]; s[a + 1] = s[b + 1]
        s[b] = tr; s[b + 1] = ti


def apply_ops(double complex[::1] amps, const long long[:, ::1] ops, const double[::1] thetas):
    """Apply every encoded gate to ``amps`` in place."""
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t g, n = ops.shape[0]
    cdef long long code
    cdef double* s = <double*>&amps[0]
    if thetas.shape[0] != n:
        raise ValueError("ops and thetas disagree in length")
    with nogil:
        for g in range(n):
            code = ops[g, 0]
            if code == OP_H:
                _h(s, dim, (<Py_ssize_t>1) << ops[g, 1])
            elif code == OP_RX:
                _rx(s, dim, (<Py_ssize_t>1) << ops[g, 1], thetas[g])
            elif code == OP_RY:
                _ry(s, dim, (<Py_ssize_t>1) << ops[g, 1], thetas[g])
            elif code == OP_RZ:
                _rz(s, dim, (<Py_ssize_t>1) << ops[g, 1], thetas[g])
            elif code == OP_CNOT:
                _cnot(s, dim, <int>ops[g, 1], <int>ops[g, 2])

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot element operations.

Byte-for-byte equivalent to ``_pykernels``; see the docstring there for the
payload conventions. Permutation degree is capped at 255 points.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize

BACKEND = "compiled"

cdef int MAXDEG = 255


def perm_compose(bytes a, bytes b):
    cdef Py_ssize_t m = len(a)
    cdef const unsigned char* pa = a
    cdef const unsigned char* pb = b
    cdef unsigned char buf[255]
    cdef Py_ssize_t i
    for i in range(m):
        buf[i] = pa[pb[i] - 1]
    return PyBytes_FromStringAndSize(<char*>buf, m)


def perm_invert(bytes a):
    cdef Py_ssize_t m = len(a)
    cdef const unsigned char* pa = a
    cdef unsigned char buf[255]
    cdef Py_ssize_t i
    for i in range(m):
        buf[pa[i] - 1] = <unsigned char>(i + 1)
    return PyBytes_FromStringAndSize(<char*>buf, m)


def perm_conjugate(bytes h, bytes x):
    cdef Py_ssize_t m = len(h)
    cdef const unsigned char* ph = h
    cdef const unsigned char* px = x
    cdef unsigned char hinv[255]
    cdef unsigned char buf[255]
    cdef Py_ssize_t i
    for i in range(m):
        hinv[ph[i] - 1] = <unsigned char>(i + 1)
    for i in range(m):
        buf[i] = hinv[px[ph[i] - 1] - 1]
    return PyBytes_FromStringAndSize(<char*>buf, m)


def perm_sandwich(bytes h, bytes x, bytes j):
    cdef Py_ssize_t m = len(h)
    cdef const unsigned char* ph = h
    cdef const unsigned char* px = x
    cdef const unsigned char* pj = j
    cdef unsigned char buf[255]
    cdef Py_ssize_t i
    for i in range(m):
        buf[i] = ph[px[pj[i] - 1] - 1]
    return PyBytes_FromStringAndSize(<char*>buf, m)


def perm_twisted(bytes h, bytes x, bytes t):
    cdef Py_ssize_t m = len(h)
    cdef const unsigned char* ph = h
    cdef const unsigned char* px = x
    cdef const unsigned char* pt = t
    cdef unsigned char hinv[255]
    cdef unsigned char buf[255]
    cdef Py_ssize_t i
    for i in range(m):
        hinv[ph[i] - 1] = <unsigned char>(i + 1)
    for i in range(m):
        buf[i] = hinv[px[pt[i] - 1] - 1]
    return PyBytes_FromStringAndSize(<char*>buf, m)


def perm_product(seq, bytes identity):
    cdef Py_ssize_t m = len(identity)
    cdef unsigned char acc[255]
    cdef unsigned char nxt[255]
    cdef const unsigned char* pid = identity
    cdef const unsigned char* pit
    cdef Py_ssize_t i
    cdef bytes item
    for i in range(m):
        acc[i] = pid[i]
    for item in seq:
        pit = item
        for i in range(m):
            nxt[i] = acc[pit[i] - 1]
        for i in range(m):
            acc[i] = nxt[i]
    return PyBytes_FromStringAndSize(<char*>acc, m)


cdef inline long _mod(long v, long p):
    v = v % p
    if v < 0:
        v += p
    return v


cdef inline void _m2mul(const unsigned char* a, const unsigned char* b, unsigned char* out, long p):
    cdef long a0 = a[0], a1 = a[1], a2 = a[2], a3 = a[3]
    cdef long b0 = b[0], b1 = b[1], b2 = b[2], b3 = b[3]
    out[0] = <unsigned char>((a0 * b0 + a1 * b2) % p)
    out[1] = <unsigned char>((a0 * b1 + a1 * b3) % p)
    out[2] = <unsigned char>((a2 * b0 + a3 * b2) % p)
    out[3] = <unsigned char>((a2 * b1 + a3 * b3) % p)


cdef inline long _powmod(long base, long e, long p):
    cdef long acc = 1
    base = _mod(base, p)
    while e > 0:
        if e & 1:
            acc = (acc * base) % p
        base = (base * base) % p
        e >>= 1
    return acc


cdef inline void _m2inv(const unsigned char* a, unsigned char* out, long p):
    cdef long det = _mod(<long>a[0] * a[3] - <long>a[1] * a[2], p)
    cdef long dinv = _powmod(det, p - 2, p)
    out[0] = <unsigned char>((a[3] * dinv) % p)
    out[1] = <unsigned char>(_mod(-<long>a[1] * dinv, p))
    out[2] = <unsigned char>(_mod(-<long>a[2] * dinv, p))
    out[3] = <unsigned char>((a[0] * dinv) % p)


def mat2_compose(bytes a, bytes b, long p):
    cdef unsigned char buf[4]
    _m2mul(<const unsigned char*>(<char*>a), <const unsigned char*>(<char*>b), buf, p)
    return PyBytes_FromStringAndSize(<char*>buf, 4)


def mat2_invert(bytes a, long p):
    cdef unsigned char buf[4]
    _m2inv(<const unsigned char*>(<char*>a), buf, p)
    return PyBytes_FromStringAndSize(<char*>buf, 4)


def mat2_conjugate(bytes h, bytes x, long p):
    cdef unsigned char hinv[4]
    cdef unsigned char tmp[4]
    cdef unsigned char buf[4]
    _m2inv(<const unsigned char*>(<char*>h), hinv, p)
    _m2mul(hinv, <const unsigned char*>(<char*>x), tmp, p)
    _m2mul(tmp, <const unsigned char*>(<char*>h), buf, p)
    return PyBytes_FromStringAndSize(<char*>buf, 4)


def mat2_sandwich(bytes h, bytes x, bytes j, long p):
    cdef unsigned char tmp[4]
    cdef unsigned char buf[4]
    _m2mul(<const unsigned char*>(<char*>h), <const unsigned char*>(<char*>x), tmp, p)
    _m2mul(tmp, <const unsigned char*>(<char*>j), buf, p)
    return PyBytes_FromStringAndSize(<char*>buf, 4)


def mat2_twisted(bytes h, bytes x, bytes t, long p):
    cdef unsigned char hinv[4]
    cdef unsigned char tmp[4]
    cdef unsigned char buf[4]
    _m2inv(<const unsigned char*>(<char*>h), hinv, p)
    _m2mul(hinv, <const unsigned char*>(<char*>x), tmp, p)
    _m2mul(tmp, <const unsigned char*>(<char*>t), buf, p)
    return PyBytes_FromStringAndSize(<char*>buf, 4)


def mat2_transpose_invert(bytes a, long p):
    cdef unsigned char tr[4]
    cdef unsigned char buf[4]
    cdef const unsigned char* pa = a
    tr[0] = pa[0]
    tr[1] = pa[2]
    tr[2] = pa[1]
    tr[3] = pa[3]
    _m2inv(tr, buf, p)
    return PyBytes_FromStringAndSize(<char*>buf, 4)


def mat2_product(seq, bytes identity, long p):
    cdef unsigned char acc[4]
    cdef unsigned char tmp[4]
    cdef const unsigned char* pid = identity
    cdef Py_ssize_t i
    cdef bytes item
    for i in range(4):
        acc[i] = pid[i]
    for item in seq:
        _m2mul(acc, <const unsigned char*>(<char*>item), tmp, p)
        for i in range(4):
            acc[i] = tmp[i]
    return PyBytes_FromStringAndSize(<char*>acc, 4)

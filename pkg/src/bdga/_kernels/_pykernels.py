"""Pure-Python kernels for the hot element operations.

Permutation payloads are one-line images over 1..m, one byte per point.
Matrix payloads are 2x2 row-major entries mod a prime p < 256, one byte each.
The compiled backend in ``_ckernels`` implements the same functions with the
same byte-for-byte results.
"""

BACKEND = "python"


def perm_compose(a, b):
    # (a.b)(pt) = a(b(pt))
    return bytes(a[b[i] - 1] for i in range(len(a)))


def perm_invert(a):
    out = bytearray(len(a))
    for i, v in enumerate(a):
        out[v - 1] = i + 1
    return bytes(out)


def perm_conjugate(h, x):
    # h^-1 . x . h
    hinv = perm_invert(h)
    return bytes(hinv[x[h[i] - 1] - 1] for i in range(len(h)))


def perm_sandwich(h, x, j):
    # h . x . j
    return bytes(h[x[j[i] - 1] - 1] for i in range(len(h)))


def perm_twisted(h, x, t):
    # h^-1 . x . t
    hinv = perm_invert(h)
    return bytes(hinv[x[t[i] - 1] - 1] for i in range(len(h)))


def perm_product(seq, identity):
    acc = identity
    for item in seq:
        acc = perm_compose(acc, item)
    return acc


def _mat2_mul(a0, a1, a2, a3, b0, b1, b2, b3, p):
    return (
        (a0 * b0 + a1 * b2) % p,
        (a0 * b1 + a1 * b3) % p,
        (a2 * b0 + a3 * b2) % p,
        (a2 * b1 + a3 * b3) % p,
    )


def mat2_compose(a, b, p):
    return bytes(_mat2_mul(a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3], p))


def mat2_invert(a, p):
    det = (a[0] * a[3] - a[1] * a[2]) % p
    dinv = pow(det, p - 2, p)
    return bytes(((a[3] * dinv) % p, (-a[1] * dinv) % p, (-a[2] * dinv) % p, (a[0] * dinv) % p))


def mat2_conjugate(h, x, p):
    hinv = mat2_invert(h, p)
    return mat2_compose(mat2_compose(hinv, x, p), h, p)


def mat2_sandwich(h, x, j, p):
    return mat2_compose(mat2_compose(h, x, p), j, p)


def mat2_twisted(h, x, t, p):
    hinv = mat2_invert(h, p)
    return mat2_compose(mat2_compose(hinv, x, p), t, p)


def mat2_transpose_invert(a, p):
    return mat2_invert(bytes((a[0], a[2], a[1], a[3])), p)


def mat2_product(seq, identity, p):
    acc = identity
    for item in seq:
        acc = mat2_compose(acc, item, p)
    return acc

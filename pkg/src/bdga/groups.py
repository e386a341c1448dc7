"""Finite groups with canonical byte-encoded elements.

Every group fixes a canonical encoding for its elements (permutations as
one-line images over 1..m, one byte per point; 2x2 matrices mod p row-major,
one byte per entry; residues as fixed-width big-endian integers), so element
equality is byte equality and elements are hashable and serializable as hex.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass
from random import Random
from typing import Callable, Iterable, Sequence

from . import _kernels as kern
from .errors import EnumerationCapError, ForeignElementError, PlatformValidationError

ENUMERATION_CAP = 10**6


@dataclass(frozen=True, slots=True)
class GroupElement:
    """An element of a specific group: owning-group tag plus canonical bytes."""

    group: str
    payload: bytes

    def hex(self) -> str:
        return self.payload.hex()


def _int_to_bytes(v: int, width: int) -> bytes:
    return v.to_bytes(width, "big")


def _bytes_to_int(b: bytes) -> int:
    return int.from_bytes(b, "big")


class FiniteGroup:
    """Base class: payload-level operations plus element-level wrappers.

    Subclasses implement ``compose_p``, ``invert_p``, ``identity_p``,
    ``order``, ``payload_len`` and ``_enumerate_p``.
    """

    tag: str
    order: int
    payload_len: int
    identity_p: bytes

    def __init__(self, tag: str):
        self.tag = tag
        self._elements_p: list[bytes] | None = None
        self._index: dict[bytes, int] | None = None

    # -- payload level -------------------------------------------------

    def compose_p(self, a: bytes, b: bytes) -> bytes:
        raise NotImplementedError

    def invert_p(self, a: bytes) -> bytes:
        raise NotImplementedError

    def _enumerate_p(self) -> list[bytes]:
        raise NotImplementedError

    def elements_p(self) -> list[bytes]:
        if self._elements_p is None:
            if self.order > ENUMERATION_CAP:
                raise EnumerationCapError(
                    f"group {self.tag} has order {self.order} > cap {ENUMERATION_CAP}"
                )
            self._elements_p = self._enumerate_p()
        return self._elements_p

    def index_of(self, payload: bytes) -> int:
        if self._index is None:
            self._index = {p: i for i, p in enumerate(self.elements_p())}
        return self._index[payload]

    def contains_p(self, payload: bytes) -> bool:
        if self._index is None:
            self._index = {p: i for i, p in enumerate(self.elements_p())}
        return payload in self._index

    def sample_p(self, rng: Random) -> bytes:
        # uniform by index into the canonical enumeration; rejection-free
        els = self.elements_p()
        return els[rng.randrange(len(els))]

    # -- element level ---------------------------------------------------

    def wrap(self, payload: bytes) -> GroupElement:
        return GroupElement(self.tag, payload)

    def check(self, el: GroupElement) -> bytes:
        if el.group != self.tag:
            raise ForeignElementError(f"element of {el.group!r} used with group {self.tag!r}")
        return el.payload

    def identity(self) -> GroupElement:
        return self.wrap(self.identity_p)

    def compose(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self.wrap(self.compose_p(self.check(a), self.check(b)))

    def invert(self, a: GroupElement) -> GroupElement:
        return self.wrap(self.invert_p(self.check(a)))

    def sample(self, rng: Random) -> GroupElement:
        return self.wrap(self.sample_p(rng))

    def elements(self) -> list[GroupElement]:
        return [self.wrap(p) for p in self.elements_p()]

    def element_from_hex(self, hx: str) -> GroupElement:
        payload = bytes.fromhex(hx)
        if not self.contains_p(payload):
            raise ForeignElementError(f"payload {hx!r} is not an element of {self.tag!r}")
        return self.wrap(payload)

    def opposite(self) -> "FiniteGroup":
        return OppositeGroup(self)

    def __repr__(self):
        return f"<{type(self).__name__} {self.tag} order={self.order}>"


# -- permutation groups ----------------------------------------------------


def perm_payload(one_line: Sequence[int]) -> bytes:
    """Encode a permutation given as 1-based one-line images."""
    m = len(one_line)
    if sorted(one_line) != list(range(1, m + 1)):
        raise PlatformValidationError(f"not a permutation of 1..{m}: {one_line!r}")
    return bytes(one_line)


def cycles_payload(degree: int, *cycles: Sequence[int]) -> bytes:
    """Encode a product of disjoint cycles on points 1..degree."""
    images = list(range(1, degree + 1))
    for cyc in cycles:
        for i, pt in enumerate(cyc):
            images[pt - 1] = cyc[(i + 1) % len(cyc)]
    return perm_payload(images)


class _PermBase(FiniteGroup):
    degree: int

    def compose_p(self, a, b):
        return kern.perm_compose(a, b)

    def invert_p(self, a):
        return kern.perm_invert(a)

    def element(self, one_line: Sequence[int]) -> GroupElement:
        payload = perm_payload(one_line)
        if not self.contains_p(payload):
            raise ForeignElementError(f"{one_line!r} is not in {self.tag}")
        return self.wrap(payload)

    def from_cycles(self, *cycles: Sequence[int]) -> GroupElement:
        payload = cycles_payload(self.degree, *cycles)
        if not self.contains_p(payload):
            raise ForeignElementError(f"cycles {cycles!r} not in {self.tag}")
        return self.wrap(payload)


class SymmetricGroup(_PermBase):
    """All permutations of 1..m."""

    def __init__(self, m: int):
        if not 1 <= m <= 64:
            raise PlatformValidationError("symmetric group degree must be in 1..64")
        super().__init__(f"s{m}")
        self.degree = m
        self.order = math.factorial(m)
        self.payload_len = m
        self.identity_p = bytes(range(1, m + 1))

    def _enumerate_p(self):
        return [bytes(p) for p in itertools.permutations(range(1, self.degree + 1))]

    def contains_p(self, payload):
        return len(payload) == self.degree and sorted(payload) == list(
            range(1, self.degree + 1)
        )

    def sample_p(self, rng):
        # Fisher-Yates: uniform without materializing m! elements
        images = list(range(1, self.degree + 1))
        rng.shuffle(images)
        return bytes(images)


class PermutationGroup(_PermBase):
    """An explicit subgroup of the permutations of 1..degree."""

    def __init__(self, degree: int, elements: Iterable[bytes], tag: str | None = None):
        els = sorted(set(elements))
        if tag is None:
            digest = hashlib.sha256(b"".join(els)).hexdigest()[:8]
            tag = f"perm{degree}[{digest}]"
        super().__init__(tag)
        self.degree = degree
        self.order = len(els)
        self.payload_len = degree
        self.identity_p = bytes(range(1, degree + 1))
        self._elements_p = els
        if self.identity_p not in set(els):
            raise PlatformValidationError(f"element set for {tag} lacks the identity")

    def _enumerate_p(self):
        return self._elements_p


# -- 2x2 matrix groups mod p -------------------------------------------------


def mat2_payload(entries: Sequence[int] | Sequence[Sequence[int]], p: int) -> bytes:
    flat: list[int]
    if len(entries) == 2:
        flat = [entries[0][0], entries[0][1], entries[1][0], entries[1][1]]  # type: ignore[index]
    else:
        flat = list(entries)  # type: ignore[arg-type]
    return bytes(v % p for v in flat)


def _det(a: bytes, p: int) -> int:
    return (a[0] * a[3] - a[1] * a[2]) % p


class _Mat2Base(FiniteGroup):
    p: int

    def compose_p(self, a, b):
        return kern.mat2_compose(a, b, self.p)

    def invert_p(self, a):
        return kern.mat2_invert(a, self.p)

    def element(self, entries) -> GroupElement:
        payload = mat2_payload(entries, self.p)
        if not self.contains_p(payload):
            raise ForeignElementError(f"{entries!r} is not in {self.tag}")
        return self.wrap(payload)


class GL2Group(_Mat2Base):
    """All invertible 2x2 matrices over Z_p, p a small prime."""

    def __init__(self, p: int):
        if not (2 <= p <= 251 and _is_prime(p)):
            raise PlatformValidationError("matrix modulus must be a prime <= 251")
        super().__init__(f"gl2_{p}")
        self.p = p
        self.order = (p * p - 1) * (p * p - p)
        self.payload_len = 4
        self.identity_p = bytes((1, 0, 0, 1))

    def _enumerate_p(self):
        rng4 = itertools.product(range(self.p), repeat=4)
        return [bytes(t) for t in rng4 if (t[0] * t[3] - t[1] * t[2]) % self.p != 0]

    def contains_p(self, payload):
        return (
            len(payload) == 4
            and all(v < self.p for v in payload)
            and _det(payload, self.p) != 0
        )


class Mat2Group(_Mat2Base):
    """An explicit subgroup of GL(2, p)."""

    def __init__(self, p: int, elements: Iterable[bytes], tag: str | None = None):
        els = sorted(set(elements))
        if tag is None:
            digest = hashlib.sha256(b"".join(els)).hexdigest()[:8]
            tag = f"mat2_{p}[{digest}]"
        super().__init__(tag)
        self.p = p
        self.order = len(els)
        self.payload_len = 4
        self.identity_p = bytes((1, 0, 0, 1))
        self._elements_p = els
        if self.identity_p not in set(els):
            raise PlatformValidationError(f"element set for {tag} lacks the identity")

    def _enumerate_p(self):
        return self._elements_p


# -- modular-arithmetic groups ------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class ModCyclicGroup(FiniteGroup):
    """The cyclic subgroup of Z_p^* generated by g, of order q."""

    def __init__(self, p: int, g: int, q: int):
        if not _is_prime(p):
            raise PlatformValidationError(f"modulus {p} is not prime")
        if not 1 < g < p:
            raise PlatformValidationError(f"generator {g} not in 2..{p - 1}")
        if pow(g, q, p) != 1:
            raise PlatformValidationError(f"{g}^{q} != 1 mod {p}: claimed order is wrong")
        powers = sorted({pow(g, k, p) for k in range(q)})
        if len(powers) != q:
            raise PlatformValidationError(f"{g} has order {len(powers)} mod {p}, not {q}")
        super().__init__(f"mod{p}g{g}")
        self.p = p
        self.g = g
        self.q = q
        self.order = q
        self.payload_len = (p.bit_length() + 7) // 8
        self.identity_p = _int_to_bytes(1, self.payload_len)
        self._elements_p = [_int_to_bytes(v, self.payload_len) for v in powers]

    def _enumerate_p(self):
        return self._elements_p

    def compose_p(self, a, b):
        return _int_to_bytes(_bytes_to_int(a) * _bytes_to_int(b) % self.p, self.payload_len)

    def invert_p(self, a):
        return _int_to_bytes(pow(_bytes_to_int(a), -1, self.p), self.payload_len)

    def element(self, value: int) -> GroupElement:
        payload = _int_to_bytes(value % self.p, self.payload_len)
        if not self.contains_p(payload):
            raise ForeignElementError(f"{value} is not a power of {self.g} mod {self.p}")
        return self.wrap(payload)


class UnitsModGroup(FiniteGroup):
    """The multiplicative group of units mod q."""

    def __init__(self, q: int):
        if q < 2:
            raise PlatformValidationError("modulus must be >= 2")
        units = [a for a in range(1, q) if math.gcd(a, q) == 1]
        super().__init__(f"units{q}")
        self.q = q
        self.order = len(units)
        self.payload_len = (q.bit_length() + 7) // 8
        self.identity_p = _int_to_bytes(1, self.payload_len)
        self._elements_p = [_int_to_bytes(v, self.payload_len) for v in units]

    def _enumerate_p(self):
        return self._elements_p

    def compose_p(self, a, b):
        return _int_to_bytes(_bytes_to_int(a) * _bytes_to_int(b) % self.q, self.payload_len)

    def invert_p(self, a):
        return _int_to_bytes(pow(_bytes_to_int(a), -1, self.q), self.payload_len)

    def element(self, value: int) -> GroupElement:
        payload = _int_to_bytes(value % self.q, self.payload_len)
        if not self.contains_p(payload):
            raise ForeignElementError(f"{value} is not a unit mod {self.q}")
        return self.wrap(payload)


# -- derived groups -----------------------------------------------------------


class OppositeGroup(FiniteGroup):
    """The same element set with reversed composition."""

    def __init__(self, base: FiniteGroup):
        super().__init__(base.tag + "~op")
        self.base = base
        self.order = base.order
        self.payload_len = base.payload_len
        self.identity_p = base.identity_p

    def compose_p(self, a, b):
        return self.base.compose_p(b, a)

    def invert_p(self, a):
        return self.base.invert_p(a)

    def _enumerate_p(self):
        return self.base.elements_p()

    def contains_p(self, payload):
        return self.base.contains_p(payload)

    def sample_p(self, rng):
        return self.base.sample_p(rng)

    def opposite(self):
        return self.base


class ProductGroup(FiniteGroup):
    """Direct product; payloads are the two fixed-width payloads concatenated."""

    def __init__(self, left: FiniteGroup, right: FiniteGroup, tag: str | None = None):
        super().__init__(tag or f"({left.tag}*{right.tag})")
        self.left = left
        self.right = right
        self.order = left.order * right.order
        self.payload_len = left.payload_len + right.payload_len
        self._cut = left.payload_len
        self.identity_p = left.identity_p + right.identity_p

    def split(self, payload: bytes) -> tuple[bytes, bytes]:
        return payload[: self._cut], payload[self._cut :]

    def join(self, a: bytes, b: bytes) -> bytes:
        return a + b

    def compose_p(self, a, b):
        a1, a2 = self.split(a)
        b1, b2 = self.split(b)
        return self.left.compose_p(a1, b1) + self.right.compose_p(a2, b2)

    def invert_p(self, a):
        a1, a2 = self.split(a)
        return self.left.invert_p(a1) + self.right.invert_p(a2)

    def _enumerate_p(self):
        return [
            a + b for a in self.left.elements_p() for b in self.right.elements_p()
        ]

    def contains_p(self, payload):
        if len(payload) != self.payload_len:
            return False
        a, b = self.split(payload)
        return self.left.contains_p(a) and self.right.contains_p(b)

    def sample_p(self, rng):
        return self.left.sample_p(rng) + self.right.sample_p(rng)


# -- construction helpers ------------------------------------------------------


def close_under_products(
    generators: Iterable[bytes],
    compose: Callable[[bytes, bytes], bytes],
    identity: bytes,
    cap: int = ENUMERATION_CAP,
) -> list[bytes]:
    """Breadth-first closure of a generating set, identity included."""
    gens = list(generators)
    els = {identity}
    els.update(gens)
    frontier = list(els)
    while frontier:
        fresh = []
        for a in gens:
            for b in frontier:
                c = compose(a, b)
                if c not in els:
                    els.add(c)
                    fresh.append(c)
                    if len(els) > cap:
                        raise EnumerationCapError(
                            f"generated group exceeds the enumeration cap {cap}"
                        )
        frontier = fresh
    return sorted(els)


def generated_perm_group(
    degree: int, generators: Iterable[Sequence[int]], tag: str | None = None
) -> PermutationGroup:
    gens = [perm_payload(g) for g in generators]
    els = close_under_products(gens, kern.perm_compose, bytes(range(1, degree + 1)))
    return PermutationGroup(degree, els, tag=tag)


def generated_mat2_group(
    p: int, generators: Iterable[Sequence[int] | Sequence[Sequence[int]]], tag: str | None = None
) -> Mat2Group:
    if not _is_prime(p) or p > 251:
        raise PlatformValidationError("matrix modulus must be a prime <= 251")
    gens = []
    for g in generators:
        payload = mat2_payload(g, p)
        if _det(payload, p) == 0:
            raise PlatformValidationError(f"generator {g!r} is singular mod {p}")
        gens.append(payload)
    els = close_under_products(gens, lambda a, b: kern.mat2_compose(a, b, p), bytes((1, 0, 0, 1)))
    return Mat2Group(p, els, tag=tag)


def explicit_perm_group(
    degree: int, elements: Iterable[Sequence[int]], tag: str | None = None
) -> PermutationGroup:
    """Subgroup from an explicit element list; rejects sets not closed under products."""
    els = {perm_payload(e) for e in elements}
    for a in els:
        for b in els:
            if kern.perm_compose(a, b) not in els:
                raise PlatformValidationError("element set is not closed under composition")
    return PermutationGroup(degree, els, tag=tag)


def extend_homomorphism(
    generators: Sequence[bytes],
    images: Sequence[bytes],
    compose: Callable[[bytes, bytes], bytes],
    identity: bytes,
    image_identity: bytes,
    cap: int = ENUMERATION_CAP,
) -> dict[bytes, bytes]:
    """Extend generator images multiplicatively over the generated group.

    Raises if any element is reachable with two inconsistent images, i.e. the
    images do not respect the group's relations.
    """
    if len(generators) != len(images):
        raise PlatformValidationError("generator and image counts differ")
    table: dict[bytes, bytes] = {identity: image_identity}
    for g, im in zip(generators, images):
        if table.setdefault(g, im) != im:
            raise PlatformValidationError("conflicting images for a generator")
    frontier = list(table)
    while frontier:
        fresh = []
        for g, im in zip(generators, images):
            for b in frontier:
                c = compose(g, b)
                c_im = compose(im, table[b])
                seen = table.get(c)
                if seen is None:
                    table[c] = c_im
                    fresh.append(c)
                    if len(table) > cap:
                        raise EnumerationCapError("homomorphism extension exceeds the cap")
                elif seen != c_im:
                    raise PlatformValidationError(
                        "endomorphism images are inconsistent with the group relations"
                    )
        frontier = fresh
    return table

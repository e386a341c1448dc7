"""Finite group actions: the pluggable platforms the key exchange runs over.

An action binds an acting group (H, .) to a target group (G, *) with a base
point g in G and a map apply: H x G -> G satisfying apply(e, x) = x and
apply(h2, apply(h1, x)) = apply(h2 . h1, x).

For the sandwich-style constructions (conjugation h^-1 x h, twisted
conjugacy h^-1 x t(h), right translation x j) the acting group is the
opposite group of the chosen subgroup, which is exactly what makes the
second axiom hold with composition on the left.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from random import Random
from typing import Callable

from . import _kernels as kern
from .errors import PlatformValidationError
from .groups import (
    ENUMERATION_CAP,
    FiniteGroup,
    GroupElement,
    ModCyclicGroup,
    ProductGroup,
    UnitsModGroup,
    _bytes_to_int,
    _int_to_bytes,
    _Mat2Base,
    _PermBase,
)

VALIDATION_TRIPLES = 10_000


class GroupAction:
    """Base class for a left action of ``acting`` on ``target``'s elements."""

    tag: str
    acting: FiniteGroup
    target: FiniteGroup
    base_p: bytes
    commutative: bool = False

    def __init__(self, tag: str, acting: FiniteGroup, target: FiniteGroup, base_p: bytes):
        self.tag = tag
        self.acting = acting
        self.target = target
        self.base_p = base_p
        self._base_stab: frozenset[bytes] | None = None
        self.descriptor: dict = {}

    # -- payload level -----------------------------------------------------

    def apply_p(self, h: bytes, x: bytes) -> bytes:
        raise NotImplementedError

    @property
    def base(self) -> GroupElement:
        return self.target.wrap(self.base_p)

    # -- element level -------------------------------------------------------

    def act(self, h: GroupElement, x: GroupElement) -> GroupElement:
        hp = self.acting.check(h)
        xp = self.target.check(x)
        return self.target.wrap(self.apply_p(hp, xp))

    def orbit(self, x: GroupElement) -> frozenset[GroupElement]:
        xp = self.target.check(x)
        seen = {self.apply_p(h, xp) for h in self.acting.elements_p()}
        return frozenset(self.target.wrap(p) for p in seen)

    def stabilizer(self, x: GroupElement) -> frozenset[GroupElement]:
        xp = self.target.check(x)
        keep = [h for h in self.acting.elements_p() if self.apply_p(h, xp) == xp]
        return frozenset(self.acting.wrap(p) for p in keep)

    def base_stabilizer_p(self) -> frozenset[bytes]:
        if self._base_stab is None:
            self._base_stab = frozenset(
                h for h in self.acting.elements_p() if self.apply_p(h, self.base_p) == self.base_p
            )
        return self._base_stab

    # -- validation ------------------------------------------------------------

    def validate(self, rng: Random | None = None) -> None:
        """Check the two action axioms, exhaustively on small platforms and on
        sampled triples otherwise. Raises on the first violation."""
        H, G = self.acting, self.target
        exhaustive = H.order * G.order <= VALIDATION_TRIPLES
        if exhaustive:
            hs = H.elements_p()
            xs = G.elements_p()
            for x in xs:
                if self.apply_p(H.identity_p, x) != x:
                    raise PlatformValidationError(f"{self.tag}: identity axiom fails")
            for h2 in hs:
                for h1 in hs:
                    h21 = H.compose_p(h2, h1)
                    for x in xs:
                        if self.apply_p(h2, self.apply_p(h1, x)) != self.apply_p(h21, x):
                            raise PlatformValidationError(
                                f"{self.tag}: compatibility axiom fails"
                            )
        else:
            rng = rng or Random(0xA11)
            for _ in range(VALIDATION_TRIPLES):
                h1 = H.sample_p(rng)
                h2 = H.sample_p(rng)
                x = G.sample_p(rng)
                if self.apply_p(H.identity_p, x) != x:
                    raise PlatformValidationError(f"{self.tag}: identity axiom fails")
                if self.apply_p(h2, self.apply_p(h1, x)) != self.apply_p(
                    H.compose_p(h2, h1), x
                ):
                    raise PlatformValidationError(f"{self.tag}: compatibility axiom fails")

    def __repr__(self):
        return f"<{type(self).__name__} {self.tag}>"


def act(action: GroupAction, h: GroupElement, x: GroupElement) -> GroupElement:
    return action.act(h, x)


def orbit(action: GroupAction, x: GroupElement) -> frozenset[GroupElement]:
    return action.orbit(x)


def stabilizer(action: GroupAction, x: GroupElement) -> frozenset[GroupElement]:
    return action.stabilizer(x)


@dataclass(frozen=True)
class OrbitStabilizerReport:
    element: GroupElement
    orbit: frozenset[GroupElement]
    stabilizer: frozenset[GroupElement]


def orbit_stabilizer(action: GroupAction, x: GroupElement) -> OrbitStabilizerReport:
    return OrbitStabilizerReport(x, action.orbit(x), action.stabilizer(x))


# -- concrete actions ------------------------------------------------------------


class ExponentAction(GroupAction):
    """x -> x^h on the cyclic subgroup generated by g mod p; h ranges over the
    units mod q, q = order of g. The commutative platform."""

    commutative = True

    def __init__(self, p: int, g: int, q: int, tag: str | None = None):
        target = ModCyclicGroup(p, g, q)
        acting = UnitsModGroup(q)
        super().__init__(tag or f"bd_modp[{p},{g},{q}]", acting, target, target.element(g).payload)
        self.p = p
        self.q = q

    def apply_p(self, h, x):
        return _int_to_bytes(
            pow(_bytes_to_int(x), _bytes_to_int(h), self.p), self.target.payload_len
        )


def _require_same_family(target: FiniteGroup, sub: FiniteGroup, role: str) -> None:
    perm = isinstance(target, _PermBase) and isinstance(sub, _PermBase)
    mat = isinstance(target, _Mat2Base) and isinstance(sub, _Mat2Base)
    if not (perm or mat):
        raise PlatformValidationError(f"{role} group family does not match the target's")
    if perm and target.degree != sub.degree:  # type: ignore[attr-defined]
        raise PlatformValidationError(f"{role} degree differs from the target's")
    if mat and target.p != sub.p:  # type: ignore[attr-defined]
        raise PlatformValidationError(f"{role} modulus differs from the target's")


def _require_subgroup(target: FiniteGroup, sub: FiniteGroup, role: str) -> None:
    _require_same_family(target, sub, role)
    if sub is target:
        return
    if sub.order <= ENUMERATION_CAP:
        for p in sub.elements_p():
            if not target.contains_p(p):
                raise PlatformValidationError(f"{role} is not contained in {target.tag}")


class ConjugationAction(GroupAction):
    """x -> h^-1 x h for h in a subgroup of the target group."""

    def __init__(self, target: FiniteGroup, subgroup: FiniteGroup, base: GroupElement,
                 tag: str | None = None):
        _require_subgroup(target, subgroup, "acting subgroup")
        super().__init__(
            tag or f"conj[{target.tag}:{subgroup.tag}]",
            subgroup.opposite(),
            target,
            target.check(base),
        )
        if isinstance(target, _PermBase):
            self._conj = kern.perm_conjugate
        else:
            p = target.p  # type: ignore[attr-defined]
            self._conj = lambda h, x, _p=p: kern.mat2_conjugate(h, x, _p)

    def apply_p(self, h, x):
        return self._conj(h, x)


class TwistedConjugacyAction(GroupAction):
    """x -> h^-1 x t(h) for an endomorphism t of the target group."""

    def __init__(
        self,
        target: FiniteGroup,
        subgroup: FiniteGroup,
        base: GroupElement,
        endo: Callable[[bytes], bytes],
        endo_name: str,
        tag: str | None = None,
    ):
        _require_subgroup(target, subgroup, "acting subgroup")
        super().__init__(
            tag or f"twist[{target.tag}:{subgroup.tag}:{endo_name}]",
            subgroup.opposite(),
            target,
            target.check(base),
        )
        self.endo_name = endo_name
        # precompute images over the (enumerable) acting subgroup and check
        # multiplicativity there, which is all the action ever evaluates
        members = subgroup.elements_p()
        self._endo = {h: endo(h) for h in members}
        for img in self._endo.values():
            if not target.contains_p(img):
                raise PlatformValidationError("endomorphism image leaves the target group")
        pairs = itertools.product(members, repeat=2) if len(members) ** 2 <= 10**6 else None
        if pairs is None:
            rng = Random(0xE2D)
            pairs = (
                (subgroup.sample_p(rng), subgroup.sample_p(rng)) for _ in range(VALIDATION_TRIPLES)
            )
        for a, b in pairs:
            ab = subgroup.compose_p(a, b)
            if self._endo[ab] != target.compose_p(self._endo[a], self._endo[b]):
                raise PlatformValidationError("endomorphism is not multiplicative")
        if isinstance(target, _PermBase):
            self._twist = kern.perm_twisted
        else:
            p = target.p  # type: ignore[attr-defined]
            self._twist = lambda h, x, t, _p=p: kern.mat2_twisted(h, x, t, _p)

    def apply_p(self, h, x):
        return self._twist(h, x, self._endo[h])


class LeftTranslationAction(GroupAction):
    """x -> h x; component action of the double-coset construction."""

    def __init__(self, target: FiniteGroup, subgroup: FiniteGroup, base: GroupElement,
                 tag: str | None = None):
        _require_subgroup(target, subgroup, "left subgroup")
        super().__init__(
            tag or f"lmul[{target.tag}:{subgroup.tag}]", subgroup, target, target.check(base)
        )

    def apply_p(self, h, x):
        return self.target.compose_p(h, x)


class RightTranslationAction(GroupAction):
    """x -> x j; component action of the double-coset construction."""

    def __init__(self, target: FiniteGroup, subgroup: FiniteGroup, base: GroupElement,
                 tag: str | None = None):
        _require_subgroup(target, subgroup, "right subgroup")
        super().__init__(
            tag or f"rmul[{target.tag}:{subgroup.tag}]",
            subgroup.opposite(),
            target,
            target.check(base),
        )

    def apply_p(self, j, x):
        return self.target.compose_p(x, j)


class DoubleCosetAction(GroupAction):
    """x -> h x j for (h, j) in H x J; the two translation actions commute
    (interchange law), so the pair group acts on the target."""

    def __init__(
        self,
        target: FiniteGroup,
        left_sub: FiniteGroup,
        right_sub: FiniteGroup,
        base: GroupElement,
        tag: str | None = None,
    ):
        _require_subgroup(target, left_sub, "left subgroup")
        _require_subgroup(target, right_sub, "right subgroup")
        acting = ProductGroup(left_sub, right_sub.opposite())
        super().__init__(
            tag or f"dcoset[{target.tag}:{left_sub.tag}:{right_sub.tag}]",
            acting,
            target,
            target.check(base),
        )
        self.left_sub = left_sub
        self.right_sub = right_sub
        self.left_action = LeftTranslationAction(target, left_sub, base)
        self.right_action = RightTranslationAction(target, right_sub, base)
        self._cut = left_sub.payload_len
        if isinstance(target, _PermBase):
            self._sandwich = kern.perm_sandwich
        else:
            p = target.p  # type: ignore[attr-defined]
            self._sandwich = lambda h, x, j, _p=p: kern.mat2_sandwich(h, x, j, _p)

    def apply_p(self, hj, x):
        return self._sandwich(hj[: self._cut], x, hj[self._cut :])

    def pair(self, h: GroupElement, j: GroupElement) -> GroupElement:
        """Bundle one element of each subgroup into an acting-group element."""
        return self.acting.wrap(self.left_sub.check(h) + self.right_sub.check(j))


def double_act(
    action: DoubleCosetAction, h: GroupElement, j: GroupElement, x: GroupElement
) -> GroupElement:
    return action.act(action.pair(h, j), x)

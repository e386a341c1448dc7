"""Samplers and statistics for the transcript/key indistinguishability
experiments.

Five samplers produce (transcript, key) pairs plus hidden internals:

  sample_real        -- the honest protocol distribution
  sample_fake_prime  -- the first three chain links and one per block of
                        three thereafter replaced by uniform target elements
                        (party count restricted to n = 3s + 5)
  sample_fake        -- every chain link uniform
  sample_dist_prime  -- links derived from a four-element challenge tuple so
                        that a shaped tuple reproduces sample_real and a
                        coset-excluded random tuple approximates fake_prime
  sample_dist        -- as above but shifted one hybrid: shaped tuples match
                        fake_prime, random tuples match fake

``tv_distance`` estimates the total-variation distance between two samplers
over a finite bucket partition (a sound lower bound on the true distance),
and ``exact_key_conditional`` computes, by exhaustive enumeration, the exact
conditional distribution of the key given a fake transcript.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass
from random import Random
from typing import Callable, Iterable, Sequence

import numpy as np

from .actions import GroupAction
from .errors import DegenerateExclusionError, RegimeError
from .groups import FiniteGroup, GroupElement
from .harness import derive_seed
from .protocol import PairKeySource, Transcript, uniform_pair_keys


# -- challenge tuples -----------------------------------------------------------


@dataclass(frozen=True)
class DdhGaTuple:
    """Four target elements (apply(x,g), apply(y,g), apply(z,g), apply(r,g)).

    For kind "dh_shaped", z = y.x and r = x.y; for kind "random_excluded",
    z and r are uniform outside the stabilizer cosets of those two products.
    The acting-group witness rides along for the samplers that embed it.
    """

    t1: GroupElement
    t2: GroupElement
    t3: GroupElement
    t4: GroupElement
    kind: str
    witness: tuple[bytes, bytes, bytes, bytes]


def left_coset_p(group: FiniteGroup, h: bytes, members: Iterable[bytes]) -> frozenset[bytes]:
    return frozenset(group.compose_p(h, s) for s in members)


def coset(
    group: FiniteGroup, h: GroupElement, stab: Iterable[GroupElement]
) -> frozenset[GroupElement]:
    """The left coset h . S of a stabilizer subgroup S inside ``group``."""
    hp = group.check(h)
    return frozenset(
        group.wrap(group.compose_p(hp, group.check(s))) for s in stab
    )


def ddh_from_witness(
    platform: GroupAction, x: bytes, y: bytes, z: bytes, r: bytes, kind: str
) -> DdhGaTuple:
    g = platform.base_p
    wrap_t = platform.target.wrap
    return DdhGaTuple(
        wrap_t(platform.apply_p(x, g)),
        wrap_t(platform.apply_p(y, g)),
        wrap_t(platform.apply_p(z, g)),
        wrap_t(platform.apply_p(r, g)),
        kind,
        (x, y, z, r),
    )


def sample_ddh_ga(platform: GroupAction, rng: Random, kind: str) -> DdhGaTuple:
    H = platform.acting
    x = H.sample_p(rng)
    y = H.sample_p(rng)
    yx = H.compose_p(y, x)
    xy = H.compose_p(x, y)
    if kind == "dh_shaped":
        return ddh_from_witness(platform, x, y, yx, xy, kind)
    if kind != "random_excluded":
        raise ValueError(f"unknown tuple kind {kind!r}")
    stab = platform.base_stabilizer_p()
    if 2 * len(stab) >= H.order:
        raise DegenerateExclusionError(
            f"stabilizer of the base point covers too much of {H.tag}: "
            f"2*{len(stab)} >= {H.order}"
        )
    excluded = left_coset_p(H, yx, stab) | left_coset_p(H, xy, stab)
    z = H.sample_p(rng)
    while z in excluded:
        z = H.sample_p(rng)
    r = H.sample_p(rng)
    while r in excluded:
        r = H.sample_p(rng)
    return ddh_from_witness(platform, x, y, z, r, kind)


# -- distribution samples --------------------------------------------------------


@dataclass(frozen=True)
class DistributionSample:
    """A (transcript, key) pair plus the hidden values that produced it."""

    transcript: Transcript
    key: GroupElement
    internals: dict

    def canonical_bytes(self) -> bytes:
        return self.transcript.canonical_bytes() + self.key.payload


def _assemble(
    platform: GroupAction,
    n: int,
    vs: Sequence[bytes],
    links: Sequence[bytes],
    cs: Sequence[bytes],
    internals: dict,
) -> DistributionSample:
    """Common tail of every sampler: w's from the links and pair keys, the
    broadcast differences, the transcript, and the ordered-product key.

    ``links[0]`` is the closing link (indices 1 back to n); ``links[k]`` for
    k >= 1 is the link from party k to party k+1.
    """
    target = platform.target
    ws = [platform.apply_p(cs[(i - 1) % n], links[i]) for i in range(n)]
    zs = [
        target.compose_p(target.invert_p(links[i]), links[(i + 1) % n]) for i in range(n)
    ]
    sk = links[0]
    for link in links[1:]:
        sk = target.compose_p(sk, link)
    transcript = Transcript(platform.tag, n, tuple(vs), tuple(ws), tuple(zs))
    internals = dict(internals)
    internals["links"] = tuple(links)
    internals["c"] = tuple(cs)
    return DistributionSample(transcript, target.wrap(sk), internals)


def sample_real(
    platform: GroupAction, n: int, rng: Random, pair_keys: PairKeySource = uniform_pair_keys
) -> DistributionSample:
    """Honest run: same draw order as ``run_session``, so equal seeds give
    byte-identical transcripts and keys."""
    if n < 3:
        raise RegimeError(f"party count {n} < 3")
    H = platform.acting
    g = platform.base_p
    hs = [H.sample_p(rng) for _ in range(n)]
    cs = pair_keys(platform, n, rng)
    vs = [platform.apply_p(h, g) for h in hs]
    links = [platform.apply_p(H.compose_p(hs[k], hs[k - 1]), g) for k in range(n)]
    internals = {"h": tuple(hs), "s": tuple(hs), "random_links": ()}
    return _assemble(platform, n, vs, links, cs, internals)


def hybrid_regime(s: int) -> int:
    if not (isinstance(s, int) and s >= 1):
        raise RegimeError(f"block count s must be an integer >= 1, got {s!r}")
    return 3 * s + 5


def require_hybrid_n(n: int) -> int:
    """Inverse of ``hybrid_regime``: the s with n = 3s + 5, else an error."""
    s, rem = divmod(n - 5, 3)
    if rem != 0 or s < 1:
        raise RegimeError(f"party count {n} is not of the form 3s + 5 with s >= 1")
    return s


def _randomized_indices(s: int) -> tuple[int, ...]:
    return tuple([1, 2, 3] + [3 * i + 3 for i in range(1, s + 1)])


def sample_fake_prime(
    platform: GroupAction, s: int, rng: Random, pair_keys: PairKeySource = uniform_pair_keys
) -> DistributionSample:
    """Honest secrets and v's, but the links at the randomized positions are
    fresh uniform target elements."""
    n = hybrid_regime(s)
    H, G = platform.acting, platform.target
    g = platform.base_p
    hs = [H.sample_p(rng) for _ in range(n)]
    cs = pair_keys(platform, n, rng)
    vs = [platform.apply_p(h, g) for h in hs]
    links: list[bytes] = [
        platform.apply_p(H.compose_p(hs[k], hs[k - 1]), g) for k in range(n)
    ]
    randomized = _randomized_indices(s)
    for k in randomized:
        links[k] = G.sample_p(rng)
    internals = {"h": tuple(hs), "random_links": randomized}
    return _assemble(platform, n, vs, links, cs, internals)


def sample_fake(
    platform: GroupAction, n: int, rng: Random, pair_keys: PairKeySource = uniform_pair_keys
) -> DistributionSample:
    """Every link uniform; only the v's are tied to the drawn secrets."""
    if n < 3:
        raise RegimeError(f"party count {n} < 3")
    H, G = platform.acting, platform.target
    g = platform.base_p
    hs = [H.sample_p(rng) for _ in range(n)]
    cs = pair_keys(platform, n, rng)
    vs = [platform.apply_p(h, g) for h in hs]
    links = [G.sample_p(rng) for _ in range(n)]
    internals = {"h": tuple(hs), "random_links": tuple(range(n))}
    return _assemble(platform, n, vs, links, cs, internals)


def sample_dist_prime(
    platform: GroupAction,
    s: int,
    tup: DdhGaTuple,
    rng: Random,
    pair_keys: PairKeySource = uniform_pair_keys,
) -> DistributionSample:
    """Embed the challenge tuple across every third link. The per-slot
    effective secrets are recorded in internals["s"]; with a shaped tuple
    every link equals apply(s_{k+1} . s_k, g) exactly."""
    n = hybrid_regime(s)
    H = platform.acting
    g = platform.base_p
    x, y, z, r = tup.witness
    b0 = H.sample_p(rng)
    b0p = H.sample_p(rng)
    h0 = H.sample_p(rng)
    betas = [H.sample_p(rng) for _ in range(s)]
    gammas = [H.sample_p(rng) for _ in range(s)]
    aux = [H.sample_p(rng) for _ in range(s)]
    cs = pair_keys(platform, n, rng)

    slots: list[bytes] = [b""] * n  # effective secret for each v slot, 0-based
    slots[0] = H.compose_p(y, b0)
    slots[1] = x
    slots[2] = y
    slots[3] = H.compose_p(b0p, x)
    slots[4] = h0
    links: list[bytes] = [b""] * n
    links[1] = platform.apply_p(H.compose_p(r, b0), g)
    links[2] = platform.apply_p(z, g)
    links[3] = platform.apply_p(H.compose_p(b0p, r), g)
    aux_prev = h0
    for i in range(1, s + 1):
        j = 3 * i + 3  # 1-based transcript position of the block start
        beta_i, gamma_i, h_i = betas[i - 1], gammas[i - 1], aux[i - 1]
        slots[j - 1] = H.compose_p(x, gamma_i)
        slots[j] = H.compose_p(beta_i, y)
        slots[j + 1] = h_i
        links[j - 1] = platform.apply_p(H.compose_p(x, H.compose_p(gamma_i, aux_prev)), g)
        links[j] = platform.apply_p(H.compose_p(beta_i, H.compose_p(z, gamma_i)), g)
        aux_prev = h_i
    vs = [platform.apply_p(slot, g) for slot in slots]
    links[4] = platform.apply_p(h0, vs[3])
    for i in range(1, s + 1):
        j = 3 * i + 3
        links[j + 1] = platform.apply_p(aux[i - 1], vs[j])
    links[0] = platform.apply_p(aux[s - 1], vs[0])
    internals = {
        "s": tuple(slots),
        "witness": tup.witness,
        "kind": tup.kind,
        "random_links": (),
        "witness_links": (1, 2, 3) + tuple(3 * i + 3 for i in range(1, s + 1)),
    }
    return _assemble(platform, n, vs, links, cs, internals)


def sample_dist(
    platform: GroupAction,
    s: int,
    tup: DdhGaTuple,
    rng: Random,
    pair_keys: PairKeySource = uniform_pair_keys,
    closing_link: str = "r",
) -> DistributionSample:
    """One hybrid later: the positions randomized in fake_prime are drawn
    uniformly here, and the challenge tuple feeds the remaining links. The
    closing link composes the witness element named by ``closing_link``
    ("r" or "z"; "r" makes a shaped tuple reproduce fake_prime exactly)."""
    if closing_link not in ("r", "z"):
        raise ValueError("closing_link must be 'r' or 'z'")
    n = hybrid_regime(s)
    H, G = platform.acting, platform.target
    g = platform.base_p
    x, y, z, r = tup.witness
    h1 = H.sample_p(rng)
    h2 = H.sample_p(rng)
    betas = [H.sample_p(rng) for _ in range(s + 1)]
    beta_primes = [H.sample_p(rng) for _ in range(s + 1)]
    gammas = [H.sample_p(rng) for _ in range(s + 1)]
    cs = pair_keys(platform, n, rng)

    slots: list[bytes] = [b""] * n
    slots[0] = H.compose_p(y, betas[0])
    slots[1] = h1
    slots[2] = h2
    slots[3] = H.compose_p(y, beta_primes[0])
    slots[4] = H.compose_p(gammas[0], x)
    links: list[bytes] = [b""] * n
    for i in range(1, s + 1):
        j = 3 * i + 3
        slots[j - 1] = H.compose_p(betas[i], H.compose_p(y, H.invert_p(gammas[i - 1])))
        slots[j] = H.compose_p(y, beta_primes[i])
        slots[j + 1] = H.compose_p(gammas[i], x)
    vs = [platform.apply_p(slot, g) for slot in slots]
    randomized = _randomized_indices(s)
    for k in randomized:
        links[k] = G.sample_p(rng)
    links[4] = platform.apply_p(
        H.compose_p(gammas[0], H.compose_p(r, beta_primes[0])), g
    )
    for i in range(1, s + 1):
        j = 3 * i + 3
        links[j - 1] = platform.apply_p(H.compose_p(betas[i], z), g)
        links[j + 1] = platform.apply_p(
            H.compose_p(gammas[i], H.compose_p(r, beta_primes[i])), g
        )
    closer = r if closing_link == "r" else z
    links[0] = platform.apply_p(H.compose_p(gammas[s], H.compose_p(closer, betas[0])), g)
    internals = {
        "s": tuple(slots),
        "witness": tup.witness,
        "kind": tup.kind,
        "random_links": randomized,
        "closing_link_symbol": closing_link,
    }
    return _assemble(platform, n, vs, links, cs, internals)


# -- total-variation estimation ------------------------------------------------


@dataclass(frozen=True)
class Partition:
    label: str
    buckets: int
    assign: Callable[[DistributionSample], int]

    def __call__(self, sample: DistributionSample) -> int:
        return self.assign(sample)


def hash_partition(buckets: int = 64) -> Partition:
    def assign(sample: DistributionSample) -> int:
        digest = hashlib.sha256(sample.canonical_bytes()).digest()
        return int.from_bytes(digest[:8], "big") % buckets

    return Partition(f"hash{buckets}", buckets, assign)


def element_value_partition(platform: GroupAction, field: str, index: int,
                            buckets: int = 64) -> Partition:
    """Bucket by the exact value of one transcript position (or the key):
    a sharp white-box partition for small target groups."""
    buckets = min(buckets, platform.target.order)

    def assign(sample: DistributionSample) -> int:
        if field == "sk":
            payload = sample.key.payload
        else:
            payload = getattr(sample.transcript, field)[index]
        return platform.target.index_of(payload) % buckets

    return Partition(f"{field}[{index}]%{buckets}", buckets, assign)


def identity_count_partition(platform: GroupAction, buckets: int = 8) -> Partition:
    """Bucket by how many broadcast w values equal the target identity."""
    ident = platform.target.identity_p

    def assign(sample: DistributionSample) -> int:
        count = sum(1 for p in sample.transcript.w if p == ident)
        return min(count, buckets - 1)

    return Partition(f"w-identity-count%{buckets}", buckets, assign)


@dataclass(frozen=True)
class DistanceEstimate:
    statistic: float
    ci95: tuple[float, float]
    samples_per_side: int
    partition: str
    buckets: int

    def to_obj(self) -> dict:
        return {
            "statistic": self.statistic,
            "ci95": list(self.ci95),
            "samples_per_side": self.samples_per_side,
            "partition": self.partition,
            "buckets": self.buckets,
        }


Sampler = Callable[[Random], DistributionSample]


def tv_distance(
    sampler_a: Sampler,
    sampler_b: Sampler,
    trials: int,
    partition: Partition,
    seed: int,
    bootstrap_reps: int = 200,
) -> DistanceEstimate:
    """Half the L1 distance between the two empirical bucket distributions,
    with a bootstrap 95% interval. Each trial uses its own derived RNG stream
    so trials are order-independent. Calibrated for >= 10^3 trials and <= 64
    buckets; the expected noise floor for identical samplers is about
    0.57 * sqrt(buckets / trials)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    counts = np.zeros((2, partition.buckets), dtype=np.int64)
    for side, sampler in ((0, sampler_a), (1, sampler_b)):
        label = "a" if side == 0 else "b"
        for t in range(trials):
            sample = sampler(Random(derive_seed(seed, label, t)))
            counts[side, partition(sample)] += 1
    occupied = int(np.count_nonzero(counts.sum(axis=0)))
    if occupied <= 1:
        warnings.warn("degenerate partition: all samples in one bucket", stacklevel=2)
        return DistanceEstimate(0.0, (0.0, 0.0), trials, partition.label, partition.buckets)
    pa = counts[0] / trials
    pb = counts[1] / trials
    stat = 0.5 * float(np.abs(pa - pb).sum())
    gen = np.random.Generator(np.random.PCG64(derive_seed(seed, "bootstrap")))
    reps = np.empty(bootstrap_reps)
    for i in range(bootstrap_reps):
        ra = gen.multinomial(trials, pa) / trials
        rb = gen.multinomial(trials, pb) / trials
        reps[i] = 0.5 * float(np.abs(ra - rb).sum())
    lo, hi = np.percentile(reps, [2.5, 97.5])
    return DistanceEstimate(stat, (float(lo), float(hi)), trials, partition.label,
                            partition.buckets)


# -- exact conditional analysis ---------------------------------------------------


def exact_key_conditional(platform: GroupAction, sample: DistributionSample) -> dict[bytes, int]:
    """The exact conditional distribution of the key given one fake
    transcript, by exhaustive enumeration.

    The broadcast differences pin the link vector up to a single left
    translate: links = (t, t*a_1, ..., t*a_{n-1}) with a_k the running
    product of the first k broadcast values. Each translate t is weighted by
    the number of pair-key vectors reproducing the observed w's. Returns
    integer weights per key payload (unnormalized; zero-weight keys omitted).
    """
    target, acting = platform.target, platform.acting
    transcript = sample.transcript
    n = transcript.n
    prefix = [target.identity_p]
    for zval in transcript.z[: n - 1]:
        prefix.append(target.compose_p(prefix[-1], zval))
    hs = acting.elements_p()
    weights: dict[bytes, int] = {}
    for t in target.elements_p():
        links = [target.compose_p(t, a) for a in prefix]
        weight = 1
        for i in range(n):
            matches = sum(
                1 for c in hs if platform.apply_p(c, links[i]) == transcript.w[i]
            )
            if matches == 0:
                weight = 0
                break
            weight *= matches
        if weight:
            sk = links[0]
            for link in links[1:]:
                sk = target.compose_p(sk, link)
            weights[sk] = weights.get(sk, 0) + weight
    return weights


def conditional_is_uniform(platform: GroupAction, weights: dict[bytes, int]) -> bool:
    """True iff the integer-weighted key distribution is exactly uniform over
    the whole target group."""
    if len(weights) != platform.target.order:
        return False
    values = set(weights.values())
    return len(values) == 1

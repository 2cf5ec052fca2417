"""The combined test: r Miller-Rabin rounds times one Galois round.

Its bad-witness count is multiplicative, count_MR(n)**r * count_Gal(n),
which is what makes the product strictly stronger than either factor
alone.  mc_density estimates the same quantity empirically by sampling
witness tuples, as a sanity check on the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import galois, witness
from .galois import RingDescriptor, find_conductor
from .rng import CounterRng

PROBABLY_PRIME = "probably-prime"
COMPOSITE = "composite"


@dataclass(frozen=True)
class StrongerVerdict:
    """Outcome of one run of the combined test.

    evidence explains a composite verdict: ("mr-round", i) for a failed
    Miller-Rabin round, ("galois-round", reason) for the ring round,
    ("factor", g) when a nontrivial factor of n surfaced.
    """

    n: int
    outcome: str
    evidence: tuple | None = None

    @property
    def probably_prime(self) -> bool:
        return self.outcome == PROBABLY_PRIME


def stronger_test(n: int, r: int = 2, ell: int | None = None, rng=None) -> StrongerVerdict:
    """Run r Miller-Rabin rounds and one Galois round on odd n >= 3.

    The conductor is searched when not supplied; PerfectPower and
    NoConductor from that search propagate (the former is already a
    compositeness proof, which the CLI reports as such).  Round i draws
    from stream i of the counter-based rng; the Galois round uses
    stream r.  Draws: uniform bases in [1, n) for the Miller-Rabin
    rounds, a uniform nonzero element of S for the Galois round.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    if r < 0:
        raise ValueError("r must be >= 0")
    streams = CounterRng.coerce(rng)
    if ell is None:
        ell = find_conductor(n)
    R = RingDescriptor(n, ell)
    for i in range(r):
        a = int(streams.stream(i).integers(1, n))
        g = math.gcd(a, n)
        if g > 1:
            return StrongerVerdict(n, COMPOSITE, ("factor", g))
        if not witness.mr_witness(n, a):
            return StrongerVerdict(n, COMPOSITE, ("mr-round", i))
    x = _draw_nonzero(R, streams.stream(r))
    outcome = galois.galois_test(R, x)
    if outcome.status == "factor-found":
        return StrongerVerdict(n, COMPOSITE, ("factor", outcome.factor))
    if outcome.status == "fail":
        return StrongerVerdict(n, COMPOSITE, ("galois-round", "sigma-mismatch"))
    return StrongerVerdict(n, PROBABLY_PRIME)


def _draw_nonzero(R: RingDescriptor, gen) -> tuple[int, ...]:
    while True:
        x = tuple(int(c) for c in gen.integers(0, R.n, size=R.d))
        if any(x):
            return x


def _draw_unit(R: RingDescriptor, gen) -> tuple[int, ...]:
    while True:
        x = _draw_nonzero(R, gen)
        if galois.is_unit(R, x):
            return x


def count_Str(n: int, r: int, ell: int) -> int:
    """Exact bad-witness count of the combined test."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return witness.count_MR(n) ** r * galois.count_Gal(n, ell)


def mc_density(
    n: int, r: int, ell: int, samples: int, seed: int | None = None
) -> tuple[float, float]:
    """Monte Carlo estimate of the combined bad-witness density.

    Samples tuples of r uniform unit bases plus one uniform unit of S
    and returns (fraction passing every round, binomial standard
    error).  The expected value is
    (count_MR/phi)**r * count_Gal/unit_count.  Reproducible for a
    fixed seed.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    R = RingDescriptor(n, ell)
    gen = CounterRng.coerce(seed).stream(0)
    hits = 0
    for _ in range(samples):
        ok = True
        for _ in range(r):
            a = _draw_unit_base(n, gen)
            if not witness.mr_witness(n, a):
                ok = False
                break
        if ok:
            # Membership in the bad-witness set is the defining identity
            # itself; galois_test would also divert units that reveal a
            # factor mid-inversion, biasing the estimate low.
            x = _draw_unit(R, gen)
            ok = galois.sigma_apply(R, x) == galois.ring_pow(R, x, R.n)
        if ok:
            hits += 1
    density = hits / samples
    stderr = math.sqrt(density * (1.0 - density) / samples)
    return density, stderr


def _draw_unit_base(n: int, gen) -> int:
    while True:
        a = int(gen.integers(1, n))
        if math.gcd(a, n) == 1:
            return a

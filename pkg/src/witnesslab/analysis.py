"""Range sweeps, series constants, adversarial inputs, bound reports.

The sweep walks odd n up to a bound, records every exact count the
other modules provide, and reduces them into an aggregate whose merge
is associative.  Partial aggregates are always produced over fixed
chunks and merged in chunk order, so the result is bit-identical no
matter how many workers computed the chunks.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, field

import mpmath

from . import witness
from .galois import (
    DEFAULT_ELL_MAX,
    conductor_failure,
    count_D,
    count_Gal,
    count_H,
    cofactor_k,
    find_conductor,
    NoConductor,
)
from .numth import (
    _unity_roots_prime_power,
    factorize,
    is_perfect_power,
    is_prime,
    lcm_range,
    primes_up_to,
    L_of,
)
from .rng import CounterRng

# Fixed chunk width (in odd integers) for the deterministic reduction.
_CHUNK_ODDS = 2000


class NoQFound(ArithmeticError):
    """The complementary-prime search for the adversarial n failed."""


@dataclass(frozen=True)
class FixedEll:
    """Use one conductor for the whole sweep; skip n it does not fit."""

    ell: int


@dataclass(frozen=True)
class SmallestEll:
    """Search the smallest valid conductor per n, up to ell_max."""

    ell_max: int = DEFAULT_ELL_MAX


@dataclass(frozen=True)
class SweepRecord:
    """Counts for one visited odd n.

    F and MR are always present.  The conductor-dependent fields are
    None when the policy skipped n, with skipped_reason holding a tag
    ("perfect-power", "not-coprime", "not-primitive-root",
    "no-conductor").
    """

    n: int
    composite: bool
    F: int
    MR: int
    Gal: int | None = None
    D: int | None = None
    H: int | None = None
    k_cofactor: int | None = None
    Str_r: int | None = None
    ell: int | None = None
    skipped_reason: str | None = None

    @property
    def covered(self) -> bool:
        return self.skipped_reason is None


class _CompensatedSum:
    """Neumaier-compensated float accumulator with ordered merge."""

    __slots__ = ("total", "correction")

    def __init__(self, total: float = 0.0, correction: float = 0.0):
        self.total = total
        self.correction = correction

    def add(self, value: float) -> None:
        t = self.total + value
        if abs(self.total) >= abs(value):
            self.correction += (self.total - t) + value
        else:
            self.correction += (value - t) + self.total
        self.total = t

    def merge(self, other: "_CompensatedSum") -> None:
        self.add(other.total)
        self.add(other.correction)

    def value(self) -> float:
        return self.total + self.correction

    def copy(self) -> "_CompensatedSum":
        return _CompensatedSum(self.total, self.correction)

    def __repr__(self):
        return f"_CompensatedSum({self.value()!r})"


@dataclass
class SweepAggregate:
    """Associative reduction of sweep records for a fixed round count.

    Integer sums run over composites only (the primed sums of the mean
    bounds); Gal and Str additionally need the conductor, so they run
    over covered composites.  The log sums feed geometric means: F and
    MR**r accumulate over every visited n, H over covered n.
    """

    rounds: int = 0
    x: int = 0
    count_visited: int = 0
    count_composite: int = 0
    count_covered: int = 0
    count_covered_composite: int = 0
    count_skipped: int = 0
    sum_F: int = 0
    sum_MR_r: int = 0
    sum_Gal: int = 0
    sum_Str: int = 0
    sum_log_F: _CompensatedSum = field(default_factory=_CompensatedSum)
    sum_log_MR_r: _CompensatedSum = field(default_factory=_CompensatedSum)
    sum_log_H: _CompensatedSum = field(default_factory=_CompensatedSum)

    def add_record(self, rec: SweepRecord) -> None:
        self.x = max(self.x, rec.n)
        self.count_visited += 1
        self.sum_log_F.add(math.log(rec.F))
        self.sum_log_MR_r.add(self.rounds * math.log(rec.MR))
        if rec.composite:
            self.count_composite += 1
            self.sum_F += rec.F
            self.sum_MR_r += rec.MR**self.rounds
        if rec.covered:
            self.count_covered += 1
            self.sum_log_H.add(math.log(rec.H))
            if rec.composite:
                self.count_covered_composite += 1
                self.sum_Gal += rec.Gal
                self.sum_Str += rec.Str_r
        else:
            self.count_skipped += 1

    def merge(self, other: "SweepAggregate") -> "SweepAggregate":
        if self.rounds != other.rounds:
            raise ValueError("cannot merge aggregates with different round counts")
        out = SweepAggregate(
            rounds=self.rounds,
            x=max(self.x, other.x),
            count_visited=self.count_visited + other.count_visited,
            count_composite=self.count_composite + other.count_composite,
            count_covered=self.count_covered + other.count_covered,
            count_covered_composite=self.count_covered_composite
            + other.count_covered_composite,
            count_skipped=self.count_skipped + other.count_skipped,
            sum_F=self.sum_F + other.sum_F,
            sum_MR_r=self.sum_MR_r + other.sum_MR_r,
            sum_Gal=self.sum_Gal + other.sum_Gal,
            sum_Str=self.sum_Str + other.sum_Str,
            sum_log_F=self.sum_log_F.copy(),
            sum_log_MR_r=self.sum_log_MR_r.copy(),
            sum_log_H=self.sum_log_H.copy(),
        )
        out.sum_log_F.merge(other.sum_log_F)
        out.sum_log_MR_r.merge(other.sum_log_MR_r)
        out.sum_log_H.merge(other.sum_log_H)
        return out


def examine(n: int, r: int, policy) -> SweepRecord:
    """Build the sweep record for one odd n under a conductor policy."""
    fac = factorize(n)
    composite = fac.factors[0][1] > 1 or len(fac.factors) > 1
    f_count = witness.count_F(n)
    mr_count = witness.count_MR(n)

    skip = None
    ell = None
    power = is_perfect_power(n)
    if power is not None and power[1] % 2 == 0:
        skip = "perfect-power"
    elif isinstance(policy, FixedEll):
        skip = conductor_failure(n, policy.ell)
        ell = policy.ell if skip is None else None
    elif isinstance(policy, SmallestEll):
        try:
            ell = find_conductor(n, policy.ell_max)
        except NoConductor:
            skip = "no-conductor"
    else:
        raise TypeError(f"unknown conductor policy: {policy!r}")

    if skip is not None:
        return SweepRecord(
            n=n, composite=composite, F=f_count, MR=mr_count, skipped_reason=skip
        )
    gal = count_Gal(n, ell)
    return SweepRecord(
        n=n,
        composite=composite,
        F=f_count,
        MR=mr_count,
        Gal=gal,
        D=count_D(n, ell),
        H=count_H(n, ell - 1),
        k_cofactor=cofactor_k(n, ell),
        Str_r=mr_count**r * gal,
        ell=ell,
    )


def _chunk_ranges(x_max: int) -> list[tuple[int, int]]:
    """Half-open odd ranges [start, stop) covering 3..x_max."""
    span = 2 * _CHUNK_ODDS
    return [(start, min(start + span, x_max + 1)) for start in range(3, x_max + 1, span)]


def _process_chunk(args: tuple) -> tuple[list[SweepRecord], SweepAggregate]:
    start, stop, r, policy = args
    records = []
    agg = SweepAggregate(rounds=r)
    for n in range(start, stop, 2):
        rec = examine(n, r, policy)
        records.append(rec)
        agg.add_record(rec)
    return records, agg


def sweep(
    x_max: int,
    r: int = 2,
    policy=FixedEll(3),
    workers: int = 1,
    record_sink=None,
) -> SweepAggregate:
    """Visit every odd n in [3, x_max] and reduce the records.

    record_sink, when given, receives each SweepRecord in increasing
    order of n regardless of worker scheduling.  The returned aggregate
    is computed by merging fixed-size chunk aggregates in chunk order,
    so it is identical for any worker count.
    """
    if x_max < 3:
        raise ValueError("x_max must be >= 3")
    if r < 0:
        raise ValueError("r must be >= 0")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    chunk_args = [(start, stop, r, policy) for start, stop in _chunk_ranges(x_max)]
    total = SweepAggregate(rounds=r)
    if workers == 1:
        results = map(_process_chunk, chunk_args)
    else:
        pool = multiprocessing.get_context("fork").Pool(workers)
        results = pool.imap(_process_chunk, chunk_args)
    try:
        for records, partial in results:
            if record_sink is not None:
                for rec in records:
                    record_sink(rec)
            total = total.merge(partial)
    finally:
        if workers > 1:
            pool.close()
            pool.join()
    return total


def sweep_records(x_max: int, r: int = 2, policy=FixedEll(3)) -> list[SweepRecord]:
    """Convenience wrapper collecting all records in memory."""
    records: list[SweepRecord] = []
    sweep(x_max, r, policy, record_sink=records.append)
    return records


def _prime_power_terms(bound: int):
    """Yield (p, j, s=p**j, lambda(s)) for all prime powers s <= bound."""
    for p in primes_up_to(bound):
        s = p
        j = 1
        while s <= bound:
            if p == 2:
                lam = 1 if j == 1 else 2 if j == 2 else 1 << (j - 2)
            else:
                lam = s // p * (p - 1)
            yield p, j, s, lam
            s *= p
            j += 1


def _series_tail(bound: int) -> float:
    # Lambda(s)/(s*phi(s)) <= 2 log(s)/s**2 for prime powers, and the
    # summand is decreasing, so the tail is below 2*(log B + 1)/B.
    return 2.0 * (math.log(bound) + 1.0) / bound


def eval_c1(bound: int = 10**5) -> tuple[float, float]:
    """Partial sum of Lambda(s)/(s*phi(s)) over prime powers s <= bound.

    Returns (value, tail_majorant): the true infinite sum lies within
    tail_majorant above the returned value.
    """
    if bound < 2:
        raise ValueError("bound must be >= 2")
    terms = [
        math.log(p) / (s * (s - s // p)) for p, _j, s, _lam in _prime_power_terms(bound)
    ]
    return math.fsum(terms), _series_tail(bound)


def eval_c3(d: int, bound: int = 10**5) -> tuple[float, float]:
    """Partial sum of f(s, d1)**2 * Lambda(s)/(s*phi(s)), d1 = gcd(lambda(s), d).

    f(s, d1) counts the units mod s with y**d1 = 1; for an odd prime
    power it equals d1, and doubles for 2**a with a >= 3 and d1 even.
    With d = 1 every f is 1 and the sum reduces to the one in eval_c1,
    exactly.  The tail majorant scales the base tail by the largest
    possible f**2, namely (2d)**2.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if bound < 2:
        raise ValueError("bound must be >= 2")
    terms = []
    for p, j, s, lam in _prime_power_terms(bound):
        d1 = math.gcd(lam, d)
        f = _unity_roots_prime_power(p, j, d1)
        terms.append(f * f * math.log(p) / (s * (s - s // p)))
    return math.fsum(terms), (2 * d) ** 2 * _series_tail(bound)


@dataclass(frozen=True)
class AdversarialConfig:
    """Knobs for constructing n = s*q with a guaranteed witness floor.

    M should be a highly divisible modulus (lcm_range works well); the
    pool collects primes p with cutoff < p <= prime_bound and p-1 | M.
    """

    M: int = lcm_range(12)
    prime_bound: int = 200
    cutoff: int = 5
    k: int = 3
    q_search_limit: int = 10**6


@dataclass(frozen=True)
class AdversarialOutcome:
    n: int
    s: int
    q: int
    predicted_floor: int
    chosen: tuple[int, ...]
    pool: tuple[int, ...]


def adversarial_pool(cfg: AdversarialConfig) -> tuple[int, ...]:
    """Primes p with cutoff < p <= prime_bound and p - 1 dividing M."""
    return tuple(
        p
        for p in primes_up_to(cfg.prime_bound)
        if p > cfg.cutoff and cfg.M % (p - 1) == 0
    )


def adversarial_generate(
    cfg: AdversarialConfig, rng=None, subset=None
) -> AdversarialOutcome:
    """Build n = s*q with M | n-1, so count_F(n) >= phi(s) by design.

    s multiplies cfg.k distinct pool primes (a specific subset can be
    forced, e.g. to reproduce a published example); q is the least
    prime congruent to the inverse of s mod M that does not divide s.
    Every prime p | s then has p-1 | M | n-1, pushing gcd(p-1, n-1) to
    its maximum p-1.
    """
    pool = adversarial_pool(cfg)
    if subset is not None:
        requested = tuple(int(p) for p in subset)
        chosen = tuple(sorted(set(requested)))
        if len(chosen) != len(requested):
            raise ValueError("subset primes must be distinct")
        for p in chosen:
            if p not in pool:
                raise ValueError(f"{p} is not in the pool {pool}")
    else:
        if len(pool) < cfg.k:
            raise ValueError(f"pool {pool} smaller than k={cfg.k}")
        gen = CounterRng.coerce(rng).stream(0)
        picked = gen.choice(len(pool), size=cfg.k, replace=False)
        chosen = tuple(sorted(pool[int(i)] for i in picked))
    s = math.prod(chosen)
    if math.gcd(s, cfg.M) != 1:
        raise NoQFound(f"s={s} shares a factor with M={cfg.M}")
    target = pow(s, -1, cfg.M)
    q = target if target > 1 else target + cfg.M
    while q <= cfg.q_search_limit:
        if s % q != 0 and is_prime(q):
            break
        q += cfg.M
    else:
        raise NoQFound(f"no prime q = {target} (mod {cfg.M}) below {cfg.q_search_limit}")
    n = s * q
    assert (n - 1) % cfg.M == 0, "construction must force M | n-1"
    floor = math.prod(p - 1 for p in chosen)
    return AdversarialOutcome(
        n=n, s=s, q=q, predicted_floor=floor, chosen=chosen, pool=pool
    )


@dataclass(frozen=True)
class BoundsRow:
    """One comparison line: an empirical mean next to a bound curve."""

    label: str
    empirical: float
    reference: float
    note: str = ""


@dataclass(frozen=True)
class BoundsReport:
    x: int
    d: int
    rounds: int
    rows: tuple[BoundsRow, ...]
    coverage_note: str

    def row(self, label: str) -> BoundsRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)

    def render(self) -> list[str]:
        lines = [
            f"bounds report at x={self.x} (d={self.d}, rounds={self.rounds})",
            self.coverage_note,
        ]
        width = max(len(r.label) for r in self.rows)
        for r in self.rows:
            line = f"  {r.label:<{width}}  empirical={r.empirical:.6e}  reference={r.reference:.6e}"
            if r.note:
                line += f"  [{r.note}]"
            lines.append(line)
        return lines


def compare_bounds(
    agg: SweepAggregate, d: int, r: int, series_bound: int = 10**5
) -> BoundsReport:
    """Put sweep means next to the matching asymptotic bound curves.

    Purely descriptive: the curves hold in the x -> infinity limit with
    o(1) corrections, so no pass/fail judgment is attached.  Mean
    columns use the primed (composite-only) sums normalized by x; the
    geometric-mean columns use the log sums.
    """
    x = float(agg.x)
    if x < 3:
        raise ValueError("aggregate is empty")
    lx = L_of(x)
    loglog = math.log(math.log(x))
    c1_val, _ = eval_c1(series_bound)
    c3_val, _ = eval_c3(d, series_bound)
    zeta_note = ""
    if r >= 2:
        zeta_r = float(mpmath.zeta(r))
    else:
        zeta_r = math.inf
        zeta_note = "needs rounds >= 2"
    rows = (
        BoundsRow(
            "gal-mean-lower",
            agg.sum_Gal / x,
            x ** (15 / 23),
            "mean should sit above the curve for large x",
        ),
        BoundsRow(
            "gal-mean-upper",
            agg.sum_Gal / x,
            x**d / lx,
            "curve carries a L(x)^(-1+o(1)) factor",
        ),
        BoundsRow(
            "mr-mean-lower",
            agg.sum_MR_r / x,
            x ** (r - 8 / 23),
            "",
        ),
        BoundsRow(
            "mr-mean-upper",
            agg.sum_MR_r / x,
            x**r / lx,
            "curve carries a L(x)^(-1+o(1)) factor",
        ),
        BoundsRow(
            "str-mean-lower",
            agg.sum_Str / x,
            x ** (r + 7 / 23),
            "",
        ),
        BoundsRow(
            "str-mean-upper",
            agg.sum_Str / x,
            x ** (r + d) * zeta_r / lx**2,
            zeta_note or "curve carries a L(x)^(-2+o(1)) factor",
        ),
        BoundsRow(
            "mr-geometric-slope",
            2.0 * agg.sum_log_MR_r.value() / x,
            r * (c1_val - 2.0 * math.log(2.0) / 3.0) * loglog,
            "slope term only; constant multiplier stays symbolic",
        ),
        BoundsRow(
            "h-geometric-slope",
            agg.sum_log_H.value() / x,
            c3_val * loglog,
            "additive O(d^4) term omitted; covered n only",
        ),
    )
    coverage = (
        f"coverage: {agg.count_visited} odd n visited, "
        f"{agg.count_composite} composite, "
        f"{agg.count_covered_composite} composite with conductor data, "
        f"{agg.count_skipped} skipped"
    )
    return BoundsReport(x=agg.x, d=d, rounds=r, rows=rows, coverage_note=coverage)

"""Cyclic ring extensions of Z/nZ and the Galois-style test.

The extension is realized as S = (Z/nZ)[X] / (1 + X + ... + X**(ell-1))
for a prime conductor ell with n a primitive root mod ell, so S has
degree d = ell - 1 over Z/nZ and the map sigma: X -> X**(n mod ell)
generates a cyclic automorphism group of order d.  The test accepts n
when a sampled invertible x satisfies sigma(x) = x**n; for prime n
that is the Frobenius identity, for composite n it almost never holds.

Elements are coefficient tuples of length d over the power basis
1, X, ..., X**(ell-2).  Products are reduced with X**ell = 1 first and
the relation 1 + X + ... + X**(ell-1) = 0 folds the top coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .numth import (
    BudgetExceeded,
    factorize,
    is_perfect_power,
    mult_order,
)

_BRUTE_LIMIT = 10**6

DEFAULT_ELL_MAX = 2000


class PerfectPower(ArithmeticError):
    """n = base**exponent with exponent even: n is a certified composite.

    Squares are quadratic residues mod every odd prime, hence never
    primitive roots; no conductor can exist, and the witness (base,
    exponent) already proves compositeness.
    """

    def __init__(self, base: int, exponent: int):
        super().__init__(f"{base}**{exponent}")
        self.base = base
        self.exponent = exponent


class NoConductor(ArithmeticError):
    """No valid conductor found below the search bound."""


class InvalidConductor(ValueError):
    """The requested (n, ell) pair violates the ring preconditions."""


class NonIntegral(ArithmeticError):
    """An exact-division invariant failed; indicates a real bug."""


def conductor_failure(n: int, ell: int) -> str | None:
    """Why ell is unusable for n, as a short tag, or None if usable."""
    return _residue_failure(n % ell if ell > 0 else -1, ell)


@lru_cache(maxsize=None)
def _residue_failure(residue: int, ell: int) -> str | None:
    if ell < 3 or not _is_small_prime(ell):
        return "conductor-not-prime"
    if residue == 0:
        return "not-coprime"
    if _order_mod_ell(residue, ell) != ell - 1:
        return "not-primitive-root"
    return None


@lru_cache(maxsize=None)
def _order_mod_ell(residue: int, ell: int) -> int:
    # ell stays small (conductors are searched below a few thousand),
    # so an unbounded cache keyed by (residue, ell) is safe.
    return mult_order(residue, ell)


@lru_cache(maxsize=None)
def _is_small_prime(m: int) -> bool:
    from .numth import is_prime

    return is_prime(m)


@lru_cache(maxsize=65536)
def find_conductor(n: int, ell_max: int = DEFAULT_ELL_MAX) -> int:
    """Smallest prime ell <= ell_max with n a primitive root mod ell.

    Even perfect powers are rejected up front via PerfectPower; odd
    powers such as cubes can still be primitive roots and are searched
    normally.  Raises NoConductor when the bound is exhausted.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    power = is_perfect_power(n)
    if power is not None and power[1] % 2 == 0:
        raise PerfectPower(*power)
    ell = 3
    while ell <= ell_max:
        if _is_small_prime(ell) and conductor_failure(n, ell) is None:
            return ell
        ell += 2
    raise NoConductor(f"no conductor for {n} below {ell_max}")


@dataclass(frozen=True)
class RingDescriptor:
    """The extension ring S for a given (n, ell) pair."""

    n: int
    ell: int
    d: int = field(init=False)
    sigma_exponent: int = field(init=False)

    def __post_init__(self):
        if self.n < 3 or self.n % 2 == 0:
            raise InvalidConductor("n must be odd and >= 3")
        failure = conductor_failure(self.n, self.ell)
        if failure is not None:
            raise InvalidConductor(f"ell={self.ell} for n={self.n}: {failure}")
        object.__setattr__(self, "d", self.ell - 1)
        object.__setattr__(self, "sigma_exponent", self.n % self.ell)

    def element(self, coeffs) -> tuple[int, ...]:
        """Canonicalize a coefficient sequence (length <= d) into S."""
        coeffs = list(coeffs)
        if len(coeffs) > self.d:
            raise ValueError(f"at most {self.d} coefficients expected")
        coeffs += [0] * (self.d - len(coeffs))
        return tuple(c % self.n for c in coeffs)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.d

    def one(self) -> tuple[int, ...]:
        return self.element([1])

    def omega(self) -> tuple[int, ...]:
        """The image of X, a primitive ell-th root of unity in S."""
        return self.element([0, 1])


def ring_add(R: RingDescriptor, a, b) -> tuple[int, ...]:
    return tuple((x + y) % R.n for x, y in zip(a, b))


def ring_sub(R: RingDescriptor, a, b) -> tuple[int, ...]:
    return tuple((x - y) % R.n for x, y in zip(a, b))


def ring_mul(R: RingDescriptor, a, b) -> tuple[int, ...]:
    """Product in S: convolution with X**ell = 1, then fold the top term."""
    n, ell = R.n, R.ell
    acc = [0] * ell
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                k = i + j
                if k >= ell:
                    k -= ell
                acc[k] += ai * bj
    top = acc[ell - 1]
    return tuple((c - top) % n for c in acc[: ell - 1])


def ring_pow(R: RingDescriptor, a, e: int) -> tuple[int, ...]:
    """a**e in S by square-and-multiply (e >= 0)."""
    if e < 0:
        raise ValueError("negative exponent")
    result = R.one()
    acc = tuple(a)
    while e:
        if e & 1:
            result = ring_mul(R, result, acc)
        acc = ring_mul(R, acc, acc)
        e >>= 1
    return result


def sigma_apply(R: RingDescriptor, x, j: int = 1) -> tuple[int, ...]:
    """Apply sigma**j, the substitution X -> X**(n**j mod ell)."""
    u = pow(R.sigma_exponent, j, R.ell)
    acc = [0] * R.ell
    for i, ci in enumerate(x):
        acc[i * u % R.ell] += ci
    top = acc[R.ell - 1]
    return tuple((c - top) % R.n for c in acc[: R.ell - 1])


@dataclass(frozen=True)
class Invertibility:
    """Outcome of inverting an element of S.

    status is "invertible" (inverse set), "zero", or "zero-divisor"
    (factor set: a nontrivial divisor of n revealed by a leading
    coefficient that is not invertible mod n).
    """

    status: str
    inverse: tuple[int, ...] | None = None
    factor: int | None = None


def _poly_trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def invertibility(R: RingDescriptor, x) -> Invertibility:
    """Extended Euclid of x against 1 + X + ... + X**(ell-1) over Z/nZ.

    Every division step needs the divisor's leading coefficient to be a
    unit mod n; when it is not, its gcd with n is a nontrivial factor
    and the routine stops there with a zero-divisor report.  That exit
    is deliberately conservative: a unit of S can still surface a
    factor this way when an intermediate coefficient shares one with n,
    which for a compositeness test is a win, not an error.  Use is_unit
    for the exact membership question.  With the conductor invariants
    in force the remainder sequence can only terminate in a constant,
    so the routine is total.
    """
    n = R.n
    r0 = [1] * R.ell
    r1 = _poly_trim([c % n for c in x])
    if not r1:
        return Invertibility("zero")
    # Bezout coefficients tracking r = s * x  (mod the modulus polynomial)
    s0: list[int] = []
    s1: list[int] = [1]
    while r1:
        lead = r1[-1]
        g = math.gcd(lead, n)
        if g > 1:
            return Invertibility("zero-divisor", factor=g)
        inv_lead = pow(lead, -1, n)
        quotient = [0] * (len(r0) - len(r1) + 1)
        rem = list(r0)
        for shift in range(len(rem) - len(r1), -1, -1):
            coef = rem[shift + len(r1) - 1] * inv_lead % n
            if coef:
                quotient[shift] = coef
                for i, c in enumerate(r1):
                    rem[shift + i] = (rem[shift + i] - coef * c) % n
        _poly_trim(rem)
        new_s = _poly_sub(s0, _poly_mul(quotient, s1, n), n)
        r0, r1 = _poly_trim(list(r1)), rem
        s0, s1 = s1, new_s
    if len(r0) != 1:
        # Impossible once n is a primitive root mod ell: a common factor
        # of x and the modulus would need degree divisible by every
        # residue degree, whose lcm is already d.
        raise ArithmeticError("nonconstant gcd despite conductor invariants")
    g = math.gcd(r0[0], n)
    if g > 1:
        return Invertibility("zero-divisor", factor=g)
    scale = pow(r0[0], -1, n)
    inverse = R.element([c * scale % n for c in s0])
    return Invertibility("invertible", inverse=inverse)


def _poly_mul(a: list[int], b: list[int], n: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % n
    return _poly_trim(out)


def _poly_sub(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % n
    return _poly_trim(out)


def ring_norm(R: RingDescriptor, x) -> int:
    """Product of all sigma-conjugates of x, as an element of Z/nZ.

    The product is sigma-invariant, hence a constant; x is a unit of S
    exactly when its norm is a unit of Z/nZ.
    """
    acc = tuple(x)
    for j in range(1, R.d):
        acc = ring_mul(R, acc, sigma_apply(R, x, j))
    assert not any(acc[1:]), "ring norm must be a constant"
    return acc[0]


def is_unit(R: RingDescriptor, x) -> bool:
    """Exact invertibility of x in S, decided through the ring norm."""
    return math.gcd(ring_norm(R, x), R.n) == 1


@dataclass(frozen=True)
class GaloisOutcome:
    """Result of one Galois round: "pass", "fail", or "factor-found"."""

    status: str
    factor: int | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def galois_test(R: RingDescriptor, x) -> GaloisOutcome:
    """One round on a nonzero x: pass iff x is a unit and sigma(x) = x**n.

    A zero divisor certifies n composite; when it also reveals an
    integer factor the outcome carries it.
    """
    x = tuple(x)
    if all(c % R.n == 0 for c in x):
        raise ValueError("x must be nonzero")
    inv = invertibility(R, x)
    if inv.status == "zero-divisor":
        return GaloisOutcome("factor-found", factor=inv.factor)
    if sigma_apply(R, x) == ring_pow(R, x, R.n):
        return GaloisOutcome("pass")
    return GaloisOutcome("fail")


@dataclass(frozen=True)
class PrimeLocalData:
    """How a prime p of n sits inside S.

    f: residue degree, the order of p mod ell (so S/pS is a product of
       m = d/f copies of GF(p**f))
    e: discrete log of p to base n mod ell
    z: e/m reduced mod f, coprime to f; t: inverse of z mod f.
    Both are 0 when f = 1.  The p-power Frobenius acts as sigma**(z*m).
    """

    p: int
    f: int
    m: int
    e: int
    z: int
    t: int


def _bsgs_dlog(base: int, target: int, ell: int, order: int) -> int:
    """Discrete log in (Z/ell)^*: smallest e with base**e = target."""
    step = math.isqrt(order) + 1
    table = {}
    cur = 1
    for j in range(step):
        table.setdefault(cur, j)
        cur = cur * base % ell
    giant = pow(base, -step, ell)
    gamma = target % ell
    for i in range(step + 1):
        j = table.get(gamma)
        if j is not None:
            return (i * step + j) % order
        gamma = gamma * giant % ell
    raise ArithmeticError(f"dlog of {target} base {base} mod {ell} not found")


def local_data(n: int, ell: int, p: int) -> PrimeLocalData:
    """Local invariants of prime p for the ring with conductor ell."""
    d = ell - 1
    f = _order_mod_ell(p % ell, ell)
    m = d // f
    e = _bsgs_dlog(n % ell, p % ell, ell, d)
    if f == 1:
        return PrimeLocalData(p=p, f=f, m=m, e=e, z=0, t=0)
    assert e % m == 0, "dlog of p must be a multiple of d/f"
    z = (e // m) % f
    assert math.gcd(z, f) == 1
    t = pow(z, -1, f)
    assert pow(n, z * m, ell) == p % ell
    return PrimeLocalData(p=p, f=f, m=m, e=e, z=z, t=t)


def count_Gal(n: int, ell: int) -> int:
    """Exact bad-witness count for the Galois round: the number of
    invertible x in S with sigma(x) = x**n, as a product of local gcds."""
    RingDescriptor(n, ell)
    result = 1
    for p in factorize(n).primes():
        loc = local_data(n, ell, p)
        result *= math.gcd(n**loc.m - p**loc.t, p**loc.f - 1)
    return result


def count_D(n: int, ell: int) -> int:
    """Product over p | n of gcd(p**f - 1, n**d - 1)."""
    RingDescriptor(n, ell)
    d = ell - 1
    result = 1
    for p in factorize(n).primes():
        f = _order_mod_ell(p % ell, ell)
        result *= math.gcd(p**f - 1, n**d - 1)
    return result


def count_H(n: int, d: int) -> int:
    """Product over p | n of gcd(p**d - 1, n**d - 1); needs no conductor."""
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    result = 1
    for p in factorize(n).primes():
        result *= math.gcd(p**d - 1, n**d - 1)
    return result


def cofactor_k(n: int, ell: int) -> int:
    """The exact ratio (prod over p of p**f - 1) / count_D(n, ell)."""
    RingDescriptor(n, ell)
    numerator = 1
    for p in factorize(n).primes():
        f = _order_mod_ell(p % ell, ell)
        numerator *= p**f - 1
    denominator = count_D(n, ell)
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise NonIntegral(f"{numerator} not divisible by {denominator}")
    return quotient


def unit_count(n: int, ell: int) -> int:
    """Order of the unit group of S: prod p**((v-1)d) * (p**f - 1)**m."""
    RingDescriptor(n, ell)
    d = ell - 1
    result = 1
    for p, v in factorize(n).factors:
        f = _order_mod_ell(p % ell, ell)
        m = d // f
        result *= p ** ((v - 1) * d) * (p**f - 1) ** m
    return result


def _vec_fold(acc: np.ndarray, n: int) -> np.ndarray:
    """Reduce length-ell rows to canonical d coefficients mod n."""
    return (acc[:, :-1] - acc[:, -1:]) % n


def _vec_ring_mul(R: RingDescriptor, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ell, d, n = R.ell, R.d, R.n
    acc = np.zeros((a.shape[0], ell), dtype=np.int64)
    for i in range(d):
        col = a[:, i]
        for j in range(d):
            acc[:, (i + j) % ell] += col * b[:, j]
    return _vec_fold(acc, n)


def _vec_sigma(R: RingDescriptor, x: np.ndarray, j: int = 1) -> np.ndarray:
    u = pow(R.sigma_exponent, j, R.ell)
    acc = np.zeros((x.shape[0], R.ell), dtype=np.int64)
    for i in range(R.d):
        acc[:, i * u % R.ell] += x[:, i]
    return _vec_fold(acc, R.n)


def _vec_ring_pow(R: RingDescriptor, x: np.ndarray, e: int) -> np.ndarray:
    result = np.zeros_like(x)
    result[:, 0] = 1
    acc = x % R.n
    while e:
        if e & 1:
            result = _vec_ring_mul(R, result, acc)
        acc = _vec_ring_mul(R, acc, acc)
        e >>= 1
    return result


def brute_Gal(n: int, ell: int) -> int:
    """Oracle: enumerate all of S and count Galois-passing units.

    Independent of count_Gal: no factorization of n, just the defining
    condition checked for every coefficient vector.  Invertibility is
    decided through the ring norm, the product of all sigma-conjugates,
    which lands in Z/nZ and is a unit exactly when x is.
    """
    R = RingDescriptor(n, ell)
    d = R.d
    total = n**d
    if total > _BRUTE_LIMIT:
        raise BudgetExceeded(f"{n}**{d} elements exceed {_BRUTE_LIMIT}")
    idx = np.arange(total, dtype=np.int64)
    coeffs = np.empty((total, d), dtype=np.int64)
    div = np.int64(1)
    for i in range(d):
        coeffs[:, i] = idx // div % n
        div *= n
    norm = coeffs.copy()
    for j in range(1, d):
        norm = _vec_ring_mul(R, norm, _vec_sigma(R, coeffs, j))
    assert not norm[:, 1:].any(), "ring norm must be a constant"
    invertible = np.gcd(norm[:, 0], n) == 1
    match = np.all(_vec_ring_pow(R, coeffs, n) == _vec_sigma(R, coeffs), axis=1)
    return int(np.count_nonzero(invertible & match))

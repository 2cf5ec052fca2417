"""Fermat and Miller-Rabin witnesses and exact bad-witness counts.

A "bad witness" for composite n is a base the test fails to reject.
Both counts come in two flavors: a closed-form product over the prime
factors of n, and a direct enumeration oracle used to cross-check it.
The two paths are kept independent on purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numth import BudgetExceeded, NotCoprime, factorize, two_adic_split

_BRUTE_LIMIT = 10**6


def fermat_witness(n: int, a: int) -> bool:
    """True when base a passes the Fermat test a**(n-1) = 1 mod n.

    Composite n passing means a is a bad witness (a "Fermat liar").
    """
    _check_base(n, a)
    return pow(a, n - 1, n) == 1


def mr_witness(n: int, a: int) -> bool:
    """True when base a passes the Miller-Rabin test for odd n >= 3."""
    _check_base(n, a)
    if n % 2 == 0:
        raise ValueError("n must be odd")
    k, m = two_adic_split(n - 1)
    x = pow(a, m, n)
    if x == 1:
        return True
    for _ in range(k):
        if x == n - 1:
            return True
        x = x * x % n
    return False


def _check_base(n: int, a: int) -> None:
    if n < 3:
        raise ValueError("n must be >= 3")
    if not 1 <= a < n:
        raise ValueError("base out of range")
    if math.gcd(a, n) != 1:
        raise NotCoprime(f"gcd({a}, {n}) > 1")


@dataclass(frozen=True)
class MrParams:
    """Shape parameters of n - 1 driving the Miller-Rabin count.

    k, m:  n - 1 = 2**k * m with m odd
    v:     min over p | n of the 2-adic valuation of p - 1
    w:     number of distinct primes dividing n
    s:     product over p | n of gcd(m, odd part of p - 1)
    """

    n: int
    k: int
    m: int
    v: int
    w: int
    s: int


def mr_params(n: int) -> MrParams:
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    k, m = two_adic_split(n - 1)
    primes = factorize(n).primes()
    v = min(two_adic_split(p - 1)[0] for p in primes)
    s = 1
    for p in primes:
        s *= math.gcd(m, two_adic_split(p - 1)[1])
    return MrParams(n=n, k=k, m=m, v=v, w=len(primes), s=s)


def count_F(n: int) -> int:
    """Exact number of Fermat-passing bases: prod gcd(p-1, n-1)."""
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    result = 1
    for p in factorize(n).primes():
        result *= math.gcd(p - 1, n - 1)
    return result


def count_MR(n: int) -> int:
    """Exact number of Miller-Rabin-passing bases for odd n >= 3.

    (1 + (2**(v*w) - 1) / (2**w - 1)) * s, in exact integer arithmetic:
    the fraction is the geometric sum 1 + 2**w + ... + 2**(w*(v-1)).
    """
    par = mr_params(n)
    geometric = sum(1 << (par.w * i) for i in range(par.v))
    return (1 + geometric) * par.s


def count_MR_rounds(n: int, r: int) -> int:
    """Bad-witness count for r independent Miller-Rabin rounds."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return count_MR(n) ** r


def _vec_powmod(base: np.ndarray, exponent: int, n: int) -> np.ndarray:
    """Elementwise base**exponent mod n on int64 arrays (n <= 10**6)."""
    result = np.ones_like(base)
    acc = base % n
    e = exponent
    while e:
        if e & 1:
            result = result * acc % n
        acc = acc * acc % n
        e >>= 1
    return result


def _unit_bases(n: int) -> np.ndarray:
    if n > _BRUTE_LIMIT:
        raise BudgetExceeded(f"enumeration capped at {_BRUTE_LIMIT}, got {n}")
    a = np.arange(1, n, dtype=np.int64)
    return a[np.gcd(a, n) == 1]


def brute_F(n: int) -> int:
    """Oracle: count Fermat-passing units by full enumeration."""
    if n < 3:
        raise ValueError("n must be >= 3")
    a = _unit_bases(n)
    return int(np.count_nonzero(_vec_powmod(a, n - 1, n) == 1))


def brute_MR(n: int) -> int:
    """Oracle: count Miller-Rabin-passing units by full enumeration."""
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    a = _unit_bases(n)
    k, m = two_adic_split(n - 1)
    x = _vec_powmod(a, m, n)
    good = x == 1
    for _ in range(k):
        good |= x == n - 1
        x = x * x % n
    return int(np.count_nonzero(good))


def is_carmichael(n: int) -> bool:
    """Korselt's criterion: squarefree composite with p-1 | n-1 for all p."""
    if n < 3 or n % 2 == 0:
        return False
    fac = factorize(n).factors
    if len(fac) < 2:
        return False
    return all(e == 1 and (n - 1) % (p - 1) == 0 for p, e in fac)


def multi_round_mr(n: int, r: int, rng) -> bool:
    """Run r Miller-Rabin rounds with bases drawn by the rng contract.

    Bases are uniform on [1, n); a base sharing a factor with n already
    proves n composite, so such a draw counts as a failed round.
    Accepts a seed or a CounterRng; each round uses its own stream.
    """
    from .rng import CounterRng

    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    if r < 0:
        raise ValueError("r must be >= 0")
    streams = CounterRng.coerce(rng)
    for i in range(r):
        a = int(streams.stream(i).integers(1, n))
        if math.gcd(a, n) != 1:
            return False
        if not mr_witness(n, a):
            return False
    return True

"""Elementary number-theoretic utilities.

Everything here works on plain Python integers.  Factorization is meant
for desk-scale inputs (up to about 10**12): trial division by a cached
prime table, then Pollard rho splitting with a deterministic
Miller-Rabin certification of every prime factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce


class NotCoprime(ValueError):
    """Raised when an argument shares a factor with the modulus."""


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its stated budget."""


_TRIAL_BOUND = 10_000

# Deterministic Miller-Rabin base set, valid for n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, by sieve of Eratosthenes."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray((limit - p * p) // p + 1)
    return [i for i, flag in enumerate(sieve) if flag]


@lru_cache(maxsize=None)
def _trial_primes() -> tuple[int, ...]:
    return tuple(primes_up_to(_TRIAL_BOUND))


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """base**exponent mod modulus by square-and-multiply.

    Delegates to the builtin three-argument pow, which implements
    exactly that.
    """
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    if exponent < 0:
        raise ValueError("negative exponent")
    return pow(base, exponent, modulus)


def two_adic_split(k: int) -> tuple[int, int]:
    """Write k = 2**e * m with m odd; return (e, m).

    Callers wanting the largest odd divisor of k-1 apply this to k-1.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    e = (k & -k).bit_length() - 1
    return e, k >> e


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (fixed base set)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    k, m = two_adic_split(n - 1)
    for a in _MR_BASES:
        x = pow(a, m, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(k - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of composite n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed to split {n}")


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of a positive integer.

    factors lists (prime, exponent) pairs with strictly increasing
    primes; the product reconstructs n exactly.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def reconstruct(self) -> int:
        return reduce(lambda acc, pe: acc * pe[0] ** pe[1], self.factors, 1)


def factorize(n: int) -> Factorization:
    """Full prime factorization of n >= 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    remaining = n
    counts: dict[int, int] = {}
    for p in _trial_primes():
        if p * p > remaining:
            break
        while remaining % p == 0:
            counts[p] = counts.get(p, 0) + 1
            remaining //= p
    # What is left is 1, a prime, or a product of primes > 10**4.
    stack = [remaining] if remaining > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack.extend((root, root))
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    factors = tuple(sorted(counts.items()))
    assert reduce(lambda acc, pe: acc * pe[0] ** pe[1], factors, 1) == n
    return Factorization(n, factors)


def euler_phi(n: int) -> int:
    """Euler's totient of n."""
    result = 1
    for p, e in factorize(n).factors:
        result *= p ** (e - 1) * (p - 1)
    return result


def carmichael_lambda(n: int) -> int:
    """Exponent of the unit group mod n (Carmichael's function)."""
    if n == 1:
        return 1
    parts = []
    for p, e in factorize(n).factors:
        if p == 2 and e >= 3:
            parts.append(2 ** (e - 2))
        else:
            parts.append(p ** (e - 1) * (p - 1))
    return math.lcm(*parts)


def von_mangoldt_base(s: int) -> int | None:
    """The prime p if s is a prime power p**j (j >= 1), else None."""
    if s < 2:
        return None
    factors = factorize(s).factors
    if len(factors) == 1:
        return factors[0][0]
    return None


def mult_order(a: int, m: int) -> int:
    """Multiplicative order of a modulo m.

    Raises NotCoprime when gcd(a, m) > 1.  The order is found by
    reducing lambda(m) prime by prime, so it costs one factorization of
    lambda(m) rather than a scan.
    """
    if m <= 0:
        raise ValueError("modulus must be positive")
    if math.gcd(a, m) != 1:
        raise NotCoprime(f"gcd({a}, {m}) > 1")
    if m == 1:
        return 1
    order = carmichael_lambda(m)
    for p, _ in factorize(order).factors:
        while order % p == 0 and pow(a, order // p, m) == 1:
            order //= p
    return order


def _unity_roots_prime_power(p: int, e: int, d: int) -> int:
    """Solutions of y**d = 1 in the units mod p**e."""
    if p == 2:
        if e == 1:
            return 1
        if e == 2:
            return math.gcd(d, 2)
        return math.gcd(d, 2) * math.gcd(d, 1 << (e - 2))
    # Units mod an odd prime power form a cyclic group.
    return math.gcd(d, p ** (e - 1) * (p - 1))


def unity_root_count(s: int, d: int) -> int:
    """Number of units y mod s with y**d = 1, by CRT over prime powers."""
    if s < 1 or d < 1:
        raise ValueError("s and d must be positive")
    result = 1
    for p, e in factorize(s).factors:
        result *= _unity_roots_prime_power(p, e, d)
    return result


def lcm_range(bound: int) -> int:
    """lcm(1, 2, ..., bound)."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    return reduce(math.lcm, range(2, bound + 1), 1)


# exp(e) twice-iterated: below this x the exponent in L_of is negative.
_EEE = math.exp(math.exp(math.e))


def L_of(x: float) -> float:
    """The subexponential scale exp(log x * logloglog x / loglog x).

    Clamped to 1 where the exponent would be undefined or negative,
    i.e. for x below exp(exp(e)).
    """
    if x <= _EEE:
        return 1.0
    loglog = math.log(math.log(x))
    return math.exp(math.log(x) * math.log(loglog) / loglog)


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k)))
    while r > 1 and r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def is_perfect_power(n: int) -> tuple[int, int] | None:
    """(b, k) with b**k == n and k >= 2 minimal, or None."""
    if n < 4:
        return None
    for k in range(2, n.bit_length() + 1):
        b = _iroot(n, k)
        if b >= 2 and b**k == n:
            return b, k
    return None


def divisor_count(n: int) -> int:
    """tau(n), the number of positive divisors."""
    result = 1
    for _, e in factorize(n).factors:
        result *= e + 1
    return result


def distinct_prime_count(n: int) -> int:
    """omega(n), the number of distinct prime factors."""
    return len(factorize(n).factors)

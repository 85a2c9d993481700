"""Residue-ring utilities: units, involutions, weight sets, and CRT splits.

Everything here is exact integer arithmetic.  A modulus is a plain int >= 2;
elements of Z_n are ints in range(n).
"""

from dataclasses import dataclass
from functools import cached_property
from math import gcd

from .errors import InvalidSError, NoValidSplitError


def _check_modulus(n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ValueError(f"modulus must be an integer >= 2, got {n!r}")
    return n


def divisors(n):
    """All positive divisors of n, ascending."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"need a positive integer, got {n!r}")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def units(n):
    """The multiplicative units of Z_n, ascending."""
    _check_modulus(n)
    return [a for a in range(1, n) if gcd(a, n) == 1]


def distinct_prime_factors(n):
    """Distinct primes dividing n, ascending."""
    _check_modulus(n)
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def is_squarefree(n):
    """True iff no prime square divides n."""
    _check_modulus(n)
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return False
        p += 1
    return True


def involutions(n):
    """Nontrivial square roots of 1 in Z_n: s*s == 1 (mod n), s not in {1, n-1}.

    Returned ascending; empty when Z_n has only the trivial roots.
    """
    _check_modulus(n)
    return [s for s in range(2, n - 1) if (s * s) % n == 1]


@dataclass(frozen=True, init=False)
class WeightSet:
    """A nonempty set of nonzero weights in Z_n, stored sorted and reduced."""

    n: int
    weights: tuple

    def __init__(self, n, weights):
        _check_modulus(n)
        reduced = sorted({w % n for w in weights})
        if not reduced:
            raise ValueError("weight set must be nonempty")
        if reduced[0] == 0:
            raise ValueError("weights must be nonzero modulo n")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "weights", tuple(reduced))

    def __iter__(self):
        return iter(self.weights)

    def __len__(self):
        return len(self.weights)

    def __contains__(self, w):
        return (w % self.n) in self.weights


def quadratic_residue_weights(n):
    """The squares of units of Z_n as a WeightSet.  Requires n >= 3."""
    _check_modulus(n)
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    return WeightSet(n, {(a * a) % n for a in units(n)})


@dataclass(frozen=True)
class CrtSplit:
    """A coprime factorization n = n1 * n2 with s = -1 mod n1 and s = +1 mod n2.

    Both factors must be >= 3 and s must be a nontrivial involution of Z_n.
    """

    n: int
    s: int
    n1: int
    n2: int

    def __post_init__(self):
        _check_modulus(self.n)
        n, s, n1, n2 = self.n, self.s, self.n1, self.n2
        if (s * s) % n != 1 or s % n in (0, 1, n - 1):
            raise InvalidSError(f"s={s} is not a nontrivial involution mod {n}")
        if n1 * n2 != n or gcd(n1, n2) != 1:
            raise ValueError(f"{n1} * {n2} is not a coprime factorization of {n}")
        if n1 < 3 or n2 < 3:
            raise ValueError(f"both factors must be >= 3, got ({n1}, {n2})")
        if s % n1 != n1 - 1 or s % n2 != 1:
            raise ValueError(
                f"s={s} is not -1 mod {n1} and +1 mod {n2}"
            )

    @cached_property
    def _crt_coeffs(self):
        # e1 = 1 mod n1, 0 mod n2; e2 = 0 mod n1, 1 mod n2.
        n, n1, n2 = self.n, self.n1, self.n2
        e1 = (n2 * pow(n2, -1, n1)) % n
        e2 = (n1 * pow(n1, -1, n2)) % n
        return e1, e2


def crt_split(n, s):
    """The preferred CRT split of (n, s); see CrtSplit for the constraints.

    When several factorizations qualify, a split with even n1 wins (there is
    at most one such candidate); otherwise the candidate with smallest n1.
    Raises InvalidSError for a bad s and NoValidSplitError when no coprime
    factorization with both factors >= 3 matches the sign pattern of s.
    """
    _check_modulus(n)
    s %= n
    if (s * s) % n != 1 or s in (0, 1, n - 1):
        raise InvalidSError(f"s={s} is not a nontrivial involution mod {n}")
    found = []
    for n1 in divisors(n):
        n2 = n // n1
        if n1 < 3 or n2 < 3 or gcd(n1, n2) != 1:
            continue
        if s % n1 == n1 - 1 and s % n2 == 1:
            found.append(CrtSplit(n, s, n1, n2))
    if not found:
        raise NoValidSplitError(
            f"no coprime split of n={n} with both factors >= 3 fits s={s}"
        )
    for split in found:
        if split.n1 % 2 == 0:
            return split
    return found[0]


def psi(a, split):
    """Image of a in Z_{n1} x Z_{n2} under the CRT isomorphism."""
    return a % split.n1, a % split.n2


def psi_inv(pair, split):
    """Preimage in Z_n of a pair (a1, a2) in Z_{n1} x Z_{n2}."""
    a1, a2 = pair
    e1, e2 = split._crt_coeffs
    return (a1 * e1 + a2 * e2) % split.n

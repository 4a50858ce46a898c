"""Base-p digit arithmetic: expansions, truncations, shifted tails, carry bits.

Everything downstream (operator formulas, block vectors) is driven by the
base-p digits of lattice indices.  All predicates here are evaluated from
integer comparisons on the fly, never from cached digit patterns.
"""

from __future__ import annotations

from dataclasses import dataclass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def truncation(m: int, p: int, h: int) -> int:
    """Digits of m below position h, reassembled: sum of m_l * p**l for l < h."""
    return m % p**h


def tail(m: int, p: int, h: int) -> int:
    """Digits 1..h-1 of m, shifted one place down: sum of m_l * p**(l-1)."""
    return (m % p**h) // p


@dataclass(frozen=True)
class PAdicDigits:
    """Base-p expansion of a nonnegative integer, least-significant first."""

    value: int
    prime: int
    length: int
    digits: tuple[int, ...]

    def truncation(self, h: int) -> int:
        if not 0 <= h <= self.length:
            raise ValueError(f"truncation index {h} not in 0..{self.length}")
        return truncation(self.value, self.prime, h)

    def tail(self, h: int) -> int:
        if not 1 <= h <= self.length:
            raise ValueError(f"tail index {h} not in 1..{self.length}")
        return tail(self.value, self.prime, h)


def expand(m: int, p: int, n: int) -> PAdicDigits:
    """Expand 0 <= m < p**n into its n base-p digits."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if n < 1:
        raise ValueError(f"length n={n} must be positive")
    if not 0 <= m < p**n:
        raise ValueError(f"m={m} out of range 0..p^n-1 for p={p}, n={n}")
    digits = []
    rest = m
    for _ in range(n):
        rest, d = divmod(rest, p)
        digits.append(d)
    return PAdicDigits(value=m, prime=p, length=n, digits=tuple(digits))


def carry_bit(i: int, j: int, p: int, h: int) -> int:
    """1 iff adding one to i+j propagates a base-p carry past digit h.

    Equivalently: 0 iff truncation(i,h+1) + truncation(j,h+1) < p**(h+1) - 1.
    """
    if i < 0 or j < 0:
        raise ValueError("i and j must be nonnegative")
    if h < 0:
        raise ValueError(f"digit index h={h} must be nonnegative")
    block = p ** (h + 1)
    return 1 if i % block + j % block + 1 >= block else 0


def carry_comparisons(
    i: int, j: int, p: int, n: int, h: int
) -> tuple[tuple[bool, bool], ...]:
    """Evaluate both sides of the four digit-sum comparisons used to track
    how carry bits transform under the index maps of F and V.

    Returns four (left, right) boolean pairs:
      1. left:  tail(i,h) + tail(j,h) < p**h - 1
         right: truncation(i,h+1) + truncation(j,h+1) < p**(h+1) - 1
         (left implies right; converse holds when i0 + j0 >= p - 1)
      2. left:  truncation(i,h+1) + truncation(j,h+1) < p**(h+1) - 1
         right: (p**h - 1 - tail(i,h)) + (p**h - 1 - tail(j,h)) >= p**h - 1
         (left implies right; converse holds when i0 + j0 < p - 1)
      3. left:  truncation(i,h) + truncation(j,h) < p**h - 1
         right: p - 1 + top_digit(j) + p*(trunc sum) < p**(h+1) - 1
         (equivalence)
      4. left:  same as 3
         right: 2*p**(h+1) - 2 - p*(trunc sum) - p - top_digit(j) >= p**(h+1) - 1
         (equivalence)
    """
    if not (1 <= i <= p**n and 1 <= j <= p**n):
        raise ValueError("i and j must lie in 1..p^n")
    if not 1 <= h <= n - 1:
        raise ValueError(f"digit index h={h} not in 1..{n - 1}")
    ph = p**h
    ph1 = p ** (h + 1)
    it, jt = tail(i, p, h), tail(j, p, h)
    ip1, jp1 = truncation(i, p, h + 1), truncation(j, p, h + 1)
    ip, jp = truncation(i, p, h), truncation(j, p, h)
    jtop = (j // p ** (n - 1)) % p
    pair1 = (it + jt < ph - 1, ip1 + jp1 < ph1 - 1)
    pair2 = (ip1 + jp1 < ph1 - 1, (ph - 1 - it) + (ph - 1 - jt) >= ph - 1)
    pair3 = (ip + jp < ph - 1, p - 1 + jtop + p * (ip + jp) < ph1 - 1)
    pair4 = (ip + jp < ph - 1, 2 * ph1 - 2 - (ip + jp) * p - p - jtop >= ph1 - 1)
    return (pair1, pair2, pair3, pair4)


def binom_mod(a: int, b: int, p: int) -> int:
    """Binomial coefficient C(a, b) mod p by digit-wise products.

    Keeps everything in machine integers: C(a,b) mod p is the product over
    base-p digit positions of C(a_l, b_l), and zero as soon as some b_l > a_l.
    """
    if b < 0 or b > a:
        return 0
    result = 1
    while a or b:
        ad, bd = a % p, b % p
        if bd > ad:
            return 0
        num = den = 1
        for k in range(bd):
            num = num * (ad - k) % p
            den = den * (k + 1) % p
        result = result * num * pow(den, p - 2, p) % p
        a //= p
        b //= p
    return result % p

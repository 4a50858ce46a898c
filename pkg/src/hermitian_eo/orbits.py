"""Orbits of the doubling map on Z/(2^n+1) - {0} and the module presentation
each orbit carries.

Every orbit is listed in doubling order starting from its smallest element.
Local maxima of the integer values along the cycle are generator blocks,
local minima carry one relation each: V^l applied to the nearest maximum on
the left cancels F^r applied to the nearest maximum on the right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .blocks import block_dimension
from .errors import ConsistencyError

MAX_ORBIT_EXPONENT = 30


@dataclass(frozen=True)
class Orbit:
    modulus: int  # 2^n + 1
    elements: tuple[int, ...]  # doubling cycle, canonical rotation (min first)

    @property
    def n(self) -> int:
        return (self.modulus - 1).bit_length() - 1

    @property
    def length(self) -> int:
        return len(self.elements)

    def validate(self) -> None:
        m = self.modulus
        if m != 2**self.n + 1:
            raise ValueError(f"modulus {m} is not of the form 2^n + 1")
        if not self.elements:
            raise ValueError("empty orbit")
        if min(self.elements) != self.elements[0]:
            raise ValueError("orbit not rotated to start at its minimum")
        for k, val in enumerate(self.elements):
            if not 1 <= val <= m - 1:
                raise ValueError(f"element {val} outside 1..{m - 1}")
            nxt = self.elements[(k + 1) % len(self.elements)]
            if nxt != 2 * val % m:
                raise ValueError(f"{nxt} does not follow {val} under doubling")


def _cycle_from(start: int, modulus: int) -> tuple[int, ...]:
    cycle = [start]
    cur = 2 * start % modulus
    while cur != start:
        cycle.append(cur)
        cur = 2 * cur % modulus
    shift = cycle.index(min(cycle))
    return tuple(cycle[shift:] + cycle[:shift])


@lru_cache(maxsize=None)
def enumerate_orbits(n: int) -> tuple[Orbit, ...]:
    """All doubling orbits covering 1..2^n, ordered by smallest element."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_ORBIT_EXPONENT:
        raise ValueError(f"n={n} beyond the size guard {MAX_ORBIT_EXPONENT}")
    modulus = 2**n + 1
    seen = bytearray(modulus)
    orbits = []
    for start in range(1, modulus):
        if seen[start]:
            continue
        cycle = _cycle_from(start, modulus)
        for val in cycle:
            seen[val] = 1
        orbit = Orbit(modulus=modulus, elements=cycle)
        orbit.validate()
        orbits.append(orbit)
    return tuple(orbits)


@dataclass(frozen=True)
class Relation:
    """V^left_exp B(left_parent) + F^right_exp B(right_parent) = 0."""

    minimum: int
    left_parent: int
    left_exp: int
    right_parent: int
    right_exp: int


@dataclass(frozen=True)
class OrbitStats:
    length: int
    maxima: tuple[int, ...]  # positions in the canonical cycle
    minima: tuple[int, ...]
    a_number: int
    relations: tuple[Relation, ...]


def orbit_stats(orbit: Orbit) -> OrbitStats:
    elems = orbit.elements
    r = len(elems)
    maxima = []
    minima = []
    for k, val in enumerate(elems):
        prev, nxt = elems[(k - 1) % r], elems[(k + 1) % r]
        if prev < val > nxt:
            maxima.append(k)
        elif prev > val < nxt:
            minima.append(k)
    max_set = set(maxima)
    relations = []
    for k in minima:
        left = next(d for d in range(1, r + 1) if (k - d) % r in max_set)
        right = next(d for d in range(1, r + 1) if (k + d) % r in max_set)
        relations.append(
            Relation(
                minimum=elems[k],
                left_parent=elems[(k - left) % r],
                left_exp=left,
                right_parent=elems[(k + right) % r],
                right_exp=right,
            )
        )
    if len(maxima) != len(minima):
        raise ConsistencyError("maxima and minima counts differ")
    return OrbitStats(
        length=r,
        maxima=tuple(maxima),
        minima=tuple(minima),
        a_number=len(maxima),
        relations=tuple(relations),
    )


@dataclass(frozen=True)
class FactorPresentation:
    """Generators-and-relations shape of the indecomposable factor an orbit
    contributes: one generator block per local maximum, one relation per
    local minimum, total dimension the orbit length."""

    generators: tuple[int, ...]  # block ids of the local maxima
    relations: tuple[Relation, ...]
    dimension: int
    a_number: int

    @property
    def relation_word(self) -> str:
        if self.a_number == 1:
            rel = self.relations[0]
            return f"{_power('F', rel.right_exp)}+{_power('V', rel.left_exp)}"
        return "; ".join(
            f"{_power('V', rel.left_exp)}*B{rel.left_parent}"
            f"+{_power('F', rel.right_exp)}*B{rel.right_parent}"
            for rel in self.relations
        )


def _power(sym: str, exp: int) -> str:
    return sym if exp == 1 else f"{sym}^{exp}"


def factor_presentation(orbit: Orbit) -> FactorPresentation:
    stats = orbit_stats(orbit)
    return FactorPresentation(
        generators=tuple(orbit.elements[k] for k in stats.maxima),
        relations=stats.relations,
        dimension=stats.length,
        a_number=stats.a_number,
    )


def multiplicity(orbit: Orbit, p: int, n: int) -> int:
    """Common block dimension along the orbit."""
    if orbit.n != n:
        raise ValueError(f"orbit lives over 2^{orbit.n}+1, not 2^{n}+1")
    dims = {block_dimension(t, p, n) for t in orbit.elements}
    if len(dims) != 1:
        raise ConsistencyError(f"block dimensions differ along orbit {orbit.elements}")
    return dims.pop()


def embed_short_orbit(orbit: Orbit, k: int) -> Orbit:
    """Transport an orbit over 2^c+1 to one over 2^(ck)+1 (k odd) by scaling
    every element by (2^(ck)+1)/(2^c+1)."""
    if k < 1 or k % 2 == 0:
        raise ValueError(f"k={k} must be a positive odd integer")
    c = orbit.n
    big_modulus = 2 ** (c * k) + 1
    scale = big_modulus // orbit.modulus
    if scale * orbit.modulus != big_modulus:
        raise ConsistencyError("modulus did not divide; k must be odd")
    cycle = tuple(scale * val for val in orbit.elements)
    shift = cycle.index(min(cycle))
    embedded = Orbit(modulus=big_modulus, elements=cycle[shift:] + cycle[:shift])
    embedded.validate()
    return embedded


def orbit_signature(orbit: Orbit) -> str:
    """Up/down pattern along the cycle: 1 where the element exceeds 2^(n-1).

    Together with the length this pins down the orbit, since the pattern
    spells out the binary expansion of the smallest element.
    """
    half = 2 ** (orbit.n - 1)
    return "".join("1" if val > half else "0" for val in orbit.elements)


def orbit_count_formula(n: int) -> int:
    """Number of doubling orbits, counted by necklace-style averaging over
    the odd divisors of n; matches the published count sequence."""
    total = 0
    for d in range(1, n + 1, 2):
        if n % d == 0:
            total += _euler_phi(d) * 2 ** (n // d)
    if total % (2 * n):
        raise ConsistencyError("orbit count formula did not divide evenly")
    return total // (2 * n)


def _euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)

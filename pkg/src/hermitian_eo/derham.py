"""Explicit basis of H^1_dR of the curve y^q + y = x^(q+1) and the action of
Frobenius and Verschiebung on it.

The basis has two halves indexed by lattice points (i, j) with i, j >= 0 and
i + j <= q - 2: the regular differentials x^i y^j dx ("omega" kind) and the
classes lifted from H^1(O) represented by y^(q-1) / (x^(i+1) y^j) ("f" kind).
On this basis F and V act as scaled permutations: each basis element is sent
to at most one basis element with a nonzero mod-p scalar.  That fact is what
makes every subspace computation downstream pure index combinatorics.

`cartier_oracle` recomputes V on the omega half by direct bivariate
polynomial manipulation, independently of the closed-form index formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import ConsistencyError
from .padic import binom_mod, is_prime

OMEGA = "omega"
FCLASS = "f"


@dataclass(frozen=True)
class BasisElement:
    kind: str
    i: int
    j: int

    def __str__(self) -> str:
        return f"{self.kind} {self.i} {self.j}"


@dataclass(frozen=True)
class SemilinearMap:
    """Scaled-permutation operator on basis indices.

    twist is +1 for the p-linear F and -1 for the p^-1-linear V; it is carried
    for reporting only, since mod-p scalars are Frobenius-fixed.  images[k] is
    None (the element is killed) or (target index, nonzero scalar mod p).
    """

    twist: int
    images: tuple[tuple[int, int] | None, ...]

    def target(self, idx: int) -> int | None:
        entry = self.images[idx]
        return None if entry is None else entry[0]

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, entry in enumerate(self.images) if entry is not None)

    def validate(self, p: int) -> None:
        seen_targets: set[int] = set()
        for k, entry in enumerate(self.images):
            if entry is None:
                continue
            tgt, scalar = entry
            if not 0 <= tgt < len(self.images):
                raise ConsistencyError(f"image target {tgt} out of range at index {k}")
            if scalar % p == 0:
                raise ConsistencyError(f"zero scalar at index {k}")
            if tgt in seen_targets:
                raise ConsistencyError(f"two sources map to target {tgt}")
            seen_targets.add(tgt)


def check_instance(p: int, n: int) -> None:
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if n < 1:
        raise ValueError(f"n={n} must be positive")
    if p**n > 2**62:
        raise ValueError(f"p^n={p**n} exceeds the machine-range guard")


def genus(p: int, n: int) -> int:
    q = p**n
    return q * (q - 1) // 2


def lattice_points(p: int, n: int) -> tuple[tuple[int, int], ...]:
    """All (i, j) with i, j >= 0 and i + j <= q - 2, ordered lexicographically."""
    check_instance(p, n)
    q = p**n
    return tuple((i, j) for i in range(q - 1) for j in range(q - 1 - i))


def basis_elements(p: int, n: int) -> tuple[BasisElement, ...]:
    """The 2g basis elements: all omega kind first (lex), then all f kind (lex)."""
    pts = lattice_points(p, n)
    return tuple(
        [BasisElement(OMEGA, i, j) for i, j in pts]
        + [BasisElement(FCLASS, i, j) for i, j in pts]
    )


def _require_in_delta(i: int, j: int, q: int, context: str) -> None:
    if i < 0 or j < 0 or i + j > q - 2:
        raise ConsistencyError(f"{context}: image ({i}, {j}) left the index lattice")


def v_on_omega(e: BasisElement, p: int, n: int) -> tuple[BasisElement, int] | None:
    """Image of a regular differential under V (the Cartier operator)."""
    if e.kind != OMEGA:
        raise ValueError("v_on_omega expects an omega-kind element")
    i, j = e.i, e.j
    i0, j0 = i % p, j % p
    if i0 + j0 < p - 1:
        return None
    q = p**n
    pn1 = p ** (n - 1)
    ii = pn1 * (p - 1 - i0) + i // p
    jj = pn1 * (i0 + j0 - (p - 1)) + j // p
    scalar = binom_mod(j0, i0 + j0 - (p - 1), p) * (-1) ** (i0 + j0 - (p - 1)) % p
    _require_in_delta(ii, jj, q, "V on omega")
    if scalar == 0:
        raise ConsistencyError(f"V on omega: scalar vanished at ({i}, {j})")
    return BasisElement(OMEGA, ii, jj), scalar


def f_on_omega(e: BasisElement) -> None:
    """F annihilates the image of the regular differentials."""
    if e.kind != OMEGA:
        raise ValueError("f_on_omega expects an omega-kind element")
    return None


def f_on_fclass(e: BasisElement, p: int, n: int) -> tuple[BasisElement, int]:
    """Image of an f-kind class under F; never zero.

    The image stays in the f half when the low n-1 digits of i and j sum
    below p^(n-1) - 1, and otherwise lands in the omega half.
    """
    if e.kind != FCLASS:
        raise ValueError("f_on_fclass expects an f-kind element")
    q = p**n
    pn1 = p ** (n - 1)
    itop, jtop = e.i // pn1, e.j // pn1
    iplus, jplus = e.i % pn1, e.j % pn1
    lstar = p - 1 - jtop - itop
    c = binom_mod(p - 1 - jtop, lstar, p) * (-1) ** lstar % p
    ii = p * iplus + (p - 1) - itop
    jj = p * jplus + jtop + itop
    if iplus + jplus < pn1 - 1:
        _require_in_delta(ii, jj, q, "F on f-class")
        scalar = c
        target = BasisElement(FCLASS, ii, jj)
    else:
        scalar = -(jtop + itop + 1) * c % p
        target = BasisElement(OMEGA, (q - 1) - ii, (q - 1) - (jj + 1))
        _require_in_delta(target.i, target.j, q, "F on f-class")
    if scalar == 0:
        raise ConsistencyError(f"F on f-class: scalar vanished at ({e.i}, {e.j})")
    return target, scalar


def v_on_fclass(e: BasisElement, p: int, n: int) -> tuple[BasisElement, int] | None:
    """Image of an f-kind class under V; zero iff i0 + j0 >= p - 1."""
    if e.kind != FCLASS:
        raise ValueError("v_on_fclass expects an f-kind element")
    i, j = e.i, e.j
    i0, j0 = i % p, j % p
    if i0 + j0 >= p - 1:
        return None
    q = p**n
    pn1 = p ** (n - 1)
    istar = pn1 * i0 + (pn1 - 1 - i // p)
    jstar = pn1 * (p - 2 - i0 - j0) + (pn1 - 1 - j // p)
    scalar = (
        (i0 + 1)
        * binom_mod(p - 1 - j0, p - 2 - j0 - i0, p)
        * (-1) ** (p - 2 - i0 - j0)
    ) % p
    _require_in_delta(istar, jstar, q, "V on f-class")
    if scalar == 0:
        raise ConsistencyError(f"V on f-class: scalar vanished at ({i}, {j})")
    return BasisElement(OMEGA, istar, jstar), scalar


def element_image(
    e: BasisElement, op: str, p: int, n: int
) -> tuple[BasisElement, int] | None:
    if op == "F":
        return f_on_omega(e) if e.kind == OMEGA else f_on_fclass(e, p, n)
    if op == "V":
        return v_on_omega(e, p, n) if e.kind == OMEGA else v_on_fclass(e, p, n)
    raise ValueError(f"unknown operator {op!r}")


@dataclass(frozen=True)
class DeRhamOperators:
    p: int
    n: int
    basis: tuple[BasisElement, ...]
    frobenius: SemilinearMap
    verschiebung: SemilinearMap

    def index_of(self, e: BasisElement) -> int:
        return _index_map(self.p, self.n)[e]

    @property
    def genus(self) -> int:
        return len(self.basis) // 2


@lru_cache(maxsize=None)
def _index_map(p: int, n: int) -> dict[BasisElement, int]:
    return {e: k for k, e in enumerate(basis_elements(p, n))}


@lru_cache(maxsize=None)
def build_operators(p: int, n: int) -> DeRhamOperators:
    """Build F and V over the full basis and check every structural invariant."""
    check_instance(p, n)
    basis = basis_elements(p, n)
    index = _index_map(p, n)
    f_images: list[tuple[int, int] | None] = []
    v_images: list[tuple[int, int] | None] = []
    for e in basis:
        for op, images in (("F", f_images), ("V", v_images)):
            hit = element_image(e, op, p, n)
            images.append(None if hit is None else (index[hit[0]], hit[1]))
    fmap = SemilinearMap(twist=+1, images=tuple(f_images))
    vmap = SemilinearMap(twist=-1, images=tuple(v_images))
    fmap.validate(p)
    vmap.validate(p)
    g = len(basis) // 2
    omega_half = set(range(g))
    f_kernel = {k for k in range(2 * g) if fmap.images[k] is None}
    v_image = {entry[0] for entry in vmap.images if entry is not None}
    if f_kernel != omega_half or v_image != omega_half:
        raise ConsistencyError("ker F and im V do not both equal the omega half")
    for k in range(2 * g):
        fv = vmap.images[k]
        if fv is not None and fmap.images[fv[0]] is not None:
            raise ConsistencyError(f"F(V(x)) nonzero at basis index {k}")
        vf = fmap.images[k]
        if vf is not None and vmap.images[vf[0]] is not None:
            raise ConsistencyError(f"V(F(x)) nonzero at basis index {k}")
    return DeRhamOperators(p=p, n=n, basis=basis, frobenius=fmap, verschiebung=vmap)


def cartier_rank(ops: DeRhamOperators, power: int) -> int:
    """Rank of the power-th iterate of V restricted to the omega half."""
    if power < 0:
        raise ValueError("power must be nonnegative")
    g = ops.genus
    count = 0
    for k in range(g):
        idx: int | None = k
        for _ in range(power):
            idx = ops.verschiebung.target(idx)
            if idx is None:
                break
        if idx is not None:
            count += 1
    return count


def cartier_rank_formula(p: int, n: int, power: int) -> int:
    """Closed form p^n (p+1)^i (p^(n-i) - 1) / 2^(i+1) for the rank of the
    i-th Cartier iterate on the regular differentials."""
    if not 1 <= power <= n:
        raise ValueError(f"power {power} not in 1..{n}")
    num = p**n * (p + 1) ** power * (p ** (n - power) - 1)
    den = 2 ** (power + 1)
    if num % den:
        raise ConsistencyError("rank formula did not divide evenly")
    return num // den


def a_number_formula(p: int, n: int) -> int:
    num = p**n * (p ** (n - 1) + 1) * (p - 1)
    if num % 4:
        raise ConsistencyError("a-number formula did not divide evenly")
    return num // 4


# --- independent Cartier computation on the omega half ---------------------

def _reduce_mod_curve(poly: dict[tuple[int, int], int], p: int, q: int) -> dict:
    """Rewrite y^q as x^(q+1) - y until every y-exponent is below q."""
    out: dict[tuple[int, int], int] = {}
    work = list(poly.items())
    while work:
        (a, b), c = work.pop()
        c %= p
        if c == 0:
            continue
        if b >= q:
            work.append(((a + q + 1, b - q), c))
            work.append(((a, b - q + 1), -c))
        else:
            out[(a, b)] = (out.get((a, b), 0) + c) % p
    return {k: v for k, v in out.items() if v % p}


def cartier_oracle(
    e: BasisElement, p: int, n: int, size_cap: int = 512
) -> tuple[BasisElement, int] | None:
    """Cartier image of x^i y^j dx computed by raw polynomial manipulation.

    Uses only the curve relation and the p-basis expansion rule: substitute
    y = x^(q+1) - y^q monomial by monomial until every y-exponent is a
    multiple of p, then keep the terms whose x-exponent is p-1 mod p and
    divide both exponents by p.  Small instances only.
    """
    if e.kind != OMEGA:
        raise ValueError("cartier_oracle expects an omega-kind element")
    check_instance(p, n)
    q = p**n
    if q > size_cap:
        raise ValueError(f"q={q} beyond the oracle size cap {size_cap}")
    work: dict[tuple[int, int], int] = {}
    for (a, b), c in _reduce_mod_curve({(e.i, e.j): 1}, p, q).items():
        b0 = b % p
        if b0 == 0:
            work[(a, b)] = (work.get((a, b), 0) + c) % p
            continue
        for l in range(b0 + 1):
            coeff = c * math.comb(b0, l) * (-1) ** l
            key = (a + (q + 1) * (b0 - l), (b - b0) + q * l)
            work[key] = (work.get(key, 0) + coeff) % p
    kept: dict[tuple[int, int], int] = {}
    for (a, b), c in work.items():
        if c % p == 0 or a % p != p - 1:
            continue
        key = ((a - (p - 1)) // p, b // p)
        kept[key] = (kept.get(key, 0) + c) % p
    kept = _reduce_mod_curve(kept, p, q)
    if not kept:
        return None
    if len(kept) != 1:
        raise ConsistencyError(f"Cartier image of {e} is not a single monomial")
    (a, b), c = next(iter(kept.items()))
    _require_in_delta(a, b, q, "Cartier oracle")
    return BasisElement(OMEGA, a, b), c % p

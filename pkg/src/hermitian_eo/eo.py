"""Ekedahl-Oort machinery over weighted permutation modules.

A weighted permutation module is the node-level shadow of a module whose F
and V act as scaled permutations: nodes carry positive integer weights and
each node has at most one F-target and one V-target.  Images and preimages
of node subsets are node subsets, so the canonical filtration and the final
type come out of pure set closure with no linear algebra.

Two constructions feed this engine: one node per de Rham basis element
(weight 1, brute force) and one node per block id with the block dimension
as weight (predicted from the doubling orbits).  The main cross-check is
that both produce the same final type.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from . import blocks as blocks_mod
from . import derham as derham_mod
from . import orbits as orbits_mod
from .errors import ConsistencyError


@dataclass(frozen=True)
class WeightedPermutationModule:
    weights: tuple[int, ...]
    f_arrow: tuple[int | None, ...]
    v_arrow: tuple[int | None, ...]
    labels: tuple[Hashable, ...] | None = None

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    def validate(self) -> None:
        size = self.size
        if not (len(self.f_arrow) == len(self.v_arrow) == size):
            raise ValueError("arrow tables must match the node count")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        for name, arrows in (("f", self.f_arrow), ("v", self.v_arrow)):
            hit: set[int] = set()
            for src, tgt in enumerate(arrows):
                if tgt is None:
                    continue
                if not 0 <= tgt < size:
                    raise ValueError(f"{name}-arrow target out of range at {src}")
                if tgt in hit:
                    raise ConsistencyError(f"{name}-arrows are not injective")
                hit.add(tgt)
        for src in range(size):
            vt = self.v_arrow[src]
            if vt is not None and self.f_arrow[vt] is not None:
                raise ConsistencyError(f"f(v(node {src})) is nonzero")
            ft = self.f_arrow[src]
            if ft is not None and self.v_arrow[ft] is not None:
                raise ConsistencyError(f"v(f(node {src})) is nonzero")
        f_kernel = {k for k in range(size) if self.f_arrow[k] is None}
        v_image = {t for t in self.v_arrow if t is not None}
        if f_kernel != v_image:
            raise ConsistencyError("ker(f) and im(v) differ as node sets")
        total = self.total_weight
        if total % 2:
            raise ConsistencyError("total weight is odd")
        if sum(self.weights[k] for k in f_kernel) != total // 2:
            raise ConsistencyError("ker(f) does not carry half the weight")

    def dim(self, nodes: frozenset[int]) -> int:
        return sum(self.weights[k] for k in nodes)

    def v_image(self, nodes: frozenset[int]) -> frozenset[int]:
        return frozenset(
            self.v_arrow[k] for k in nodes if self.v_arrow[k] is not None
        )

    def f_preimage(self, nodes: frozenset[int]) -> frozenset[int]:
        """ker(f) together with every node whose f-target lies in the set."""
        return frozenset(
            k
            for k in range(self.size)
            if self.f_arrow[k] is None or self.f_arrow[k] in nodes
        )


def from_derham(ops: derham_mod.DeRhamOperators) -> WeightedPermutationModule:
    """Weight-1 node per basis element; scalars are dropped on purpose, the
    subspace lattice of a scaled permutation module never sees them."""
    module = WeightedPermutationModule(
        weights=(1,) * len(ops.basis),
        f_arrow=tuple(ops.frobenius.target(k) for k in range(len(ops.basis))),
        v_arrow=tuple(ops.verschiebung.target(k) for k in range(len(ops.basis))),
        labels=ops.basis,
    )
    module.validate()
    return module


def from_orbits(
    orbits: Sequence[orbits_mod.Orbit], p: int, n: int
) -> WeightedPermutationModule:
    """One node per block id 1..2^n, weighted by block dimension, with the
    arrows the orbit combinatorics predicts: v doubles ids above 2^(n-1),
    f halves even ids."""
    covered = sorted(t for orbit in orbits for t in orbit.elements)
    if covered != list(range(1, 2**n + 1)):
        raise ValueError("orbits do not cover 1..2^n exactly once")
    half, modulus = 2 ** (n - 1), 2**n + 1
    ids = tuple(range(1, 2**n + 1))
    module = WeightedPermutationModule(
        weights=tuple(blocks_mod.block_dimension(t, p, n) for t in ids),
        f_arrow=tuple(t // 2 - 1 if t % 2 == 0 else None for t in ids),
        v_arrow=tuple(2 * t - modulus - 1 if t > half else None for t in ids),
        labels=ids,
    )
    module.validate()
    return module


def canonical_filtration(
    module: WeightedPermutationModule,
) -> tuple[frozenset[int], ...]:
    """Coarsest chain of node subsets stable under v and f-preimage.

    Starts from the zero and full subobjects and closes under both maps; the
    scaled-permutation shape guarantees (and this function checks) that the
    closure is totally ordered by inclusion.
    """
    everything = frozenset(range(module.size))
    found: set[frozenset[int]] = {frozenset(), everything}
    frontier = [frozenset(), everything]
    while frontier:
        current = frontier.pop()
        for derived in (module.v_image(current), module.f_preimage(current)):
            if derived not in found:
                found.add(derived)
                frontier.append(derived)
    chain = sorted(found, key=len)
    for smaller, larger in zip(chain, chain[1:]):
        if not smaller < larger:
            raise ConsistencyError(
                "canonical filtration closure is not a chain: "
                f"{sorted(smaller)} vs {sorted(larger)}"
            )
    return tuple(chain)


@dataclass(frozen=True)
class EOType:
    """Final type nu as run-length fragments over 1..genus.

    fragments is a tuple of (width, step) runs: step 0 keeps nu constant for
    width indices, step 1 raises it by one at each.  key_values are the last
    indices of the fragments (g always included).
    """

    genus: int
    fragments: tuple[tuple[int, int], ...]
    key_values: tuple[int, ...]

    def __post_init__(self) -> None:
        if sum(w for w, _ in self.fragments) != self.genus:
            raise ConsistencyError("fragments do not cover 1..genus")
        if any(step not in (0, 1) or w <= 0 for w, step in self.fragments):
            raise ConsistencyError("malformed fragment")

    @property
    def nu(self) -> tuple[int, ...]:
        out: list[int] = []
        level = 0
        for width, step in self.fragments:
            if step:
                out.extend(range(level + 1, level + width + 1))
                level += width
            else:
                out.extend([level] * width)
        return tuple(out)

    def nu_at(self, index: int) -> int:
        if not 1 <= index <= self.genus:
            raise ValueError(f"index {index} not in 1..{self.genus}")
        level = pos = 0
        for width, step in self.fragments:
            if index <= pos + width:
                return level + (index - pos) if step else level
            pos += width
            level += width if step else 0
        raise AssertionError("unreachable")

    @property
    def nu_rle(self) -> tuple[tuple[int, int], ...]:
        return self.fragments

    @property
    def p_rank(self) -> int:
        rank = 0
        for width, step in self.fragments:
            if step != 1:
                break
            rank += width
        return rank

    @property
    def a_number(self) -> int:
        return self.genus - sum(w for w, step in self.fragments if step)


def eo_type(module: WeightedPermutationModule) -> EOType:
    """Final type of the module, read off the canonical filtration.

    Across one canonical fragment the dimension of the v-image either stays
    put or grows by the full fragment width; anything in between would mean
    the module was not a scaled permutation module after all.
    """
    module.validate()
    g = module.total_weight // 2
    chain = canonical_filtration(module)
    fragments: list[tuple[int, int]] = []
    key_values: list[int] = []
    prev_dim = 0
    prev_vdim = 0
    for nodes in chain[1:]:
        dim = module.dim(nodes)
        if dim > g:
            break
        width = dim - prev_dim
        vdim = module.dim(module.v_image(nodes))
        grow = vdim - prev_vdim
        if grow == 0:
            fragments.append((width, 0))
        elif grow == width:
            fragments.append((width, 1))
        else:
            raise ConsistencyError(
                f"non-uniform fragment: v-dimension grew by {grow} "
                f"over a width-{width} fragment"
            )
        key_values.append(dim)
        prev_dim, prev_vdim = dim, vdim
    if prev_dim != g:
        raise ConsistencyError("canonical filtration has no member at half weight")
    eo = EOType(
        genus=g, fragments=tuple(fragments), key_values=tuple(sorted(key_values))
    )
    if eo.key_values[-1] != g:
        raise ConsistencyError("key values must end at the genus")
    return eo


@dataclass(frozen=True)
class FactorReport:
    orbit: tuple[int, ...]
    relation_word: str
    multiplicity: int
    dimension: int
    a_number: int


def decomposition(p: int, n: int) -> tuple[FactorReport, ...]:
    """Indecomposable factors with multiplicities, from the orbit side."""
    derham_mod.check_instance(p, n)
    factors = []
    for orbit in orbits_mod.enumerate_orbits(n):
        pres = orbits_mod.factor_presentation(orbit)
        factors.append(
            FactorReport(
                orbit=orbit.elements,
                relation_word=pres.relation_word,
                multiplicity=orbits_mod.multiplicity(orbit, p, n),
                dimension=pres.dimension,
                a_number=pres.a_number,
            )
        )
    total = sum(f.dimension * f.multiplicity for f in factors)
    if total != 2 * derham_mod.genus(p, n):
        raise ConsistencyError("factor dimensions do not add up to 2g")
    return tuple(factors)


@dataclass(frozen=True)
class Verdict:
    p: int
    n: int
    verified: bool
    eo_brute: EOType
    eo_orbit: EOType
    factors: tuple[FactorReport, ...]
    block_report: blocks_mod.BlockActionReport
    mismatches: tuple[str, ...]

    @property
    def eo(self) -> EOType:
        return self.eo_orbit


def verify_main_theorem(p: int, n: int) -> Verdict:
    """Run both computation paths and compare them exactly.

    Path one builds F and V on the full de Rham basis from the closed-form
    index maps.  Path two predicts the module from doubling orbits and block
    dimensions alone.  The verdict records the final types of both, the
    factor list, and every point of disagreement.
    """
    ops = derham_mod.build_operators(p, n)
    table = blocks_mod.block_table(p, n)
    orbits = orbits_mod.enumerate_orbits(n)
    mismatches: list[str] = []

    block_report = blocks_mod.verify_block_action(ops, table)
    if not block_report.ok:
        mismatches.append(f"block action: {block_report.violation}")

    counts: dict[int, int] = {}
    for tk in table.ids:
        counts[tk] = counts.get(tk, 0) + 1
    for orbit in orbits:
        want = orbits_mod.multiplicity(orbit, p, n)
        for t in orbit.elements:
            if counts.get(t, 0) != want:
                mismatches.append(
                    f"block {t} in orbit {orbit.elements} holds "
                    f"{counts.get(t, 0)} elements, multiplicity says {want}"
                )

    eo_brute = eo_type(from_derham(ops))
    eo_orbit = eo_type(from_orbits(orbits, p, n))
    if eo_brute != eo_orbit:
        mismatches.append(
            f"final types differ: brute {eo_brute.fragments} / "
            f"key {eo_brute.key_values} vs orbit {eo_orbit.fragments} / "
            f"key {eo_orbit.key_values}"
        )

    return Verdict(
        p=p,
        n=n,
        verified=not mismatches,
        eo_brute=eo_brute,
        eo_orbit=eo_orbit,
        factors=decomposition(p, n),
        block_report=block_report,
        mismatches=tuple(mismatches),
    )

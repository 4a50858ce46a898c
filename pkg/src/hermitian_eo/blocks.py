"""Partition of the de Rham basis into 2^n blocks permuted by F and V.

Each basis element gets a length-n binary vector: the first n-1 coordinates
are the carry bits of i+j+1 and the last is 1 for the omega kind, 0 for the
f kind.  Vectors are relabeled by ids t in 1..2^n so that V doubles t modulo
2^n + 1 and F halves even t, which is what connects the block structure to
the doubling-map orbits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .derham import OMEGA, BasisElement, DeRhamOperators, genus
from .padic import carry_bit


def binary_vector(e: BasisElement, p: int, n: int) -> tuple[int, ...]:
    """Carry bits of i+j+1 in positions 0..n-2 plus the kind bit last."""
    bits = [carry_bit(e.i, e.j, p, h) for h in range(n - 1)]
    bits.append(1 if e.kind == OMEGA else 0)
    return tuple(bits)


def block_id_of_vector(bits: tuple[int, ...]) -> int:
    """Relabel a binary vector as an id in 1..2^n (odd ids = omega half)."""
    n = len(bits)
    s = sum(b << (n - 1 - k) for k, b in enumerate(bits[:-1]))
    return s + 1 if bits[-1] == 1 else 2**n - s


def vector_of_block_id(t: int, n: int) -> tuple[int, ...]:
    if not 1 <= t <= 2**n:
        raise ValueError(f"block id {t} not in 1..2^{n}")
    if t % 2 == 1:
        s, last = t - 1, 1
    else:
        s, last = 2**n - t, 0
    bits = tuple((s >> (n - 1 - k)) & 1 for k in range(n - 1))
    return bits + (last,)


def block_dimension(t: int, p: int, n: int) -> int:
    """Number of basis elements in block t, from the carry-pattern count.

    Equals the product over digit positions of the number of digit pairs
    compatible with the block's carry pattern; bookended by a forced carry
    into position 0 and no carry out of position n-1.
    """
    bits = vector_of_block_id(t, n)
    aug = (1,) + bits[:-1] + (0,)
    n_same = sum(1 for k in range(n) if aug[k] == aug[k + 1])
    n_diff = n - n_same
    return (p * (p + 1) // 2) ** n_same * (p * (p - 1) // 2) ** n_diff


@dataclass(frozen=True)
class BlockTable:
    p: int
    n: int
    ids: tuple[int, ...]  # basis index -> block id

    def members(self, t: int) -> tuple[int, ...]:
        return tuple(k for k, tk in enumerate(self.ids) if tk == t)


@lru_cache(maxsize=None)
def block_table(p: int, n: int) -> BlockTable:
    from .derham import basis_elements

    ids = tuple(
        block_id_of_vector(binary_vector(e, p, n)) for e in basis_elements(p, n)
    )
    return BlockTable(p=p, n=n, ids=ids)


@dataclass(frozen=True)
class BlockActionReport:
    ok: bool
    checked: int
    violation: str | None


def verify_block_action(ops: DeRhamOperators, table: BlockTable) -> BlockActionReport:
    """Check, element by element, that F and V move blocks the predicted way:
    V kills t <= 2^(n-1) and maps t > 2^(n-1) bijectively onto 2t - 2^n - 1;
    F kills odd t and maps even t bijectively onto t/2.
    """
    p, n = ops.p, ops.n
    half = 2 ** (n - 1)
    modulus = 2**n + 1

    def fail(msg: str) -> BlockActionReport:
        return BlockActionReport(ok=False, checked=len(ops.basis), violation=msg)

    counts: dict[int, int] = {}
    for k, t in enumerate(table.ids):
        counts[t] = counts.get(t, 0) + 1
        e = ops.basis[k]
        v_entry = ops.verschiebung.images[k]
        if t <= half:
            if v_entry is not None:
                return fail(f"V should kill {e} in block {t}")
        else:
            expected = 2 * t - modulus
            if v_entry is None:
                return fail(f"V killed {e} in block {t}")
            if table.ids[v_entry[0]] != expected:
                return fail(
                    f"V sent {e} from block {t} to block "
                    f"{table.ids[v_entry[0]]}, expected {expected}"
                )
            if expected != 2 * t % modulus:
                return fail(f"doubling-map relabeling broke at t={t}")
        f_entry = ops.frobenius.images[k]
        if t % 2 == 1:
            if f_entry is not None:
                return fail(f"F should kill {e} in block {t}")
        else:
            if f_entry is None:
                return fail(f"F killed {e} in block {t}")
            if table.ids[f_entry[0]] != t // 2:
                return fail(
                    f"F sent {e} from block {t} to block "
                    f"{table.ids[f_entry[0]]}, expected {t // 2}"
                )
    for t in range(1, 2**n + 1):
        if counts.get(t, 0) != block_dimension(t, p, n):
            return fail(
                f"block {t} holds {counts.get(t, 0)} elements, "
                f"dimension formula says {block_dimension(t, p, n)}"
            )
    # injectivity of the operators (checked at build time) plus the equal
    # dimensions just verified make each per-block map a bijection
    if sum(counts.values()) != 2 * genus(p, n):
        return fail("blocks do not partition the basis")
    return BlockActionReport(ok=True, checked=len(ops.basis), violation=None)

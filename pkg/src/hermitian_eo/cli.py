"""Command-line interface.

Subcommands cover the whole pipeline: orbit enumeration, the raw F/V
operator tables, the block partition, the factor decomposition, the final
type by either path, the dual-path verification, the applications report
(optionally with figures), and a grid runner for CI.

Exit codes: 0 success, 1 a verification or cross-check failed, 2 invalid
arguments or size guard.  Errors print one JSON object per line to stderr
with a stable machine-readable reason slug.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import blocks as blocks_mod
from . import derham as derham_mod
from . import eo as eo_mod
from . import orbits as orbits_mod
from . import reports as reports_mod
from .errors import ConsistencyError, VerificationFailure

ORACLE_CLI_CAP = 512


class SizeGuard(Exception):
    pass


def _max_genus_default() -> int:
    env = os.environ.get("HERMITIAN_EO_MAX_GENUS")
    return int(env) if env else reports_mod.DEFAULT_MAX_GENUS


def _guard_cell(p: int, n: int, max_genus: int) -> None:
    derham_mod.check_instance(p, n)
    g = derham_mod.genus(p, n)
    if g > max_genus:
        raise SizeGuard(f"genus {g} at p={p}, n={n} exceeds the cap {max_genus}")


def _emit(payload, fmt: str, table_lines) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in table_lines:
            print(line)


# --- JSON builders ----------------------------------------------------------

def _eo_json(eo: eo_mod.EOType) -> dict:
    return {
        "a_number": eo.a_number,
        "p_rank": eo.p_rank,
        "key_values": list(eo.key_values),
        "eo_type_rle": [list(frag) for frag in eo.fragments],
    }


def _factor_json(factor: eo_mod.FactorReport) -> dict:
    return {
        "orbit": list(factor.orbit),
        "relation_word": factor.relation_word,
        "multiplicity": factor.multiplicity,
    }


def _verdict_json(verdict: eo_mod.Verdict) -> dict:
    payload = {
        "p": verdict.p,
        "n": verdict.n,
        "q": verdict.p**verdict.n,
        "genus": derham_mod.genus(verdict.p, verdict.n),
        **_eo_json(verdict.eo),
        "factors": [_factor_json(f) for f in verdict.factors],
        "verified": verdict.verified,
    }
    if not verdict.verified:
        payload["mismatches"] = list(verdict.mismatches)
    return payload


def _factor_display(factor: eo_mod.FactorReport) -> str:
    if factor.a_number == 1:
        base = f"E/E({factor.relation_word})"
    else:
        base = f"D[{factor.relation_word}]"
    return f"({base})^{factor.multiplicity}"


def _verdict_lines(verdict: eo_mod.Verdict) -> list[str]:
    eo = verdict.eo
    lines = [
        f"p={verdict.p} n={verdict.n} q={verdict.p ** verdict.n} "
        f"genus={derham_mod.genus(verdict.p, verdict.n)}",
        f"verified: {'yes' if verdict.verified else 'NO'}",
        f"a_number={eo.a_number} p_rank={eo.p_rank}",
        "key_values: " + " ".join(str(kv) for kv in eo.key_values),
        "factors:",
    ]
    for factor in verdict.factors:
        lines.append(
            f"  {_factor_display(factor)} dim={factor.dimension} "
            f"orbit={','.join(str(t) for t in factor.orbit)}"
        )
    lines.extend(f"mismatch: {m}" for m in verdict.mismatches)
    return lines


# --- subcommand handlers ----------------------------------------------------

def _cmd_orbits(args) -> int:
    orbits = orbits_mod.enumerate_orbits(args.n)
    if args.p is not None:
        _guard_cell(args.p, args.n, args.max_genus)
    payload = []
    for orbit in orbits:
        pres = orbits_mod.factor_presentation(orbit)
        entry = {
            "elements": list(orbit.elements),
            "length": orbit.length,
            "a_number": pres.a_number,
            "signature": orbits_mod.orbit_signature(orbit),
            "presentation": {
                "generators": list(pres.generators),
                "relations": [
                    {
                        "minimum": rel.minimum,
                        "left_parent": rel.left_parent,
                        "left_exp": rel.left_exp,
                        "right_parent": rel.right_parent,
                        "right_exp": rel.right_exp,
                    }
                    for rel in pres.relations
                ],
                "relation_word": pres.relation_word,
            },
        }
        if args.p is not None:
            entry["multiplicity"] = orbits_mod.multiplicity(orbit, args.p, args.n)
        payload.append(entry)
    lines = [f"n={args.n} modulus={2 ** args.n + 1} orbits={len(payload)}"]
    for entry in payload:
        line = (
            f"orbit min={entry['elements'][0]} length={entry['length']} "
            f"a={entry['a_number']} signature={entry['signature']} "
            f"relation={entry['presentation']['relation_word']} "
            f"elements={','.join(str(t) for t in entry['elements'])}"
        )
        if "multiplicity" in entry:
            line += f" multiplicity={entry['multiplicity']}"
        lines.append(line)
    _emit(payload, args.format, lines)
    return 0


def _image_json(ops: derham_mod.DeRhamOperators, entry) -> dict | None:
    if entry is None:
        return None
    target, scalar = entry
    e = ops.basis[target]
    return {"kind": e.kind, "i": e.i, "j": e.j, "scalar": scalar}


def _cmd_derham(args) -> int:
    _guard_cell(args.p, args.n, args.max_genus)
    ops = derham_mod.build_operators(args.p, args.n)
    payload = {
        "p": args.p,
        "n": args.n,
        "genus": ops.genus,
        "basis": [{"kind": e.kind, "i": e.i, "j": e.j} for e in ops.basis],
        "F": {
            "twist": ops.frobenius.twist,
            "images": [_image_json(ops, im) for im in ops.frobenius.images],
        },
        "V": {
            "twist": ops.verschiebung.twist,
            "images": [_image_json(ops, im) for im in ops.verschiebung.images],
        },
    }
    lines = [f"p={args.p} n={args.n} genus={ops.genus} basis={len(ops.basis)}"]
    for name, semilinear in (("F", ops.frobenius), ("V", ops.verschiebung)):
        lines.append(f"{name}:")
        for k, e in enumerate(ops.basis):
            entry = semilinear.images[k]
            if entry is None:
                lines.append(f"{e} -> 0")
            else:
                target, scalar = entry
                lines.append(f"{e} -> {ops.basis[target]} {scalar}")
    exit_code = 0
    if args.check_oracle:
        if args.p**args.n > ORACLE_CLI_CAP:
            raise SizeGuard(
                f"q={args.p ** args.n} beyond the oracle cap {ORACLE_CLI_CAP}"
            )
        disagreements = _oracle_disagreements(ops)
        payload["oracle_checked"] = ops.genus
        payload["oracle_agrees"] = not disagreements
        lines.append(
            f"oracle: checked {ops.genus} differentials, "
            f"{'all agree' if not disagreements else 'DISAGREEMENT'}"
        )
        lines.extend(f"oracle mismatch: {d}" for d in disagreements)
        if disagreements:
            exit_code = 1
    _emit(payload, args.format, lines)
    return exit_code


def _oracle_disagreements(ops: derham_mod.DeRhamOperators) -> list[str]:
    out = []
    for k in range(ops.genus):
        e = ops.basis[k]
        direct = derham_mod.v_on_omega(e, ops.p, ops.n)
        oracle = derham_mod.cartier_oracle(e, ops.p, ops.n)
        if direct != oracle:
            out.append(f"{e}: formula {direct} vs polynomial {oracle}")
    return out


def _cmd_blocks(args) -> int:
    _guard_cell(args.p, args.n, args.max_genus)
    ops = derham_mod.build_operators(args.p, args.n)
    table = blocks_mod.block_table(args.p, args.n)
    entries = []
    for t in range(1, 2**args.n + 1):
        members = table.members(t)
        entries.append(
            {
                "t": t,
                "dim": blocks_mod.block_dimension(t, args.p, args.n),
                "vector": list(blocks_mod.vector_of_block_id(t, args.n)),
                "members": [
                    [ops.basis[k].kind, ops.basis[k].i, ops.basis[k].j]
                    for k in members
                ],
            }
        )
    payload = {"p": args.p, "n": args.n, "blocks": entries}
    lines = [f"p={args.p} n={args.n} blocks={len(entries)}"]
    for entry in entries:
        vector = "".join(str(b) for b in entry["vector"])
        members = " ".join(f"{k}:{i}:{j}" for k, i, j in entry["members"])
        lines.append(f"{entry['t']} {entry['dim']} {vector} {members}")
    _emit(payload, args.format, lines)
    return 0


def _cmd_decompose(args) -> int:
    _guard_cell(args.p, args.n, args.max_genus)
    factors = eo_mod.decomposition(args.p, args.n)
    payload = {
        "p": args.p,
        "n": args.n,
        "q": args.p**args.n,
        "genus": derham_mod.genus(args.p, args.n),
        "factors": [
            {**_factor_json(f), "dimension": f.dimension, "a_number": f.a_number}
            for f in factors
        ],
    }
    lines = [
        f"p={args.p} n={args.n} genus={payload['genus']}",
        " + ".join(_factor_display(f) for f in factors),
    ]
    _emit(payload, args.format, lines)
    return 0


def _cmd_eo(args) -> int:
    _guard_cell(args.p, args.n, args.max_genus)
    payload = {
        "p": args.p,
        "n": args.n,
        "q": args.p**args.n,
        "genus": derham_mod.genus(args.p, args.n),
        "method": args.method,
    }
    results = {}
    if args.method in ("brute", "both"):
        ops = derham_mod.build_operators(args.p, args.n)
        results["brute"] = eo_mod.eo_type(eo_mod.from_derham(ops))
    if args.method in ("orbit", "both"):
        orbits = orbits_mod.enumerate_orbits(args.n)
        results["orbit"] = eo_mod.eo_type(eo_mod.from_orbits(orbits, args.p, args.n))
    exit_code = 0
    chosen = results.get("orbit") or results["brute"]
    if args.method == "both":
        agree = results["brute"] == results["orbit"]
        payload["paths_agree"] = agree
        if not agree:
            exit_code = 1
    payload.update(_eo_json(chosen))
    lines = [
        f"p={args.p} n={args.n} genus={payload['genus']} method={args.method}",
        f"a_number={chosen.a_number} p_rank={chosen.p_rank}",
        "key_values: " + " ".join(str(kv) for kv in chosen.key_values),
        "eo_type_rle: "
        + " ".join(f"{w}x{'+1' if s else '+0'}" for w, s in chosen.fragments),
    ]
    if args.method == "both":
        lines.append(f"paths_agree: {'yes' if payload['paths_agree'] else 'NO'}")
    _emit(payload, args.format, lines)
    return exit_code


def _cmd_verify(args) -> int:
    _guard_cell(args.p, args.n, args.max_genus)
    verdict = eo_mod.verify_main_theorem(args.p, args.n)
    _emit(_verdict_json(verdict), args.format, _verdict_lines(verdict))
    return 0 if verdict.verified else 1


def _cmd_report(args) -> int:
    _guard_cell(args.p, args.n, args.max_genus)
    bundle = reports_mod.applications_report(args.p, args.n)
    payload = {
        "p": bundle.p,
        "n": bundle.n,
        "q": bundle.q,
        "genus": bundle.genus,
        **_eo_json(bundle.eo),
        "factors": [
            {**_factor_json(f), "dimension": f.dimension}
            for f in bundle.decomposition
        ],
        "cartier_ranks": list(bundle.cartier_ranks),
        "elliptic_rank_bound": bundle.elliptic_rank_bound,
        "selmer_ranks": {
            "ordinary": bundle.selmer_rank_ordinary,
            "supersingular": bundle.selmer_rank_supersingular,
        },
        "partition_eta_d": [list(pair) for pair in bundle.partition_eta_d],
        "supersingular_locus_contained": bundle.supersingular_locus_contained,
        "verified": True,
    }
    lines = [
        f"p={bundle.p} n={bundle.n} q={bundle.q} genus={bundle.genus}",
        f"a_number={bundle.eo.a_number} p_rank={bundle.eo.p_rank}",
        "key_values: " + " ".join(str(kv) for kv in bundle.eo.key_values),
        "decomposition: "
        + " + ".join(_factor_display(f) for f in bundle.decomposition),
        "cartier_ranks: " + " ".join(str(r) for r in bundle.cartier_ranks),
        f"elliptic_rank_bound={bundle.elliptic_rank_bound}",
        f"selmer_ordinary={bundle.selmer_rank_ordinary} "
        f"selmer_supersingular={bundle.selmer_rank_supersingular}",
        "partition_eta_d: "
        + " ".join(f"{dim}^{count}" for dim, count in bundle.partition_eta_d),
        f"supersingular_locus_contained={bundle.supersingular_locus_contained}",
    ]
    if args.figures:
        from .figures import render_report_files

        paths = render_report_files(bundle, args.figures)
        payload["files"] = [str(path) for path in paths]
        lines.extend(f"wrote {path}" for path in paths)
    _emit(payload, args.format, lines)
    return 0


def _grid_cell(cell: tuple[int, int]) -> dict:
    p, n = cell
    return _verdict_json(eo_mod.verify_main_theorem(p, n))


def _cmd_grid(args) -> int:
    primes = _parse_int_list(args.p)
    exponents = _parse_int_list(args.n)
    cells = sorted((p, n) for p in primes for n in exponents)
    for p, n in cells:
        _guard_cell(p, n, args.max_genus)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_grid_cell, cells))
    else:
        results = [_grid_cell(cell) for cell in cells]
    lines = []
    for result in results:
        status = "ok" if result["verified"] else "FAIL"
        lines.append(
            f"p={result['p']} n={result['n']} genus={result['genus']} "
            f"a={result['a_number']} key_values="
            f"{','.join(str(kv) for kv in result['key_values'])} {status}"
        )
    all_ok = all(result["verified"] for result in results)
    lines.append(f"grid: {len(results)} cells, {'all verified' if all_ok else 'FAILURES'}")
    _emit(results, args.format, lines)
    return 0 if all_ok else 1


def _parse_int_list(text: str) -> list[int]:
    """Accept '2,3,5' or a range '1..4'."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",") if part]


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "table"), default="table", help="output format"
    )
    common.add_argument(
        "--max-genus",
        type=int,
        default=_max_genus_default(),
        help="size guard on the genus (env HERMITIAN_EO_MAX_GENUS)",
    )

    parser = argparse.ArgumentParser(
        prog="hermitian-eo",
        description="Frobenius/Verschiebung action, block decomposition, and "
        "Ekedahl-Oort types for the curves y^q + y = x^(q+1)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("orbits", parents=[common], help="doubling-map orbits")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, help="include multiplicities for this prime")
    sp.set_defaults(func=_cmd_orbits)

    sp = sub.add_parser("derham", parents=[common], help="F/V operator tables")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument(
        "--check-oracle",
        action="store_true",
        help="recompute V on differentials by raw polynomial arithmetic",
    )
    sp.set_defaults(func=_cmd_derham)

    sp = sub.add_parser("blocks", parents=[common], help="block partition table")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=_cmd_blocks)

    sp = sub.add_parser("decompose", parents=[common], help="indecomposable factors")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("eo", parents=[common], help="final type")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=("brute", "orbit", "both"), default="both")
    sp.set_defaults(func=_cmd_eo)

    sp = sub.add_parser("verify", parents=[common], help="dual-path verification")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("report", parents=[common], help="applications report")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--figures", metavar="DIR", help="also render figures into DIR")
    sp.set_defaults(func=_cmd_report)

    sp = sub.add_parser("grid", parents=[common], help="verify a grid of cells")
    sp.add_argument("--p", required=True, help="primes, e.g. 2,3,5")
    sp.add_argument("--n", required=True, help="exponents, e.g. 1..4 or 1,2,3")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=_cmd_grid)

    return parser


def _error(reason: str, detail: str) -> None:
    print(json.dumps({"error": reason, "detail": detail}), file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeGuard as exc:
        _error("size_guard", str(exc))
        return 2
    except ValueError as exc:
        _error("invalid_arguments", str(exc))
        return 2
    except VerificationFailure as exc:
        _error("verification_failure", str(exc))
        return 1
    except ConsistencyError as exc:
        _error("internal_inconsistency", str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())

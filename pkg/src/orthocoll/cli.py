"""Command line front end.

Every command builds one report tree (see :mod:`orthocoll.report`) and prints
either its JSON form (``--json``) or a text rendering of it.

Exit codes: 0 when every check passes, 1 for a negative mathematical verdict,
2 for bad input or usage.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import markov as mk
from .bundles import (
    BundleLedger,
    StabilityError,
    SurfaceNumerics,
    block_divisors,
    check_main_hypotheses,
    chi_matrix,
    gamma_of_block_divisors,
    make_block_ledgers,
    normalize_divisor,
    rr_chi,
    stability_residue,
    tensor_dual,
)
from .files import InputError, builtin, fan_from_dict, fan_to_dict, load_divisor, load_fan
from .hjfrac import CyclicQuotient, InvariantError, classify_class_t, hj_evaluate, hj_expand
from .link import NotAGeneratorError, alpha_coefficients, chain_group
from .report import dumps, render
from .toric import (
    Fan2,
    MBlock,
    MResolution,
    QDivisor,
    SurfaceModel,
    canonical_class,
    classify_fan,
    m_resolve_fan,
    minimal_resolution,
    mumford_intersect,
)

Result = Tuple[Dict[str, Any], int]


class UsageError(ValueError):
    pass


# --- commands -----------------------------------------------------------------


def cmd_hj(m: int, q: int) -> Result:
    b = hj_expand(m, q)
    if hj_evaluate(b) != (m, q):
        raise InvariantError(f"expansion {b} does not evaluate back to {(m, q)}")
    t = classify_class_t(CyclicQuotient(m, q))
    g = chain_group(b)
    return {
        "m": m,
        "q": q,
        "expansion": list(b),
        "class_t": t,
        "wahl": bool(t and t.is_wahl),
        "alpha_coefficients": list(alpha_coefficients(b)),
        "link_group": list(g.invariant_factors),
    }, 0


def _cone_table(f: Fan2) -> List[dict]:
    rows = []
    for c, ((i, j), (_, s, t)) in enumerate(zip(f.cone_indices, classify_fan(f))):
        rows.append(
            {
                "cone": c + 1,
                "rays": [f.names[i], f.names[j]],
                "m": s.m,
                "q": s.q,
                "smooth": s.is_smooth,
                "class_t": None if s.is_smooth else t,
                "wahl": bool(t and t.is_wahl),
            }
        )
    return rows


def _singularity_counts(f: Fan2) -> List[dict]:
    counts = Counter((s.m, s.q) for _, s, _ in classify_fan(f) if not s.is_smooth)
    return [{"m": m, "q": q, "count": n} for (m, q), n in sorted(counts.items())]


def cmd_classify(f: Fan2) -> Result:
    return {"cones": _cone_table(f), "singularities": _singularity_counts(f)}, 0


def _mres_report(mr: MResolution) -> dict:
    return {
        "fan": fan_to_dict(mr.fan),
        "inserted": [{"name": n, "ray": list(v)} for n, v in mr.inserted],
        "blocks": [
            {
                "cone": b.cone + 1,
                "class_t": b.t,
                "rays": list(b.rays),
                "wahl_cones": [c + 1 for c in b.cones],
            }
            for b in mr.blocks
        ],
        "untouched": [c + 1 for c in mr.untouched],
    }


def cmd_mres(f: Fan2, out: Optional[Path] = None) -> Result:
    mr = m_resolve_fan(f)
    rep = _mres_report(mr)
    rep["refined_cones"] = _cone_table(mr.fan)
    if out is not None:
        out.write_text(dumps(fan_to_dict(mr.fan)))
    return rep, 0


def _verdicts(s: SurfaceModel, D: QDivisor) -> dict:
    h = check_main_hypotheses(s, D)
    pts = []
    for p in h.points:
        pts.append(
            {
                "cone": p.cone + 1,
                "rays": list(p.rays),
                "m": p.m,
                "q": p.q,
                "class_t": p.t,
                "gamma": p.gamma,
                "generates": p.generates,
                "divisible": p.divisible,
                "vanishes": p.vanishes,
                "label": h.label(p.cone),
            }
        )
    return {
        "holds": h.holds,
        "target": None if h.target is None else h.target + 1,
        "multiplier": h.multiplier,
        "adjustment": None if h.adjustment is None else list(h.adjustment),
        "points": pts,
    }


def cmd_check(f: Fan2, D: QDivisor) -> Result:
    """Hypotheses of the existence theorem, evaluated on the M-resolved surface."""
    mr = m_resolve_fan(f)
    s = minimal_resolution(mr.fan)
    rep = {"fan": list(mr.fan.names), "divisor": D, "verdicts": _verdicts(s, D)}
    target = rep["verdicts"]["target"]
    for b in mr.blocks:
        if target is not None and b.cones[0] == target - 1:
            N = normalize_divisor(s, D, b)
            rep["normalization"] = {
                "block": b.cone + 1,
                "m": N.m,
                "adjustments": list(N.adjustments),
                "corrections": N.corrections,
                "D0": N.divisor,
                "block_gammas": [list(g) for g in gamma_of_block_divisors(s, N.divisor, b)],
            }
    return rep, 0 if rep["verdicts"]["holds"] else 1


def _block_report(s: SurfaceModel, D: QDivisor, b: MBlock, alt_c2: bool) -> Tuple[dict, List[str]]:
    """Ledgers, chi matrix and residues of one block; second item lists failures."""
    t = b.t
    num = SurfaceNumerics.from_model(s)
    N = normalize_divisor(s, D, b)
    L = make_block_ledgers(s, N.divisor, b)
    M = chi_matrix(L, num)
    fails = []
    for i, row in enumerate(M):
        for j, v in enumerate(row):
            if v != (i == j):
                fails.append(f"chi(F_{i + 1}, F_{j + 1}) = {v}")
    diffs = []
    for k in range(len(L)):
        for l in range(k + 1, len(L)):
            c1 = tensor_dual(L[k], L[l], num).c1
            sq = num.square(c1)
            diffs.append({"k": k + 1, "l": l + 1, "c1_sq": sq, "K_c1": num.pairing(num.K, c1)})
            if sq != -2 * t.n**2:
                fails.append(f"c1^2 of F_{k + 1}^* (x) F_{l + 1} is {sq}, expected {-2 * t.n ** 2}")
    try:
        res = [stability_residue(s, x, t) for x in L]
    except StabilityError as e:
        res = []
        fails.append(str(e))
    if res and (len(set(res)) != 1 or res[0] != (-t.a) % t.n):
        fails.append(f"stability residues {res}, expected all {(-t.a) % t.n}")
    rep = {
        "point": b.cone + 1,
        "class_t": t,
        "wahl_cones": [c + 1 for c in b.cones],
        "m": N.m,
        "adjustments": list(N.adjustments),
        "D0": N.divisor,
        "ledgers": [{"rank": x.rank, "c1": x.c1, "c1_sq": num.square(x.c1), "c2": x.c2} for x in L],
        "chi": M,
        "tensor_c1": diffs,
        "stability_residues": res,
        "expected_residue": (-t.a) % t.n,
        "identity": not any(f.startswith("chi") for f in fails),
    }
    if alt_c2:
        P = make_block_ledgers(s, N.divisor, b, alt_c2=True)
        rep["alt_c2_chi"] = [[rr_chi(x, y, num) for y in P] for x in P]
    return rep, fails


def cmd_chi(f: Fan2, D: QDivisor, point: int, alt_c2: bool = False) -> Result:
    mr = m_resolve_fan(f)
    try:
        b = mr.block_for_cone(point - 1)
    except KeyError:
        raise UsageError(f"cone {point} of the fan is not a class T point") from None
    s = minimal_resolution(mr.fan)
    try:
        rep, fails = _block_report(s, D, b, alt_c2)
    except NotAGeneratorError as e:
        return {"point": point, "error": str(e)}, 1
    rep["failures"] = fails
    return rep, 1 if fails else 0


def _equation(d: str, ksq: int) -> mk.MarkovEquation:
    return mk.make_equation(*mk.parse_triple(d), ksq)


def cmd_markov_verify(d: str, ksq: int, r: str) -> Result:
    eq = _equation(d, ksq)
    t = mk.MarkovTriple(mk.parse_triple(r))
    ok = mk.verify(eq, t)
    return {"d": list(eq.d), "K2": eq.Ksq, "lambda": eq.lam, "triple": t, "solution": ok}, 0 if ok else 1


def cmd_markov_mutate(d: str, ksq: int, r: str, index: int) -> Result:
    eq = _equation(d, ksq)
    t = mk.MarkovTriple(mk.parse_triple(r))
    if not mk.verify(eq, t):
        return {"triple": t, "solution": False}, 1
    return {"d": list(eq.d), "lambda": eq.lam, "triple": t, "index": index, "result": mk.mutate(eq, t, index)}, 0


def cmd_markov_enumerate(d: str, ksq: int, seed: str, bound: int) -> Result:
    eq = _equation(d, ksq)
    t = mk.MarkovTriple(mk.parse_triple(seed))
    if not mk.verify(eq, t):
        return {"seed": t, "solution": False}, 1
    tree = mk.enumerate(eq, t, bound)
    return {
        "d": list(eq.d),
        "lambda": eq.lam,
        "seed": t,
        "bound": bound,
        "count": len(tree),
        "triples": list(tree.triples),
        "edges": [{"from": a, "index": i, "to": b} for a, i, b in tree.edges],
    }, 0


# --- the worked cubic surface degeneration -------------------------------------


def _match_names(refined: Fan2, target: Fan2) -> Fan2:
    """Rename rays of ``refined`` after the equal rays of ``target``."""
    if refined.rays != target.rays:
        raise InvariantError(f"M-resolved rays {refined.rays} differ from the fixture {target.rays}")
    return Fan2(refined.rays, target.names, refined.complete)


def cmd_demo(alt_c2: bool = False) -> Result:
    checks: List[dict] = []

    def check(name: str, ok: bool, detail: Any = None) -> bool:
        checks.append({"check": name, "ok": bool(ok), "detail": detail})
        return ok

    X = fan_from_dict(builtin("x_fan.json"), "x_fan.json")
    Z0_fixture = fan_from_dict(builtin("z0_fan.json"), "z0_fan.json")
    rep: Dict[str, Any] = {}

    cones = _cone_table(X)
    rep["X"] = {"cones": cones}
    check("X cone orders", [c["m"] for c in cones] == [4, 50, 486], [c["m"] for c in cones])
    check(
        "X class T types",
        [c["class_t"] for c in cones] == [classify_class_t(CyclicQuotient(*mq)) for mq in ((4, 1), (50, 9), (486, 107))]
        and [(c["m"], c["q"]) for c in cones] == [(4, 1), (50, 9), (486, 107)],
        [[c["m"], c["q"]] for c in cones],
    )

    mr = m_resolve_fan(X)
    rep["M_resolution"] = _mres_report(mr)
    Z0 = _match_names(mr.fan, Z0_fixture)
    check("M-resolution matches the fixture fan", True, list(Z0.names))
    rename = dict(zip(mr.fan.names, Z0.names))
    blocks = [
        MBlock(b.cone, b.t, tuple(rename[r] for r in b.rays), b.cones) for b in mr.blocks
    ]
    sing = _singularity_counts(Z0)
    rep["Z0"] = {"cones": _cone_table(Z0), "singularities": sing}
    check(
        "Z0 singularities",
        sing == [{"m": 4, "q": 1, "count": 1}, {"m": 25, "q": 4, "count": 2}, {"m": 81, "q": 17, "count": 6}],
        sing,
    )
    check("Z0 points are all Wahl", all(c["wahl"] for c in rep["Z0"]["cones"]))

    sX, sZ = minimal_resolution(X), minimal_resolution(Z0)
    k2 = {name: mumford_intersect(s, canonical_class(s), canonical_class(s)) for name, s in (("X", sX), ("Z0", sZ))}
    rep["K2"] = k2
    check("K^2 = 3", k2["X"] == 3 and k2["Z0"] == 3, k2)

    # D_1 = 81 rho1, D_k = D_{k-1} + rho_k
    Ds = [QDivisor({"rho1": 81})]
    for k in range(2, 10):
        Ds.append(Ds[-1] + QDivisor.curve(f"rho{k}"))
    pattern = []
    for k, D in enumerate(Ds, start=1):
        v = _verdicts(sZ, D)
        labels = [p["label"] for p in v["points"]]
        expect = ["(2)"] * (k - 1) + ["(1)"] + ["(3)"] * (9 - k)
        pattern.append({"k": k, "D": D, "labels": labels, "multiplier": v["multiplier"]})
        check(f"hypotheses for D_{k}", labels == expect and v["target"] == k, labels)
    rep["hypotheses"] = pattern

    rep["blocks"] = []
    all_ledgers: List[BundleLedger] = []
    for b in blocks:
        first = b.cones[0]
        D = Ds[first]
        try:
            br, fails = _block_report(sZ, D, b, alt_c2)
        except (NotAGeneratorError, InvariantError) as e:
            check(f"block at X cone {b.cone + 1}", False, str(e))
            continue
        same = [Ds[first + k] for k in range(b.t.d)] == [
            D0 for D0 in block_divisors(br["D0"], b)
        ]
        check(f"block at X cone {b.cone + 1}: D_k sequence is D_0 + A_1 + ... + A_k", same)
        check(f"block at X cone {b.cone + 1}: chi matrix, c1^2, residues", not fails, fails)
        br["source_divisor"] = f"D_{first + 1}"
        rep["blocks"].append(br)
        all_ledgers.extend(BundleLedger(x["rank"], x["c1"], x["c2"]) for x in br["ledgers"])

    sizes = [b.t.d for b in blocks]
    ranks = [b.t.n for b in blocks]
    rep["collection"] = {"block_sizes": sizes, "ranks": ranks, "bundles": len(all_ledgers)}
    check("blocks (1,2,6) with ranks (2,5,9)", sizes == [1, 2, 6] and ranks == [2, 5, 9], rep["collection"])
    check("9 bundles", len(all_ledgers) == 9, len(all_ledgers))

    # cross-block values are reported only: the twist relating blocks is not modelled
    num = SurfaceNumerics.from_model(sZ)
    rep["cross_block_chi"] = [[rr_chi(a, b, num) for b in all_ledgers] for a in all_ledgers]

    eq = mk.make_equation(*sizes, int(k2["X"]))
    sol = mk.MarkovTriple(tuple(ranks))
    tree = mk.enumerate(eq, mk.MarkovTriple((2, 1, 1)), 9)
    steps = mk.path(tree, mk.MarkovTriple((2, 1, 1)), sol)
    rep["markov"] = {
        "d": list(eq.d),
        "lambda": eq.lam,
        "solution": sol,
        "chain": [{"from": t, "index": i} for t, i in steps] + [{"to": sol}],
    }
    check("Markov equation lambda = 6", eq.lam == 6, eq.lam)
    check("(2,5,9) solves the equation", mk.verify(eq, sol))
    check("mutation chain (2,1,1) -> (2,5,1) -> (2,5,9)", [t.r for t, _ in steps] == [(2, 1, 1), (2, 5, 1)])

    failed = [c for c in checks if not c["ok"]]
    rep["checks"] = checks
    rep["passed"] = not failed
    rep["first_failure"] = failed[0]["check"] if failed else None
    return rep, 0 if not failed else 1


# --- argument parsing ---------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the machine-readable report only")

    p = argparse.ArgumentParser(prog="orthocoll", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    h = sub.add_parser("hj", parents=[common], help="continued fraction and class T test of 1/m(1,q)")
    h.add_argument("m", type=int)
    h.add_argument("q", type=int)

    c = sub.add_parser("classify", parents=[common], help="singularity type of every cone")
    c.add_argument("fan", type=Path)

    r = sub.add_parser("mres", parents=[common], help="M-resolve every class T cone")
    r.add_argument("fan", type=Path)
    r.add_argument("--out", type=Path, help="write the refined fan file here")

    k = sub.add_parser("check", parents=[common], help="hypotheses (1)-(3) for a divisor")
    k.add_argument("fan", type=Path)
    k.add_argument("divisor", type=Path)

    x = sub.add_parser("chi", parents=[common], help="chi matrix of the block over one class T point")
    x.add_argument("fan", type=Path)
    x.add_argument("divisor", type=Path)
    x.add_argument("--point", type=int, required=True, help="1-based cone index in the given fan")
    x.add_argument("--paper-c2", dest="paper_c2", action="store_true", help="also show chi with the alternative c2 constant n^2 + 1")

    m = sub.add_parser("markov", help="Markov-type equations")
    msub = m.add_subparsers(dest="mcmd", required=True)
    v = msub.add_parser("verify", parents=[common])
    v.add_argument("d", help="weights d1,d2,d3")
    v.add_argument("K2", type=int)
    v.add_argument("r", help="triple r1,r2,r3")
    u = msub.add_parser("mutate", parents=[common])
    u.add_argument("d")
    u.add_argument("K2", type=int)
    u.add_argument("r")
    u.add_argument("--index", type=int, required=True, choices=(1, 2, 3))
    e = msub.add_parser("enumerate", parents=[common])
    e.add_argument("d")
    e.add_argument("K2", type=int)
    e.add_argument("--seed", required=True)
    e.add_argument("--bound", type=int, default=100)

    dm = sub.add_parser("demo", parents=[common], help="run the cubic surface example end to end")
    dm.add_argument("--paper-c2", dest="paper_c2", action="store_true", help="also show chi with the alternative c2 constant n^2 + 1")
    return p


def run(argv: Sequence[str]) -> Tuple[str, int]:
    """Parse ``argv``, run the command and return ``(output text, exit code)``."""
    args = _parser().parse_args(argv)
    try:
        if args.cmd == "hj":
            rep, code = cmd_hj(args.m, args.q)
        elif args.cmd == "classify":
            rep, code = cmd_classify(load_fan(args.fan))
        elif args.cmd == "mres":
            rep, code = cmd_mres(load_fan(args.fan), args.out)
        elif args.cmd in ("check", "chi"):
            fan = load_fan(args.fan)
            D = load_divisor(args.divisor, fan)
            if args.cmd == "check":
                rep, code = cmd_check(fan, D)
            else:
                rep, code = cmd_chi(fan, D, args.point, args.paper_c2)
        elif args.cmd == "markov":
            if args.mcmd == "verify":
                rep, code = cmd_markov_verify(args.d, args.K2, args.r)
            elif args.mcmd == "mutate":
                rep, code = cmd_markov_mutate(args.d, args.K2, args.r, args.index)
            else:
                if args.bound < 1:
                    raise UsageError("--bound must be positive")
                rep, code = cmd_markov_enumerate(args.d, args.K2, args.seed, args.bound)
        else:
            rep, code = cmd_demo(args.paper_c2)
    except (InputError, UsageError) as e:
        return f"error: {e}\n", 2
    except InvariantError:
        raise
    except ValueError as e:
        return f"error: {e}\n", 2
    return (dumps(rep) if args.json else render(rep)), code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        text, code = run(sys.argv[1:] if argv is None else argv)
    except SystemExit as e:  # argparse usage errors
        return int(e.code or 0)
    (sys.stdout if code != 2 else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every invocation runs one operation and writes one JSON document to stdout.
Exit codes: 0 ok, 1 verified false, 2 usage or input error, 3 cap exhausted.

Caps can come from a ``key = value`` file named by ``POLYJC_CONFIG``
(keys ``groebner.max_pairs``, ``groebner.max_degree``, ``invert.cap``,
``lnd.cap``); ``--cap`` and ``--max-degree`` override it.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import casebook, fibration, keller, lnd
from .groebner import Caps, GroebnerCapError
from .numberfield import FieldElem
from .poly import Poly, PolySyntaxError, Ring, UnknownVariableError, newton_polygon

EXIT = {"ok": 0, "fail": 1, "error": 2, "cap": 3}


class CapExhausted(Exception):
    pass


# --- output ---

def _plain(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, (Fraction, FieldElem, Poly)):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return str(v)


def _emit(doc: dict, mode: str, out) -> None:
    doc = _plain(doc)
    if mode == "text":
        for k, v in doc.items():
            out.write(f"{k}: {v if isinstance(v, str) else json.dumps(v)}\n")
    else:
        out.write(json.dumps(doc, ensure_ascii=False) + "\n")


# --- config ---

def load_config(path: str | None = None) -> dict:
    path = path or os.environ.get("POLYJC_CONFIG")
    cfg: dict = {}
    if not path:
        return cfg
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            cfg[k] = int(v)
    return cfg


def _caps(args) -> Caps:
    c = Caps(args.config.get("groebner.max_pairs", Caps.max_pairs),
             args.config.get("groebner.max_degree", Caps.max_degree))
    if args.max_degree is not None:
        c.max_degree = args.max_degree
    return c


def _cap(args, key: str):
    return args.cap if args.cap is not None else args.config.get(key)


# --- input helpers ---

def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _vars(s: str) -> tuple:
    return tuple(v.strip() for v in s.split(",") if v.strip())


def _ring(args) -> Ring:
    return Ring(_vars(args.vars))


def _csv(s: str) -> list:
    out = []
    for tok in s.split(","):
        tok = tok.strip()
        try:
            out.append(Fraction(tok))
        except ValueError:
            out.append(tok)
    return out


def _kv(s: str) -> dict:
    out = {}
    for part in s.split(","):
        if part.strip():
            k, v = part.split("=", 1)
            out[k.strip()] = int(v)
    return out


def _params(s: str | None) -> dict:
    if not s:
        return {}
    if s.lstrip().startswith("{"):
        return json.loads(s)
    out = {}
    for part in s.split(","):
        if part.strip():
            k, v = part.split("=", 1)
            v = v.strip()
            try:
                out[k.strip()] = int(v)
            except ValueError:
                out[k.strip()] = v
    return out


# --- keller ---

def cmd_keller(args) -> tuple:
    caps_inv = _cap(args, "invert.cap")
    if args.action == "check":
        F = keller.PolyMap.from_json(_load_json(args.map))
        jd = keller.jacobian(F)
        ok = keller.is_keller(F)
        return ("ok" if ok else "fail"), {"keller": ok, "jacobian_determinant": jd.determinant}
    if args.action == "invert":
        F = keller.PolyMap.from_json(_load_json(args.map))
        try:
            res = keller.invert_exact(F, caps_inv)
        except keller.NotKellerError:
            return "fail", {"keller": False}
        if not res.found:
            raise CapExhausted(f"no inverse within order {res.cap}")
        return "ok", {"inverse": res.inverse.to_json(), "order": res.order}
    if args.action == "chain":
        F = keller.PolyMap.from_json(_load_json(args.map))
        G = keller.PolyMap.from_json(_load_json(args.inverse))
        v = keller.chain_rule_check(F, G)
        return ("ok" if v == 1 else "fail"), {"chain_rule": v}
    if args.action == "druzkowski":
        A = [[Fraction(x) for x in row] for row in _load_json(args.matrix)]
        dm = keller.druzkowski(A)
        ok = keller.is_keller(dm.map)
        return "ok", {"map": dm.map.to_json(), "rank": dm.rank, "keller": ok}
    if args.action == "newton":
        p = _ring(args).parse(args.poly)
        ok = keller.newton_triangle_test(p)
        return ("ok" if ok else "fail"), {"triangle": ok, "vertices": [list(v) for v in
                                                                      newton_polygon(p).hull_vertices]}
    if args.action == "topparts":
        ring = _ring(args)
        w = tuple(int(x) for x in args.weights.split(","))
        tp = keller.top_parts_compatible(ring.parse(args.f), ring.parse(args.g), w)
        ok = tp.jac_zero and tp.proportional
        return ("ok" if ok else "fail"), {
            "jac_zero": tp.jac_zero, "proportional": tp.proportional,
            "f_degree": tp.f_degree, "g_degree": tp.g_degree,
        }
    raise ValueError(args.action)


# --- lnd ---

def _verdict_json(v) -> dict:
    if isinstance(v, lnd.LocallyNilpotent):
        return {"verdict": v.status, "bound": v.bound, "lengths": list(v.lengths)}
    if isinstance(v, lnd.NotNilpotentWitness):
        return {"verdict": v.status, "generator": v.generator, "iterate": v.iterate,
                "earlier": v.earlier, "scalar": v.scalar, "value": v.value}
    return {"verdict": v.status, "cap": v.cap}


def cmd_lnd(args) -> tuple:
    delta = lnd.Derivation.from_json(_load_json(args.derivation))
    ring = delta.ring
    cap = _cap(args, "lnd.cap")
    if args.action == "length":
        c = cap if cap is not None else lnd.default_cap(delta)
        n = lnd.delta_length(delta, ring.parse(args.poly), c)
        if n is None:
            raise CapExhausted(f"length exceeds {c}")
        return "ok", {"length": n}
    if args.action == "nilpotent":
        v = lnd.is_locally_nilpotent(delta, cap)
        status = {"locally_nilpotent": "ok", "not_nilpotent": "fail", "unknown": "cap"}[v.status]
        return status, _verdict_json(v)
    if args.action == "exp":
        v = lnd.is_locally_nilpotent(delta, cap)
        if isinstance(v, lnd.UnknownCapExceeded):
            raise CapExhausted("nilpotency undecided")
        if isinstance(v, lnd.NotNilpotentWitness):
            return "fail", _verdict_json(v)
        e = lnd.exp_map(delta, ring.parse(args.poly), v)
        return "ok", {"exp": e, "vars": list(e.ring.vars)}
    if args.action == "slice":
        coeffs = lnd.slice_decompose(delta, ring.parse(args.slice), ring.parse(args.poly), cap)
        return "ok", {"coefficients": coeffs}
    if args.action == "rentschler":
        ok = lnd.rentschler_verify(delta, ring.parse(args.f), ring.parse(args.g), _cap(args, "invert.cap"))
        return ("ok" if ok else "fail"), {"rentschler": ok}
    raise ValueError(args.action)


# --- graph ---

def cmd_graph(args) -> tuple:
    a = args.action
    if a in ("pi1", "abelian", "form"):
        if getattr(args, "pseudo_plane", None):
            d, r = (int(x) for x in args.pseudo_plane.split(","))
            g = fibration.pseudo_plane_pi1(d, r)
            pres, ab = g.presentation, g.abelian
        else:
            tree = fibration.WeightedTree.from_json(_load_json(args.tree))
            if a == "form":
                f = fibration.intersection_form(tree)
                return "ok", {"matrix": [list(r) for r in f.matrix], "det": f.det,
                              "negative_definite": f.negative_definite, "order": list(f.order)}
            pres = fibration.presentation_from_tree(tree)
            ab = fibration.abelianization(pres)
        doc = {}
        if a == "pi1":
            doc["presentation"] = pres.to_json()
            if args.subgroups:
                doc["subgroup_counts"] = list(fibration.subgroup_counts(pres, args.subgroups))
        if a == "abelian" or args.abelian:
            doc.update(ab.to_json())
        return "ok", doc
    if a == "pic":
        fibers = [tuple(int(x) for x in f.split(":")) for f in args.fibers.split(",") if f.strip()]
        p = fibration.pic_invariants(args.base, fibers)
        return "ok", {"rank": p.rank, "torsion": None if p.torsion is None else list(p.torsion)}
    if a == "genus":
        g = fibration.cusp_genus(args.m1, args.m2)
        oracle = fibration.cusp_genus_oracle(args.m1, args.m2)
        return ("ok" if oracle == g.genus else "fail"), {
            "genus": g.genus, "mult_sequence": list(g.mult_sequence), "oracle": oracle}
    if a == "enumerate":
        sols = fibration.rh_enumerate(args.mode, _kv(args.bounds))
        return "ok", {"count": len(sols), "solutions": sols}
    if a == "section":
        s = fibration.section_coefficient(fibration.FiberSpec.from_json(_load_json(args.fiber)))
        return "ok", {"alpha": s.alpha, "betas": list(s.betas), "unknowns": list(s.unknowns)}
    if a == "canon":
        return "ok", {"index": fibration.canonical_index(args.kind, _params(args.params))}
    if a == "lines":
        d = [int(x) for x in args.d.split(",")]
        dp = [int(x) for x in args.dprime.split(",")]
        return "ok", {"lines": fibration.boundary_lines_count(args.n, d, dp)}
    raise ValueError(a)


# --- case ---

def cmd_case(args) -> tuple:
    a = args.action
    caps = _caps(args)
    if a in ("hom", "family"):
        if a == "hom":
            phi = casebook.RingHom.from_json(_load_json(args.hom))
        else:
            if args.case_file:
                data = _load_json(args.case_file)
                fam, params = data["family"], data.get("params", {})
            else:
                fam, params = args.family, _params(args.params)
            phi = casebook.family_endo(fam, params, localized=not args.plain)
        v = casebook.hom_check(phi, caps)
        doc = {"hom": phi.to_json(), "well_defined": v.well_defined, "unramified": v.unramified}
        if v.well_defined is None or v.unramified == "cap":
            return "cap", doc
        return ("ok" if v.passed else "fail"), doc
    if a == "dickson":
        g, h = casebook.dickson_gh(args.n)
        return "ok", {"g": g, "h": h}
    if a == "pq":
        vals = _csv(args.a) if args.a else [f"a{i}" for i in range(1, args.d + 1)]
        sol = casebook.pq_solve(args.d, args.r, vals)
        return ("ok" if casebook.transition_check(sol) else "fail"), {
            "d": sol.d, "r": sol.r, "a": list(sol.a), "charts": sol.table()}
    if a == "sigma":
        res = casebook.sigma_verify(args.which, _params(args.params))
        return ("ok" if res.ok else "fail"), {
            "case": res.case, "ok": res.ok, "sections": res.sections, "reason": res.reason,
            "failures": [{"relation": r, "root": lam, "residual": p} for r, lam, p in res.failures]}
    if a == "iso":
        w = casebook.tilde_iso_test(args.d, args.r, _csv(args.a), _csv(args.b))
        if w is None:
            return "fail", {"isomorphic": False}
        return "ok", {"isomorphic": True, "c": w[0], "u": w[1]}
    raise ValueError(a)


# --- golden tables ---

def _example1421() -> list:
    diffs = []
    ring = None
    for r in (3, 4):
        sol = casebook.pq_solve(2, r, ["a1", "a2"])
        ring = sol.ring
        x, a1, a2 = ring.gens()
        for j, w in enumerate(sol.roots):
            c1 = -a1 / 2
            c2 = (a1**2 - 4 * a2).scale(w) / 8
            p = ring.const(w) + c1 * x + c2 * x**2
            if r == 3:
                q = -(2 * c1 * c2 + a1 * c2 + c2**2 * x)
            else:
                q = -(c2**2 * x)
            for name, want, got in (("p", p, sol.p[j]), ("q", q, sol.q[j])):
                if want != got:
                    diffs.append({"cell": f"r={r} root={w} {name}", "expected": want, "got": got})
            if r == 4 and sol.coefficients[j][3]:
                diffs.append({"cell": f"r=4 root={w} c3", "expected": "0", "got": sol.coefficients[j][3]})
    return diffs


def _platonic() -> list:
    sols = fibration.rh_enumerate("platonic_ineq", {"s": 3, "m_max": 30, "N_max": 10**6})
    got = sorted(ms for ms, _ in sols)
    want = sorted([(2, 2, n) for n in range(2, 31)] + [(2, 3, 3), (2, 3, 4), (2, 3, 5)])
    return [] if got == want else [{"cell": "triplets", "expected": want, "got": got}]


def _euler_zero() -> list:
    got = sorted(fibration.rh_enumerate("euler_zero", {"m_max": 12, "r_max": 6}))
    want = [(2, 2, 2, 2), (2, 3, 6), (2, 4, 4), (3, 3, 3)]
    return [] if got == sorted(want) else [{"cell": "sequences", "expected": want, "got": got}]


def _pi1_orders() -> list:
    diffs = []
    for d in range(2, 7):
        ab = fibration.pseudo_plane_pi1(d, 1).abelian
        if ab.free_rank or ab.torsion != (d * d,):
            diffs.append({"cell": f"d={d}", "expected": [d * d], "got": ab.to_json()})
    return diffs


TABLES = {
    "example1421": _example1421,
    "platonic": _platonic,
    "euler_zero": _euler_zero,
    "pi1_orders": _pi1_orders,
}


def cmd_reproduce(args) -> tuple:
    diffs = TABLES[args.table]()
    return ("ok" if not diffs else "fail"), {"table": args.table, "diff": diffs}


# --- parser ---

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--emit", choices=("json", "text"), default="json")
    common.add_argument("--max-degree", type=int, default=None)
    common.add_argument("--cap", type=int, default=None)

    p = argparse.ArgumentParser(prog="polyjc", description="Exact polynomial-map and surface computations.")
    top = p.add_subparsers(dest="group", required=True)

    k = top.add_parser("keller").add_subparsers(dest="action", required=True)
    for name in ("check", "invert"):
        s = k.add_parser(name, parents=[common])
        s.add_argument("--map", required=True)
    s = k.add_parser("chain", parents=[common])
    s.add_argument("--map", required=True)
    s.add_argument("--inverse", required=True)
    s = k.add_parser("druzkowski", parents=[common])
    s.add_argument("--matrix", required=True)
    s = k.add_parser("newton", parents=[common])
    s.add_argument("--poly", required=True)
    s.add_argument("--vars", default="x,y")
    s = k.add_parser("topparts", parents=[common])
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--weights", default="1,1")
    s.add_argument("--vars", default="x,y")

    ln = top.add_parser("lnd").add_subparsers(dest="action", required=True)
    for name in ("length", "nilpotent", "exp", "slice", "rentschler"):
        s = ln.add_parser(name, parents=[common])
        s.add_argument("--derivation", required=True)
        if name in ("length", "exp", "slice"):
            s.add_argument("--poly", required=True)
        if name == "slice":
            s.add_argument("--slice", required=True)
        if name == "rentschler":
            s.add_argument("--f", required=True)
            s.add_argument("--g", required=True)

    g = top.add_parser("graph").add_subparsers(dest="action", required=True)
    for name in ("pi1", "abelian", "form"):
        s = g.add_parser(name, parents=[common])
        src = s.add_mutually_exclusive_group(required=True)
        src.add_argument("--tree")
        if name != "form":
            src.add_argument("--pseudo-plane", metavar="D,R")
        if name == "pi1":
            s.add_argument("--abelian", action="store_true")
            s.add_argument("--subgroups", type=int, default=0, metavar="MAX_INDEX")
        else:
            s.set_defaults(abelian=False)
    s = g.add_parser("pic", parents=[common])
    s.add_argument("--base", default="A1")
    s.add_argument("--fibers", required=True, help="count:mult,...")
    s = g.add_parser("genus", parents=[common])
    s.add_argument("--m1", type=int, required=True)
    s.add_argument("--m2", type=int, required=True)
    s = g.add_parser("enumerate", parents=[common])
    s.add_argument("--mode", required=True)
    s.add_argument("--bounds", required=True, help="key=value,...")
    s = g.add_parser("section", parents=[common])
    s.add_argument("--fiber", required=True)
    s = g.add_parser("canon", parents=[common])
    s.add_argument("--kind", required=True)
    s.add_argument("--params", required=True)
    s = g.add_parser("lines", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", required=True)
    s.add_argument("--dprime", required=True)

    c = top.add_parser("case").add_subparsers(dest="action", required=True)
    s = c.add_parser("hom", parents=[common])
    s.add_argument("--hom", required=True)
    s.set_defaults(plain=False)
    s = c.add_parser("family", parents=[common])
    s.add_argument("--family", choices=casebook.FAMILIES)
    s.add_argument("--params")
    s.add_argument("--case-file")
    s.add_argument("--plain", action="store_true", help="skip the localization variable")
    s = c.add_parser("dickson", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s = c.add_parser("pq", parents=[common])
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--a", default=None)
    s = c.add_parser("sigma", parents=[common])
    s.add_argument("--case", dest="which", required=True,
                   choices=("lemma1426_1", "lemma1426_2", "prop1427"))
    s.add_argument("--params")
    s = c.add_parser("iso", parents=[common])
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)

    s = top.add_parser("reproduce", parents=[common])
    s.add_argument("table", choices=sorted(TABLES))
    return p


HANDLERS = {"keller": cmd_keller, "lnd": cmd_lnd, "graph": cmd_graph, "case": cmd_case,
            "reproduce": cmd_reproduce}


def dispatch(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    command = args.group + ("" if args.group == "reproduce" else " " + args.action)
    try:
        args.config = load_config()
        if args.group == "case" and args.action == "family" and not (args.family or args.case_file):
            raise ValueError("give --family or --case-file")
        status, payload = HANDLERS[args.group](args)
    except (CapExhausted, GroebnerCapError, lnd.InconclusiveError) as e:
        status, payload = "cap", {"message": str(e)}
    except (PolySyntaxError, UnknownVariableError, ValueError, KeyError, TypeError,
            OSError, json.JSONDecodeError, ZeroDivisionError) as e:
        err.write(f"polyjc: {type(e).__name__}: {e}\n")
        status, payload = "error", {"message": f"{type(e).__name__}: {e}"}
    doc = {"command": command, "status": status}
    doc.update(payload)
    _emit(doc, args.emit, out)
    return EXIT[status]


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

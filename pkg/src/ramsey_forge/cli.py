"""Command line entry point: ``ramsey-forge <command> [flags]``.

Exit codes: 0 when a verdict was computed (an arrow that fails is still a
completed computation), 1 on input errors, 2 when a budget was exhausted,
3 when an internal re-validation failed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, replace
from pathlib import Path

from . import arrows, expansions, metric, preadjunction, reports, selftest, tournaments
from . import structures as st
from .config import budget_from_env, parse_int
from .errors import BudgetExceeded, InternalCheckError, ParameterError, PreconditionError
from .morphisms import MorphismKind, check, enumerate_morphisms
from .parallel import default_workers
from .specs import parse_map, parse_order, parse_structure
from .structures import EdgeOrder, LinearOrder

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3

# flags that never change a result and are left out of the embedded config
_RUNTIME_KEYS = {"workers", "out", "format", "handler"}
_BUDGET_FLAGS = {"max_colorings": "colorings", "max_morphisms": "morphisms",
                 "max_tournament": "tournament_size", "max_cover": "cover_entries"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- helpers --------------------------------------------------------------------

_LINEAR = {MorphismKind.RIGID_SURJECTION, MorphismKind.NONEXPANSIVE_RIGID_SURJECTION}
_EDGE = {MorphismKind.QUOTIENT_RIGID_SURJECTION, MorphismKind.QUOTIENT_RIGID_MAP}


def _default_order(kind, S, text, domain=False):
    """Orders default to label order (linear) or the canonical tidy listing (edges)."""
    given = parse_order(text, S)
    if given is not None or kind not in _LINEAR | _EDGE:
        return given
    if kind in _LINEAR:
        return None if isinstance(S, st.Chain) else LinearOrder.identity(S.n)
    if kind is MorphismKind.QUOTIENT_RIGID_MAP and domain:
        return EdgeOrder(S.non_loops())
    return EdgeOrder(S.edges())


def _instance(args, C=None):
    kind = MorphismKind.parse(args.kind)
    A, B = parse_structure(args.A), parse_structure(args.B)
    C = C if C is not None else parse_structure(args.C)
    return arrows.DualArrowInstance(
        A, B, C, args.k, getattr(args, "t", 1) or 1, kind,
        _default_order(kind, A, args.order_A, domain=True),
        _default_order(kind, B, args.order_B, domain=True),
        _default_order(kind, C, args.order_C, domain=True),
    )


def _verdict_json(inst, v):
    out = {"instance": inst.to_json()}
    out.update(v.to_json())
    if v.holds is None:
        out["holds"] = None
        out["status"] = "unknown"
    else:
        out["status"] = "holds" if v.holds else "fails"
    return out


# -- commands ---------------------------------------------------------------------

def cmd_gen(args, budget):
    S = parse_structure(args.spec)
    out = {"structure": st.to_json(S)}
    if isinstance(S, st.ReflexiveDigraph):
        out["flags"] = asdict(st.classify(S))
    return out


def cmd_enum(args, budget):
    kind = MorphismKind.parse(args.kind)
    X, Y = parse_structure(args.X), parse_structure(args.Y)
    oX = _default_order(kind, X, args.order_X, domain=True)
    oY = _default_order(kind, Y, args.order_Y)
    homs = enumerate_morphisms(X, Y, kind, oX, oY, max_morphisms=budget.morphisms)
    return {"kind": kind.value, "count": len(homs), "morphisms": [h.to_json() for h in homs]}


def cmd_check(args, budget):
    kind = MorphismKind.parse(args.kind)
    X, Y = parse_structure(args.X), parse_structure(args.Y)
    oX = _default_order(kind, X, args.order_X, domain=True)
    oY = _default_order(kind, Y, args.order_Y)
    res = check(parse_map(args.map), X, Y, kind, oX, oY)
    return {"kind": kind.value, "map": list(parse_map(args.map)), "ok": res.ok, "reason": res.reason,
            "witness": list(res.witness) if res.witness is not None else None}


def cmd_arrow(args, budget):
    if args.search:
        A, B = parse_structure(args.A), parse_structure(args.B)
        found = arrows.find_arrow_size(A, B, args.k, args.t, args.kind, cap=args.cap, budget=budget,
                                       workers=args.workers)
        return {"search": True, "A": st.to_json(A), "B": st.to_json(B), "k": args.k, "t": args.t,
                "kind": MorphismKind.parse(args.kind).value, "cap": args.cap, **found}
    if args.C is None:
        raise ParameterError("--C is required unless --search is given")
    inst = _instance(args)
    v = arrows.dual_arrow_check(inst, budget=budget, workers=args.workers, mode=args.mode,
                                samples=args.samples, seed=args.seed)
    return _verdict_json(inst, v)


def cmd_mint(args, budget):
    inst = _instance(args)
    t, verdicts = arrows.min_t(inst, budget=budget, workers=args.workers)
    return {
        "instance": {k: v for k, v in inst.to_json().items() if k != "t"},
        "min_t": t,
        "per_t": [{"t": s, "holds": v.holds, **({"bad_coloring": list(v.bad_coloring)} if v.bad_coloring else {})}
                  for s, v in sorted(verdicts.items())],
    }


def cmd_fibers(args, budget):
    A = parse_structure(args.A)
    items = expansions.fibers(A, args.kind)
    out = {"kind": args.kind, "count": len(items)}
    if args.list:
        enc = []
        for e in items:
            if isinstance(e, LinearOrder):
                enc.append(list(e.perm))
            elif isinstance(e, EdgeOrder):
                enc.append([list(x) for x in e.edges])
            else:
                enc.append(st.to_json(e))
        out["fibers"] = enc
    return out


def cmd_bounds(args, budget):
    return expansions.bound_report(parse_structure(args.A), args.cls)


def cmd_preadj(args, budget):
    if args.action == "sweep":
        return preadjunction.pa_sweep(max_x=args.max_x, max_target=args.max_target, workers=args.workers)
    D = parse_structure(args.D)
    m, q = preadjunction.universal_cover(D)
    return {"copies": m, "map": list(q)}


def cmd_tournaments(args, budget):
    if args.action == "no-degree":
        return tournaments.no_degree_certificate(args.n, budget=budget)
    if args.action == "siblings":
        return tournaments.sibling_search(args.a, args.b, args.max, workers=args.workers, budget=budget)
    S, T = parse_structure(args.S), parse_structure(args.T)
    w = tournaments.is_inflation(S, T)
    return {"inflation": w is not None, "witness": list(w) if w is not None else None}


def cmd_metric(args, budget):
    if args.action == "selfsim":
        return metric.self_similar_rigid(parse_map(args.order)).to_json()
    M = parse_structure(args.M)
    if not isinstance(M, st.MetricSpace):
        raise ParameterError("metric commands need a metric space")
    if args.action == "project":
        N, q = metric.universal_projection(M)
        return {"N": N, "q": list(q)}
    splits = metric.split_by_threshold(M, st.parse_fraction(args.l))
    return {"l": st.format_fraction(st.parse_fraction(args.l)), "count": len(splits), "splits": [list(s) for s in splits]}


def cmd_selftest(args, budget):
    return selftest.run()


# -- parser -------------------------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run options")
    g.add_argument("--format", choices=["json", "csv"], default="json")
    g.add_argument("--out", help="write the report here instead of stdout")
    g.add_argument("--workers", type=int, default=None, help="parallel workers (default: available CPUs)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--max-colorings", type=parse_int)
    g.add_argument("--max-morphisms", type=parse_int)
    g.add_argument("--max-tournament", type=int)
    g.add_argument("--max-cover", type=parse_int)
    return p


def _instance_args(p, need_t=True):
    p.add_argument("--kind", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--C")
    p.add_argument("--k", type=int, required=True)
    if need_t:
        p.add_argument("--t", type=int, default=1)
    for name in ("A", "B", "C"):
        p.add_argument(f"--order-{name}", dest=f"order_{name}")


def build_parser():
    common = _common()
    parser = _Parser(prog="ramsey-forge", description="Finite dual Ramsey workbench")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="build a structure")
    p.add_argument("spec")
    p.set_defaults(handler=cmd_gen)

    for name, fn in (("enum", cmd_enum), ("check", cmd_check)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--X", required=True)
        p.add_argument("--Y", required=True)
        p.add_argument("--kind", required=True)
        p.add_argument("--order-X", dest="order_X")
        p.add_argument("--order-Y", dest="order_Y")
        if name == "check":
            p.add_argument("--map", required=True)
        p.set_defaults(handler=fn)

    p = sub.add_parser("arrow", parents=[common], help="decide C -> (B)^A_{k,t}")
    _instance_args(p)
    p.add_argument("--mode", choices=["exhaustive", "sampling"], default="exhaustive")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--search", action="store_true", help="search chain sizes C upward")
    p.add_argument("--cap", type=int, default=32)
    p.set_defaults(handler=cmd_arrow)

    p = sub.add_parser("mint", parents=[common], help="least t for which the arrow holds")
    _instance_args(p, need_t=False)
    p.set_defaults(handler=cmd_mint)

    p = sub.add_parser("fibers", parents=[common])
    p.add_argument("--A", required=True)
    p.add_argument("--kind", required=True, choices=[k.value for k in expansions.ExpansionKind])
    p.add_argument("--list", action="store_true")
    p.set_defaults(handler=cmd_fibers)

    p = sub.add_parser("bounds", parents=[common])
    p.add_argument("--A", required=True)
    p.add_argument("--class", dest="cls", required=True)
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("preadj", parents=[common])
    p.add_argument("action", choices=["sweep", "cover"])
    p.add_argument("--max-x", type=int, default=4)
    p.add_argument("--max-target", type=int, default=2)
    p.add_argument("--D")
    p.set_defaults(handler=cmd_preadj)

    p = sub.add_parser("tournaments", parents=[common])
    p.add_argument("action", choices=["no-degree", "siblings", "inflation"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--a", type=int, default=3)
    p.add_argument("--b", type=int, default=5)
    p.add_argument("--max", type=int, default=7)
    p.add_argument("--S")
    p.add_argument("--T")
    p.set_defaults(handler=cmd_tournaments)

    p = sub.add_parser("metric", parents=[common])
    p.add_argument("action", choices=["project", "split", "selfsim"])
    p.add_argument("--in", "--M", dest="M")
    p.add_argument("--l", default="1")
    p.add_argument("--order")
    p.set_defaults(handler=cmd_metric)

    p = sub.add_parser("selftest", parents=[common])
    p.set_defaults(handler=cmd_selftest)
    return parser


def _budget(args):
    b = budget_from_env()
    for flag, field in _BUDGET_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            b = replace(b, **{field: value})
    return b


_STRUCTURE_ARGS = ("spec", "A", "B", "C", "X", "Y", "D", "S", "T", "M")


def _config(args, budget):
    cfg = {k: v for k, v in vars(args).items() if k not in _RUNTIME_KEYS and k not in _BUDGET_FLAGS}
    cfg["budget"] = asdict(budget)
    # resolved structures, so the hash covers file contents and not just paths
    cfg["inputs"] = {k: st.to_json(parse_structure(cfg[k])) for k in _STRUCTURE_ARGS if cfg.get(k) is not None}
    return cfg


def _missing(args):
    need = {
        ("preadj", "cover"): ["D"],
        ("tournaments", "inflation"): ["S", "T"],
        ("metric", "project"): ["M"],
        ("metric", "split"): ["M"],
        ("metric", "selfsim"): ["order"],
    }.get((args.command, getattr(args, "action", None)), [])
    return [n for n in need if getattr(args, n, None) is None]


def _emit(report, args):
    text = reports.to_csv(report) if args.format == "csv" else reports.dumps(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    missing = _missing(args)
    if missing:
        parser.error(f"{args.command} {args.action} needs --{', --'.join(missing)}")
    if args.workers is None:
        args.workers = default_workers()
    try:
        budget = _budget(args)
        result = args.handler(args, budget)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ParameterError, PreconditionError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = reports.envelope(args.command, _config(args, budget), result)
    _emit(report, args)
    if args.command == "selftest" and not result["passed"]:
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

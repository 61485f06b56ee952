"""Command-line entry point.

Subcommands: check, encode, equiv, exec-map, charfix, oracle, laws, lint.
All reports are JSON lines; lattice elements serialize by their declared
identifiers.  Exit codes: 0 success / all properties hold, 1 property
violation, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import random
import sys

from . import gen, oracle
from . import syntax as S
from .ctl_eval import (
    TemporalModel,
    check_fixpoint_char_condition,
    check_weak_fixpoint_char,
    eval_ctl,
    eval_ctl_classical,
)
from .errors import LatmcError
from .execution import ExecutionMapHandle, path_extremum, until_shape
from .fml_eval import eval_fml
from .lattice import load_lattice
from .models import Predicate, load_model, to_continuation
from .syntax import encode_ctl, parse_formula, print_formula
from .transfer import Beta, Identity, IotaFromLifting, check_morphism_laws


def _emit(obj):
    print(json.dumps(obj, ensure_ascii=False))


def _read_json(path):
    return json.loads(pathlib.Path(path).read_text())


def _load_model_arg(args):
    m = load_model(_read_json(args.model),
                   materialize_bound=args.materialize_bound)
    if args.max_iters:
        m.cap_override = args.max_iters
    return m


def _temporal(args, m):
    if args.exec == "powerset-max":
        return TemporalModel.from_powerset(m)
    cm = to_continuation(m)
    return TemporalModel.min_max(cm, args.exec)


def cmd_check(args):
    m = _load_model_arg(args)
    f = parse_formula(args.formula, "fml" if args.logic == "fml" else "ctlstar")
    stats = {}
    diagnostic = {"verified": m.verified}
    if args.logic == "fml":
        env = {}
        if args.env:
            for name, mapping in _read_json(args.env).items():
                env[name] = Predicate.from_dict(m.lattice, m.states, mapping)
        result = eval_fml(m, f, env, stats)
    else:
        tm = _temporal(args, m)
        result = eval_ctl(tm, f, stats)
        diagnostic["orbit_size"] = tm.exec.orbit_size()
    diagnostic["fixpoint_iterations"] = stats.get("iterations", 0)
    diagnostic["fixpoints"] = stats.get("fixpoints", 0)
    _emit(result.to_json())
    _emit({"diagnostic": diagnostic})
    return 0


def cmd_encode(args):
    f = parse_formula(args.formula, "ctlstar")
    print(print_formula(encode_ctl(f)))
    return 0


def cmd_equiv(args):
    """Differential suite: coalgebraic vs transferred-continuation FML
    semantics on every model file in a directory, plus the classical CTL
    comparison on two-valued powerset models."""
    rng = random.Random(args.seed)
    files = sorted(pathlib.Path(args.dir).glob("*.json"))
    if not files:
        _emit({"error": "usage", "message": f"no model files in {args.dir}"})
        return 2
    failures = 0
    for path in files:
        m = load_model(_read_json(path),
                       materialize_bound=args.materialize_bound)
        cm = to_continuation(m)
        model_failures = 0
        for i in range(args.count):
            f = gen.make_fml(rng, depth=rng.randint(1, 5),
                             allow_neg=m.lattice.has_neg)
            lhs = eval_fml(m, f)
            rhs = eval_fml(cm, f)
            if lhs != rhs:
                model_failures += 1
                _emit({"model": path.name, "formula": print_formula(f),
                       "coalgebraic": lhs.to_json(),
                       "continuation": rhs.to_json(), "equal": False})
                break
        if m.lattice.n == 2 and m.kind in ("powerset", "nonempty-powerset"):
            tm = TemporalModel.from_powerset(m)
            for i in range(args.count):
                f = gen.make_ctl(rng, depth=rng.randint(1, 3))
                lhs = eval_ctl(tm, f)
                rhs = eval_ctl_classical(m, f)
                if lhs != rhs:
                    model_failures += 1
                    _emit({"model": path.name, "formula": print_formula(f),
                           "transferred": lhs.to_json(),
                           "classical": rhs.to_json(), "equal": False})
                    break
        failures += model_failures
        _emit({"model": path.name, "checked": args.count,
               "equal": model_failures == 0})
    return 1 if failures else 0


def cmd_exec_map(args):
    m = _load_model_arg(args)
    if "@" not in args.query:
        _emit({"error": "usage", "message": "query must be formula@state"})
        return 2
    text, state = args.query.rsplit("@", 1)
    f = parse_formula(text, "ctlstar")
    if not isinstance(f, (S.Exists, S.Forall)):
        _emit({"error": "usage",
               "message": "exec-map queries take a quantified formula"})
        return 2
    cm = to_continuation(m)
    tm = TemporalModel.min_max(cm, args.polarity)
    value = eval_ctl(tm, f).at(state)
    _emit({"query": args.query, "polarity": args.polarity,
           "value": value.name, "orbit_size": tm.exec.orbit_size()})
    return 0


def cmd_charfix(args):
    m = _load_model_arg(args)
    cm = to_continuation(m)
    tm = TemporalModel.min_max(cm, args.exec)
    f = parse_formula(args.formula, "ctlstar")
    report = check_weak_fixpoint_char(tm, f)
    _emit(report.to_json())
    ok = report.holds is not False
    if args.hold and args.goal:
        cond = check_fixpoint_char_condition(
            tm, parse_formula(args.hold, "ctlstar"),
            parse_formula(args.goal, "ctlstar"))
        _emit(cond.to_json())
    return 0 if ok else 1


def cmd_lint(args):
    code = 0
    for path in args.models:
        try:
            m = load_model(_read_json(path),
                           materialize_bound=args.materialize_bound)
            _emit({"model": path, "valid": True, "kind": m.kind,
                   "states": len(m.states), "notes": m.notes,
                   "verified": m.verified})
        except (LatmcError, KeyError, ValueError) as exc:
            code = 2
            _emit({"model": path, "valid": False, "error": str(exc)})
    return code


def cmd_laws(args):
    if args.lattice:
        lattice = load_lattice(_read_json(args.lattice))
    else:
        lattice = gen.builtin_lattice(
            "chain3" if args.morphism == "beta" else "bool2")
    if args.morphism == "identity":
        morphism = Identity()
    elif args.morphism == "beta":
        morphism = Beta(lattice)
    else:
        morphism = IotaFromLifting(args.morphism)
    report = check_morphism_laws(morphism, lattice, max_states=args.max_states)
    for check in report.checks:
        _emit(check)
    _emit({"morphism": report.morphism, "passed": report.passed})
    return 0 if report.passed else 1


def cmd_oracle(args):
    rng = random.Random(args.seed)
    ok = True
    if args.suite == "trinity":
        for kind in ("powerset", "weighted"):
            for lname in ("bool2", "chain3")[:args.max_lattice]:
                lat = gen.builtin_lattice(lname)
                xs = [f"x{i}" for i in range(min(2, args.max_states))]
                ys = [f"y{i}" for i in range(min(2, args.max_states))]
                rep = oracle.check_trinity(kind, lat, xs, ys)
                ok = ok and rep.passed
                _emit(rep.to_json())
    elif args.suite == "laws":
        for kind in ("powerset", "weighted"):
            lat = gen.builtin_lattice("chain3")
            rep = check_morphism_laws(IotaFromLifting(kind), lat,
                                      max_states=min(2, args.max_states))
            ok = ok and rep.passed
            _emit(rep.to_json())
        rep = check_morphism_laws(Beta(gen.builtin_lattice("chain3")),
                                  max_states=min(2, args.max_states))
        ok = ok and rep.passed
        _emit(rep.to_json())
    elif args.suite == "extrema":
        for i in range(10):
            m = gen.make_model(rng, "nonempty-powerset", max_states=3)
            base = ("U", m.label("p"), m.label("q"))
            for pol in ("inf", "sup"):
                val = path_extremum(m.lattice, m.states, base, pol).index
                (ilo, ihi), (slo, shi) = oracle.brute_force_path_values(
                    m.lattice, m.states, base, horizon=6)
                lo, hi = (ilo, ihi) if pol == "inf" else (slo, shi)
                good = m.lattice.leq[lo.index][val] and \
                    m.lattice.leq[val][hi.index]
                closed = lo.index == hi.index
                ok = ok and good and (not closed or val == lo.index)
                _emit({"instance": i, "polarity": pol, "value":
                       m.lattice.names[val], "bracket": [lo.name, hi.name],
                       "ok": good})
    elif args.suite == "bracket":
        for i in range(5):
            m = gen.make_model(rng, "nonempty-powerset", max_states=3,
                               lattice=gen.builtin_lattice("bool2"))
            cm = to_continuation(m)
            shape = until_shape(m.label("p"), m.label("q"))
            for pol in ("min", "max"):
                handle = ExecutionMapHandle.continuation_min_max(cm, pol)
                for x in m.states:
                    val = handle.evaluate(x, shape).index
                    for depth in range(0, args.depth + 1):
                        lo, hi = oracle.bounded_bracket(
                            cm, x, ((), shape), depth, horizon=4)
                        good = (pol != "min" or m.lattice.leq[lo.index][val]) and \
                            (pol != "max" or m.lattice.leq[val][hi.index])
                        ok = ok and good
                _emit({"instance": i, "polarity": pol, "ok": ok})
    else:
        _emit({"error": "usage", "message": f"unknown suite {args.suite!r}"})
        return 2
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="latmc",
        description="lattice-valued model checking for FML and CTL over "
                    "continuation coalgebras")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-iters", type=int, default=None,
                        help="override the fixpoint iteration cap")
    parser.add_argument("--materialize-bound", type=int, default=4096)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a formula on a model")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--logic", choices=["fml", "ctl"], default="fml")
    p.add_argument("--exec", choices=["min", "max", "powerset-max"],
                   default="max")
    p.add_argument("--env", default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("encode", help="print the fixpoint encoding of a "
                                      "CTL formula")
    p.add_argument("--formula", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("equiv", help="coalgebraic vs continuation "
                                     "differential suite on a model dir")
    p.add_argument("--dir", required=True)
    p.add_argument("--count", type=int, default=20)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("exec-map", help="solve and print execution-map values")
    p.add_argument("--model", required=True)
    p.add_argument("--polarity", choices=["min", "max"], default="max")
    p.add_argument("--query", required=True, help='e.g. "E(p U q)@s0"')
    p.set_defaults(func=cmd_exec_map)

    p = sub.add_parser("charfix", help="fixpoint-characterization report")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--exec", choices=["min", "max"], default="max")
    p.add_argument("--hold", default=None)
    p.add_argument("--goal", default=None)
    p.set_defaults(func=cmd_charfix)

    p = sub.add_parser("oracle", help="run an oracle suite")
    p.add_argument("--suite", required=True,
                   choices=["trinity", "bracket", "extrema", "laws"])
    p.add_argument("--max-states", type=int, default=2)
    p.add_argument("--max-lattice", type=int, default=2)
    p.add_argument("--depth", type=int, default=4)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("laws", help="check monad-morphism laws")
    p.add_argument("--morphism", required=True,
                   choices=["powerset", "nonempty-powerset", "weighted",
                            "affine-weighted", "beta", "identity"])
    p.add_argument("--lattice", default=None)
    p.add_argument("--max-states", type=int, default=2)
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("lint", help="validate model files")
    p.add_argument("models", nargs="+")
    p.set_defaults(func=cmd_lint)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except LatmcError as exc:
        _emit(exc.to_json())
        code = 2
    except FileNotFoundError as exc:
        _emit({"error": "usage", "message": str(exc)})
        code = 2
    sys.exit(code)


if __name__ == "__main__":
    main()

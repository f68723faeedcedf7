"""``permstab`` command line.

Exit status: 0 on success, 1 on a computation error (or a failed
verification), 2 on a usage error.  Rationals print as ``p/q``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import checks
from .lamplighter import format_lamplighter
from .lef import lef_certificate
from .neumann import NeumannGroup
from .perm import CapExceeded, format_perm
from .seqgen import GrowthTarget, SequenceSpec, generate, verify_sequence
from .stability import (DEFAULT_CONFIDENCE, PermTuple, global_defect, local_defect,
                        pad_block_solution, sample_and_substitute)
from .words import FreeWord, RelationSet, ball

DEFAULT_SEED = 0
DEFAULT_CAP = 200_000



def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _word(text: str) -> FreeWord:
    try:
        return FreeWord.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _emit(args, data: dict, human: str) -> None:
    if args.json:
        print(json.dumps(data))
    else:
        print(human)


def _group(args) -> NeumannGroup:
    return NeumannGroup(SequenceSpec.load(args.spec))


def _growth(F: str, C: int) -> GrowthTarget:
    path = Path(F)
    if path.is_file():
        table = json.loads(path.read_text())
        F = [[int(k), int(v)] for k, v in table.items()] if isinstance(table, dict) else table
    return GrowthTarget(F, C)


# -- subcommands ----------------------------------------------------------------

def cmd_gen_seq(args) -> int:
    spec = generate(_growth(args.F, args.C), args.N)
    if args.out:
        spec.save(args.out)
    data = spec.to_json()
    _emit(args, data, json.dumps(data, indent=2) if not args.out else f"wrote {args.out}")
    return 0


def cmd_verify_seq(args) -> int:
    spec = SequenceSpec.load(args.spec_file)
    report = verify_sequence(spec, args.N)
    for line in report.lines():
        print(line)
    return 0 if report.theorem_grade else 1


def cmd_eval(args) -> int:
    g = _group(args).element(args.word)
    coords = {n: format_perm(g.coordinate(n)) for n in range(1, args.upto + 1)}
    data = {"word": str(args.word), "coordinates": coords, "tau": format_lamplighter(g.tau())}
    human = "\n".join([f"pi_{n}: {p}" for n, p in coords.items()] + [f"tau: {data['tau']}"])
    _emit(args, data, human)
    return 0


def cmd_wp(args) -> int:
    g = _group(args).element(args.word)
    n = g.witness()
    data = {"word": str(args.word), "trivial": n is None, "witness": n,
            "threshold": g.threshold()}
    if n is None:
        human = "trivial"
    elif n == g.threshold():
        human = f"nontrivial (tau = {format_lamplighter(g.tau())})"
    else:
        human = f"nontrivial at coordinate {n}: {format_perm(g.coordinate(n))}"
    _emit(args, data, human)
    return 0


def cmd_tau(args) -> int:
    from .lamplighter import evaluate_word_W
    u = evaluate_word_W(args.word)
    _emit(args, {"word": str(args.word), "tau": format_lamplighter(u), "identity": u.is_identity()},
          format_lamplighter(u))
    return 0


def cmd_ball(args) -> int:
    words = [str(w) for w in ball(args.l)]
    _emit(args, {"l": args.l, "size": len(words), "words": words}, "\n".join(words))
    return 0


def _load_tuple(path: str) -> PermTuple:
    return PermTuple.parse(Path(path).read_text())


def cmd_sas(args) -> int:
    rho = _load_tuple(args.perms)
    E = RelationSet.load(args.relations)
    v = sample_and_substitute(rho, E, args.delta, args.confidence, args.seed)
    print(json.dumps(v.to_json()))
    return 0


def cmd_defect(args) -> int:
    rho = _load_tuple(args.perms)
    R = RelationSet.load(args.relations)
    if args.mode == "local":
        value = local_defect(rho, R)
        _emit(args, {"mode": "local", "value": _q(value)}, _q(value))
    else:
        res = global_defect(rho, R, args.cap_degree)
        data = {"mode": "global", "value": _q(res.value),
                "minimizer": [format_perm(res.minimizer.sigma_x), format_perm(res.minimizer.sigma_y)]}
        _emit(args, data, f"{_q(res.value)}\n" + res.minimizer.dumps().rstrip())
    return 0


def cmd_pad(args) -> int:
    psi = _load_tuple(args.perms)
    res = pad_block_solution(psi, args.word, args.delta)
    if args.out:
        Path(args.out).write_text(res.tuple.dumps())
    data = {"omega": res.omega, "q": res.q, "r": res.r, "ratio": _q(res.ratio),
            "violation": _q(res.violation)}
    _emit(args, data, f"|Omega| = {res.omega}, q = {res.q}, r = {res.r}, d(Psi(w1), id) = {_q(res.violation)}")
    return 0


def cmd_folner(args) -> int:
    value = _group(args).folner_ratio(args.n, args.m, args.generator, args.cap)
    _emit(args, {"n": args.n, "m": args.m, "generator": args.generator, "ratio": _q(value)}, _q(value))
    return 0


def cmd_quotient(args) -> int:
    x = _group(args).finite_quotient(args.word, args.n, args.m)
    coords = [format_perm(c) for c in x.coords]
    data = {"coords": coords, "tail": {"config": list(x.tail.config), "shift": x.tail.shift}}
    human = "\n".join([f"pi_{k}: {c}" for k, c in enumerate(coords, 1)] +
                      [f"W_{args.m}: shift {x.tail.shift}, lamps {list(x.tail.config)}"])
    _emit(args, data, human)
    return 0


def cmd_density(args) -> int:
    value = _group(args).conjugation_density(args.word, args.n, args.m, args.cap)
    _emit(args, {"n": args.n, "m": args.m, "word": str(args.word), "density": _q(value)}, _q(value))
    return 0


def cmd_cosofic(args) -> int:
    res = _group(args).cosofic_approximant(args.H, args.n, args.m, tests=args.g, cap=args.cap)
    data = {"n": args.n, "m": args.m, "image_size": len(res.image),
            "densities": {k: _q(v) for k, v in res.densities.items()}}
    human = "\n".join([f"|phi_n(H cap G_n L_m)| = {len(res.image)}"] +
                      [f"p_n({k}) = {_q(v)}" for k, v in res.densities.items()])
    _emit(args, data, human)
    return 0


def cmd_lef(args) -> int:
    cert = lef_certificate(_group(args), args.l)
    data = cert.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(data, indent=2) + "\n")
    human = (f"l = {cert.l}: {len(cert.projection.words)} ball words, "
             f"{cert.projection.distinct_elements} elements, injective\n"
             f"target degrees {cert.target_degrees}\n"
             f"log10 |target| = {cert.log10_target_order:.2f}, "
             f"log10 ((15l)!)^(4l+1) = {cert.log10_factorial_bound:.2f}")
    _emit(args, data, human)
    return 0


def cmd_verify_suite(args) -> int:
    results = checks.run_suite(_group(args))
    if args.json:
        for r in results:
            print(json.dumps(r.to_json()))
    else:
        width = max(len(r.key) for r in results)
        for r in results:
            print(f"{r.status.upper():4}  {r.key:{width}}  {r.title}  [{r.detail}]")
    return 0 if all(r.ok for r in results) else 1


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed (default 0)")

    spec = argparse.ArgumentParser(add_help=False)
    spec.add_argument("--spec", required=True, help="sequence spec JSON file")

    cap = argparse.ArgumentParser(add_help=False)
    cap.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")

    nm = argparse.ArgumentParser(add_help=False)
    nm.add_argument("--n", type=int, required=True)
    nm.add_argument("--m", type=int, help="m_n (default: n)")

    parser = argparse.ArgumentParser(prog="permstab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-seq", parents=[common], help="generate a (d, r) sequence")
    p.add_argument("--F", default="one", help="growth name (one, linear, poly:k, exp, tower) or JSON table file")
    p.add_argument("--C", type=int, default=79)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_seq)

    p = sub.add_parser("verify-seq", parents=[common], help="check a sequence spec, JSON lines")
    p.add_argument("spec_file")
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_verify_seq)

    p = sub.add_parser("eval", parents=[common, spec], help="coordinates and tau of a word")
    p.add_argument("--word", type=_word, required=True)
    p.add_argument("--upto", type=int, default=3, help="last coordinate to print")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("wp", parents=[common, spec], help="word problem in G(d, r)")
    p.add_argument("--word", type=_word, required=True)
    p.set_defaults(func=cmd_wp)

    p = sub.add_parser("tau", parents=[common], help="image of a word in C3 wr Z")
    p.add_argument("--word", type=_word, required=True)
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("ball", parents=[common], help="reduced words of length <= l")
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("sas", parents=[common], help="Sample-and-Substitute tester")
    p.add_argument("--perms", required=True, help="file with two permutation lines (x, then y)")
    p.add_argument("--relations", required=True)
    p.add_argument("--delta", type=_fraction, required=True)
    p.add_argument("--confidence", type=_fraction, default=DEFAULT_CONFIDENCE)
    p.set_defaults(func=cmd_sas)

    p = sub.add_parser("defect", parents=[common], help="local or global defect")
    p.add_argument("--mode", choices=["local", "global"], required=True)
    p.add_argument("--perms", required=True)
    p.add_argument("--relations", required=True)
    p.add_argument("--cap-degree", type=int, default=6)
    p.set_defaults(func=cmd_defect)

    p = sub.add_parser("pad", parents=[common], help="pad a solution with fixed points")
    p.add_argument("--perms", required=True)
    p.add_argument("--word", type=_word, required=True, help="w1, moved at every point by psi")
    p.add_argument("--delta", type=_fraction, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pad)

    p = sub.add_parser("folner", parents=[common, spec, cap, nm], help="Folner boundary ratio")
    p.add_argument("--generator", choices=["a", "A", "b", "B"], required=True)
    p.set_defaults(func=cmd_folner)

    p = sub.add_parser("quotient", parents=[common, spec, nm], help="image under phi_n")
    p.add_argument("--word", type=_word, required=True)
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("density", parents=[common, spec, cap, nm], help="|E_n(g)| / |F_n|")
    p.add_argument("--word", type=_word, required=True)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("cosofic", parents=[common, spec, cap, nm], help="K_n and densities p_n(g)")
    p.add_argument("--H", type=_word, nargs="+", required=True, help="generators of H")
    p.add_argument("--g", type=_word, nargs="+", required=True, help="test elements")
    p.set_defaults(func=cmd_cosofic)

    p = sub.add_parser("lef", parents=[common, spec], help="local embedding certificate")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lef)

    p = sub.add_parser("verify-paper", parents=[common, spec], help="run the verification suite")
    p.set_defaults(func=cmd_verify_suite)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "m", None) is None and hasattr(args, "n"):
        args.m = args.n
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""``centerlab`` command line: polar, centered, aluthge, gen, verify.

Exit codes: 0 success, 1 input or usage error, 2 polar validation failure,
3 theorem-equivalence violation (oracles disagree), 4 indeterminate
verdicts without ``--allow-indeterminate``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .aluthge import DEFAULT_GRID, AluthgeParams, iterated_aluthge
from .centered import centered_report, parametrized_per_k
from .generators import ConstructionError, OperatorSpec
from .kernel import (DEFAULT_CONFIG, KernelError, ToleranceConfig, Value,
                     all_of, matrix_from_json, matrix_to_json)
from .polar import polar_decompose
from .suites import SUITES, SuiteOptions, run_suite

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVALID_POLAR = 2
EXIT_VIOLATION = 3
EXIT_INDETERMINATE = 4


class InputError(Exception):
    pass


def _read_json(source: str):
    """Parse a JSON file (``-`` for stdin); errors name line and column."""
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
    except OSError as exc:
        raise InputError(f"{source}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _read_matrix(source: str):
    obj = _read_json(source)
    try:
        return matrix_from_json(obj)
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from exc


def _emit(obj, out: str | None = None):
    text = json.dumps(obj, indent=1)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _config(args) -> ToleranceConfig:
    return ToleranceConfig(rank_rtol=args.rank_rtol, zero_tol=args.zero_tol,
                           sep_tol=args.sep_tol, cond_limit=args.cond_limit)


def _parse_grid(text: str) -> list[tuple[float, float]]:
    """``"0.3,0.5,1,2"`` (squared) or ``"0.5:0.5;1:2"`` (explicit pairs)."""
    try:
        if ":" in text:
            pts = [tuple(float(x) for x in item.split(":"))
                   for item in text.split(";") if item.strip()]
            if any(len(p) != 2 for p in pts):
                raise ValueError
        else:
            vals = [float(x) for x in text.split(",") if x.strip()]
            pts = [(a, b) for a in vals for b in vals]
        for p in pts:
            AluthgeParams(*p)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid grid {text!r}: use '0.3,0.5,1,2' or '0.5:0.5;1:2' "
            f"with positive values")
    if not pts:
        raise argparse.ArgumentTypeError("grid is empty")
    return pts


# subcommands -----------------------------------------------------------------

def cmd_polar(args) -> int:
    t = _read_matrix(args.input)
    if t.shape[0] != t.shape[1]:
        raise InputError(f"{args.input}: expected a square matrix, got {t.shape}")
    config = _config(args)
    pf = polar_decompose(t, config)
    out = pf.to_json()
    out["valid"] = pf.is_valid(config)
    out["residual_isometry"] = pf.residual_isometry
    _emit(out, args.out)
    return EXIT_OK if out["valid"] else EXIT_INVALID_POLAR


def cmd_centered(args) -> int:
    t = _read_matrix(args.input)
    if t.shape[0] != t.shape[1]:
        raise InputError(f"{args.input}: expected a square matrix, got {t.shape}")
    if args.n < 1:
        raise InputError("--n must be at least 1")
    if (args.alpha is None) != (args.beta is None):
        raise InputError("--alpha and --beta go together")
    config = _config(args)
    pf = polar_decompose(t, config)
    rep = centered_report(t, args.n, config, pf)
    out = rep.to_json()
    agree = rep.agreement
    if args.alpha is not None:
        AluthgeParams(args.alpha, args.beta)
        # k-centered iff the two-parameter commutators vanish for 1 <= j <= k-1
        per_j = parametrized_per_k(t, args.n - 1, args.alpha, args.beta, config, pf)
        cum = [all_of(per_j[:k - 1]) for k in range(1, args.n + 1)]
        out["parametrized"] = {
            "alpha": args.alpha, "beta": args.beta,
            "per_k": [v.to_dict() for v in cum],
            "verdict": cum[-1].value.value,
        }
        for a, b in zip(rep.cumulative("definitional"), cum):
            if {a.value, b.value} == {Value.HOLDS, Value.FAILS}:
                agree = False
        out["agreement"] = agree
    _emit(out, args.out)
    return EXIT_OK if agree else EXIT_VIOLATION


def cmd_aluthge(args) -> int:
    t = _read_matrix(args.input)
    if t.shape[0] != t.shape[1]:
        raise InputError(f"{args.input}: expected a square matrix, got {t.shape}")
    if args.iters < 0:
        raise InputError("--iters must be nonnegative")
    config = _config(args)
    params = AluthgeParams(args.alpha, args.beta)
    chain = iterated_aluthge(t, params, args.iters, config)
    _emit(chain.to_json(config), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.spec is not None:
        obj = _read_json(args.spec) if not args.spec.lstrip().startswith("{") \
            else _parse_inline(args.spec)
    else:
        if args.family is None:
            raise InputError("gen needs --family or --spec")
        params = _parse_inline(args.params) if args.params else {}
        obj = {"family": args.family, "params": params, "seed": args.seed}
    try:
        spec = OperatorSpec.from_json(obj)
        t = spec.build(_config(args))
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad parameters for family: {exc}") from exc
    _emit(matrix_to_json(t), args.out)
    return EXIT_OK


def _parse_inline(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"<inline>:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def cmd_verify(args) -> int:
    if args.suite not in SUITES + ("all",):
        print(f"unknown suite {args.suite!r}; expected one of "
              f"{', '.join(SUITES + ('all',))}", file=sys.stderr)
        return EXIT_INPUT
    if args.kmax < 2 or args.nmax < 2:
        raise InputError("--kmax and --nmax must be at least 2")
    opts = SuiteOptions(trials=args.trials, dim_max=args.dim_max, seed=args.seed,
                        k_max=args.kmax, n_max=args.nmax,
                        grid=args.grid or list(DEFAULT_GRID), config=_config(args))
    report = run_suite(args.suite, opts)
    if args.out:
        _emit(report.to_json(), args.out)
    print(report.summary())
    return report.exit_code(args.allow_indeterminate)


# parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    tol = argparse.ArgumentParser(add_help=False)
    g = tol.add_argument_group("tolerances")
    g.add_argument("--rank-rtol", type=float, default=DEFAULT_CONFIG.rank_rtol)
    g.add_argument("--zero-tol", type=float, default=DEFAULT_CONFIG.zero_tol)
    g.add_argument("--sep-tol", type=float, default=DEFAULT_CONFIG.sep_tol)
    g.add_argument("--cond-limit", type=float, default=DEFAULT_CONFIG.cond_limit)

    p = argparse.ArgumentParser(prog="centerlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("polar", parents=[tol], help="polar decomposition of a matrix file")
    q.add_argument("input", help="matrix JSON file, or - for stdin")
    q.add_argument("--out")
    q.set_defaults(func=cmd_polar)

    q = sub.add_parser("centered", parents=[tol], help="decide n-centeredness")
    q.add_argument("input")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--alpha", type=float)
    q.add_argument("--beta", type=float)
    q.add_argument("--out")
    q.set_defaults(func=cmd_centered)

    q = sub.add_parser("aluthge", parents=[tol], help="iterated Aluthge transforms")
    q.add_argument("input")
    q.add_argument("--alpha", type=float, default=0.5)
    q.add_argument("--beta", type=float, default=0.5)
    q.add_argument("--iters", type=int, default=1)
    q.add_argument("--out")
    q.set_defaults(func=cmd_aluthge)

    q = sub.add_parser("gen", parents=[tol], help="generate an operator as a matrix file")
    q.add_argument("--family")
    q.add_argument("--params", help='family parameters as JSON, e.g. \'{"d": 4}\'')
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--spec", help="OperatorSpec as inline JSON or a file path")
    q.add_argument("--out")
    q.set_defaults(func=cmd_gen)

    q = sub.add_parser("verify", parents=[tol], help="run theorem suites over the corpus")
    q.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)}, all")
    q.add_argument("--trials", type=int, default=100)
    q.add_argument("--dim-max", type=int, default=32)
    q.add_argument("--seed", type=int, default=7)
    q.add_argument("--kmax", type=int, default=4)
    q.add_argument("--nmax", type=int, default=5,
                   help="largest n for the per-n theorem suites")
    q.add_argument("--grid", type=_parse_grid)
    q.add_argument("--out")
    q.add_argument("--allow-indeterminate", action="store_true")
    q.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KernelError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 2 bad input (including mixed parity), 3 an answer
the tables leave open, 4 a failed check (freeness hypotheses, functor
validation).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from .catalog import catalog
from .cohomology import (
    CohomologyAnswer,
    DependsOnChoice,
    FixedDims,
    NotTabulated,
    NotTabulatedError,
    ParityError,
    cohomology_orbit,
    cohomology_point,
    cohomology_sphere,
    fixed_dims,
    parse_rep,
)
from .freeness import (
    CellComplex,
    FreenessViolation,
    free_decomposition,
    generator_rows,
    generator_table,
    grassmannian_complex,
    projective_space_complex,
)
from .homological import ext1, hom_mackey
from .mackey import MackeyFunctor, validate
from .render import render_functor
from .serialize import answer_to_json, dumps, functor_from_json, functor_to_json, group_from_json, group_to_json

EXIT_OK, EXIT_INPUT, EXIT_OPEN, EXIT_CHECK = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT) -> None:
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# optional on-disk memo for Hom/Ext results


def _cached(key: dict, compute: Callable[[], dict]) -> dict:
    root = os.environ.get("MACKEY_CACHE_DIR")
    if not root:
        return compute()
    digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()
    path = Path(root) / f"{digest}.json"
    if path.exists():
        try:
            return json.loads(path.read_text())
        except (OSError, ValueError):
            pass  # unreadable entry: recompute and overwrite
    value = compute()
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(value, sort_keys=True))
    tmp.replace(path)
    return value


# ---------------------------------------------------------------------------
# input


def _alpha(args: argparse.Namespace) -> tuple[FixedDims, Optional[str]]:
    if (args.dims is None) == (args.rep is None):
        raise CliError("give exactly one of --dims or --rep")
    if args.rep is not None:
        rep = parse_rep(args.rep, args.p, args.q)
        return fixed_dims(rep), str(rep)
    return FixedDims.parse(args.dims), None


def _functor(text: str, p: int, q: Optional[int]) -> MackeyFunctor:
    path = Path(text)
    if text.endswith(".json") or path.is_file():
        try:
            return functor_from_json(json.loads(path.read_text()))
        except FileNotFoundError:
            raise CliError(f"no such file: {text}")
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"{text}: malformed functor file ({exc})")
    return catalog(text, p, q)


# ---------------------------------------------------------------------------
# output


def _answer_text(ans: CohomologyAnswer, dims: FixedDims, rep: Optional[str], what: str) -> str:
    lines = [f"alpha = {rep}" if rep else "", f"fixed dims (|a|, |a^C_p|, |a^C_q|, |a^G|) = {dims}"]
    lines = [l for l in lines if l]
    if isinstance(ans, NotTabulated):
        lines.append(f"{what} is {ans}")
        return "\n".join(lines)
    if isinstance(ans, DependsOnChoice) and ans.d is None:
        lines.append(f"{what} = {ans.family}, depending on a unit d (pass --d)")
        return "\n".join(lines)
    name = str(ans.expression() if isinstance(ans, DependsOnChoice) else ans.expression)
    if name == "A":
        name += " (Burnside)"
    lines.append(f"{what} = {name}")
    lines.append("")
    lines.append(render_functor(ans.functor))
    return "\n".join(lines)


def _emit(args: argparse.Namespace, payload: Any, text: str) -> None:
    sys.stdout.write((dumps(payload) if args.format == "json" else text).rstrip("\n") + "\n")


def _report_answer(args: argparse.Namespace, ans: CohomologyAnswer, dims: FixedDims, rep: Optional[str], what: str) -> int:
    payload = answer_to_json(ans, dims)
    if rep:
        payload["rep"] = rep
    _emit(args, payload, _answer_text(ans, dims, rep, what))
    return EXIT_OPEN if isinstance(ans, NotTabulated) else EXIT_OK


# ---------------------------------------------------------------------------
# commands


def cmd_point(args: argparse.Namespace) -> int:
    dims, rep = _alpha(args)
    ans = cohomology_point(dims, args.d, args.p, args.q)
    return _report_answer(args, ans, dims, rep, "H^alpha(S^0)")


def cmd_orbit(args: argparse.Namespace) -> int:
    dims, rep = _alpha(args)
    ans = cohomology_orbit(dims, args.H, args.d, args.p, args.q)
    return _report_answer(args, ans, dims, rep, f"H^alpha(G/{args.H}_+)")


def cmd_sphere(args: argparse.Namespace) -> int:
    dims, rep = _alpha(args)
    ans = cohomology_sphere(dims, args.j, args.d, args.p, args.q)
    return _report_answer(args, ans, dims, rep, f"H^alpha(S(xi^{args.j})_+)")


def _hom_payload(m: MackeyFunctor, n: MackeyFunctor) -> dict:
    group, gens = hom_mackey(m, n)
    return {
        "group": group_to_json(group),
        "generators": [{str(h): [list(r) for r in f.maps[h].matrix.to_rows()] for h in m.lattice.levels} for f in gens],
    }


def _key(args: argparse.Namespace, m: MackeyFunctor, n: MackeyFunctor) -> dict:
    return {"cmd": args.command, "M": functor_to_json(m), "N": functor_to_json(n)}


def cmd_hom(args: argparse.Namespace) -> int:
    m, n = _functor(args.M, args.p, args.q), _functor(args.N, args.p, args.q)
    payload = _cached(_key(args, m, n), lambda: _hom_payload(m, n))
    group = group_from_json(payload["group"])
    lines = [f"Hom({args.M}, {args.N}) = {group}"]
    top = m.lattice.order
    for i, gen in enumerate(payload["generators"], start=1):
        lines.append(f"generator {i}:")
        for h in m.lattice.levels:
            rows = gen[str(h)]
            body = "[" + "; ".join(" ".join(map(str, r)) for r in rows) + "]" if rows and rows[0] else "0"
            label = "G/G" if h == top else "G/e" if h == 1 else f"G/C_{h}"
            lines.append(f"  {label}: {body}")
    _emit(args, {"M": args.M, "N": args.N, **payload}, "\n".join(lines))
    return EXIT_OK


def cmd_ext(args: argparse.Namespace) -> int:
    m, n = _functor(args.M, args.p, args.q), _functor(args.N, args.p, args.q)
    payload = _cached(_key(args, m, n), lambda: {"group": group_to_json(ext1(m, n))})
    group = group_from_json(payload["group"])
    _emit(args, {"M": args.M, "N": args.N, **payload}, f"Ext^1({args.M}, {args.N}) = {group}")
    return EXIT_OK


def cmd_free(args: argparse.Namespace) -> int:
    chosen = [x is not None for x in (args.complex, args.cpn, args.grassmann)]
    if sum(chosen) != 1:
        raise CliError("give exactly one of a complex file, --cpn or --grassmann")
    if args.complex is not None:
        try:
            X = CellComplex.loads(Path(args.complex).read_text())
        except FileNotFoundError:
            raise CliError(f"no such file: {args.complex}")
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"{args.complex}: malformed complex file ({exc})")
    elif args.cpn is not None:
        X = projective_space_complex(args.cpn, args.p, args.q)
    else:
        n, k = args.grassmann
        X = grassmannian_complex(n, k, args.p, args.q)
    try:
        gens = free_decomposition(X, strong=args.strong)
    except FreenessViolation as exc:
        lines = exc.report.lines(X)
        _emit(args, {"free": False, "violations": lines}, "freeness hypotheses fail:\n" + "\n".join(lines))
        return EXIT_CHECK
    rows = generator_rows(gens, X.p, X.q)
    payload = {
        "free": True,
        "generators": [{"cell": c, "K": k, "dims": list(d)} for c, k, d in rows],
    }
    _emit(args, payload, f"{len(gens)} generators\n" + generator_table(gens, X.p, X.q))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    m = _functor(args.functor, args.p, args.q)
    problems = validate(m)
    text = "valid Mackey functor" if not problems else "invalid:\n" + "\n".join(f"  {v}" for v in problems)
    _emit(args, {"valid": not problems, "violations": problems}, text)
    return EXIT_OK if not problems else EXIT_CHECK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mackey", description="RO(C_pq)-graded cohomology of a point and freeness checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, q_default: Optional[int] = 5) -> None:
        sp.add_argument("--p", type=int, default=3)
        sp.add_argument("--q", type=int, default=q_default)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    def alpha(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--dims", help="fixed dims e,P,Q,G (comma separated)")
        sp.add_argument("--rep", help='virtual representation, e.g. "xi^3 + xi^5 - 4"')
        sp.add_argument("--d", type=int, default=None, help="unit d for the dependent families")

    sp = sub.add_parser("point", help="H^alpha(S^0)")
    common(sp)
    alpha(sp)
    sp.set_defaults(func=cmd_point)

    sp = sub.add_parser("orbit", help="H^alpha(G/H_+) for H = e, C_p, C_q")
    common(sp)
    alpha(sp)
    sp.add_argument("--H", required=True, choices=("e", "C_p", "C_q"))
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("sphere", help="H^alpha(S(xi^j)_+)")
    common(sp)
    alpha(sp)
    sp.add_argument("--j", type=int, required=True)
    sp.set_defaults(func=cmd_sphere)

    for name, func in (("hom", cmd_hom), ("ext", cmd_ext)):
        sp = sub.add_parser(name, help=f"{name.capitalize()} between catalog functors or functor files")
        common(sp)
        sp.add_argument("M")
        sp.add_argument("N")
        sp.set_defaults(func=func)

    sp = sub.add_parser("free", help="check the freeness hypotheses and list generators")
    common(sp)
    sp.add_argument("complex", nargs="?", help="cell complex JSON file")
    sp.add_argument("--cpn", type=int, help="CP(U(n)) with cells W_1..W_n")
    sp.add_argument("--grassmann", type=int, nargs=2, metavar=("N", "K"), help="Schubert cells of G(U(N), K)")
    sp.add_argument("--strong", action="store_true", help="use the strengthened << order")
    sp.set_defaults(func=cmd_free)

    sp = sub.add_parser("validate", help="check the Mackey functor axioms")
    common(sp)
    sp.add_argument("functor", help="catalog name or functor JSON file")
    sp.set_defaults(func=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except NotTabulatedError as exc:
        sys.stderr.write(f"not tabulated: {exc}\n")
        return EXIT_OPEN
    except ParityError as exc:
        sys.stderr.write(f"parity error: {exc}\n")
        return EXIT_INPUT
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()

"""Command line entry point.

Subcommands cover every part of the library: two- and three-point transfer
operations and their series, the transfer consistency report, stratum
enumeration and label/weight conversion, the filtration optimizer, splitting
type enumeration, and modular graph moves.  Output is deterministic
(byte-identical for identical inputs): rationals print as "num/den", integers
beyond 53 bits as strings, and every list is canonically ordered.

Exit codes: 0 ok, 1 usage error, 2 domain error.  Known discrepancy notes
(sign resolution, normalization monomials, the cut convention) travel on the
diagnostics channel: stderr lines prefixed "note:" or the "diagnostics" field
of --json output.  THETA_STRATA_SEED fixes the seed used by seeded numeric
subroutines.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from . import chains as chains_mod
from . import graphs as graphs_mod
from . import hn as hn_mod
from . import strata as strata_mod
from . import transfer as transfer_mod
from .laurent import format_series

_SAFE_INT = 2**53


@dataclass(frozen=True)
class CommandResult:
    status: str  # "ok" | "error"
    payload: object = None
    text: str = ""
    diagnostics: tuple[str, ...] = ()
    as_json: bool = False

    def __post_init__(self):
        if self.status == "error" and not self.diagnostics:
            raise ValueError("error results must carry at least one diagnostic")


def _num(x):
    """JSON-safe number: Fractions as 'num/den', big integers as strings."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return x if abs(x) <= _SAFE_INT else str(x)
    return x


def _frac_from_str(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse rational {text!r}") from exc


# -- handlers -----------------------------------------------------------------


def _cmd_transfer(args) -> CommandResult:
    p = transfer_mod.TransferParams(args.a, args.d, args.n)
    w = transfer_mod.transfer_two_point(p)
    if w is None:
        payload = {"present": False, "m": _num(p.m)}
        text = "0"
    else:
        payload = {
            "present": True,
            "m": _num(p.m),
            "q_weight": _num(w.q_weight),
            "u_weight": _num(w.u_weight),
        }
        text = f"⟨{w.q_weight},{w.u_weight}⟩"
    return CommandResult("ok", payload, text, as_json=args.json)


def _cmd_series(args) -> CommandResult:
    diagnostics = []
    if args.closed:
        s = transfer_mod.gen_series_closed(args.a, args.n, args.trunc)
        diagnostics.append(
            "closed form differs from the degree-indexed sum by the fixed "
            f"monomial u^-{args.a}"
        )
    else:
        s = transfer_mod.gen_series_sum_q(args.a, args.n, args.trunc)
    if args.q1:
        s = s.subs_q_one()
    text = format_series(s)
    payload = {"series": text, "max_z": _num(s.max_z), "trunc_order": _num(s.trunc_order)}
    return CommandResult("ok", payload, text, tuple(diagnostics), as_json=args.json)


def _cmd_three_point(args) -> CommandResult:
    s = transfer_mod.transfer_three_point(args.a, args.m, args.n, args.trunc)
    text = format_series(s)
    payload = {"series": text, "max_z": _num(s.max_z), "trunc_order": _num(s.trunc_order)}
    return CommandResult("ok", payload, text, as_json=args.json)


def _fmt_biweight(w) -> str:
    return "absent" if w is None else f"⟨{w.q_weight},{w.u_weight}⟩"


def _cmd_consistency_report(args) -> CommandResult:
    report = transfer_mod.consistency_report(
        a_values=(args.a,),
        d_range=(args.d_min, args.d_max),
        n_range=(args.n_min, args.n_max),
    )
    lines = [f"{'a':>3} {'d':>4} {'n':>5} {'m':>5}  {'closed':>14} {'oracle':>14}  match"]
    for row in report.rows:
        lines.append(
            f"{row.a:>3} {row.d:>4} {row.n:>5} {row.m:>5}  "
            f"{_fmt_biweight(row.closed_form):>14} {_fmt_biweight(row.oracle_resolved):>14}  "
            f"{'yes' if row.match_resolved else 'NO'}"
        )
    norm = report.normalization[args.a]
    if norm is None:
        lines.append("normalization monomial: none found")
        norm_payload = None
    else:
        mono = "".join(f"*{name}^{e}" for name, e in norm.mono.exps)
        lines.append(f"normalization monomial (closed/sum): z^{norm.z_exp}{mono}")
        norm_payload = {
            "z_exp": _num(norm.z_exp),
            "mono": {name: _num(e) for name, e in norm.mono.exps},
        }
    payload = {
        "rows": [
            {
                "a": row.a,
                "d": row.d,
                "n": row.n,
                "m": _num(row.m),
                "closed": None
                if row.closed_form is None
                else [_num(row.closed_form.q_weight), _num(row.closed_form.u_weight)],
                "oracle": None
                if row.oracle_resolved is None
                else [
                    _num(row.oracle_resolved.q_weight),
                    _num(row.oracle_resolved.u_weight),
                ],
                "match": row.match_resolved,
            }
            for row in report.rows
        ],
        "normalization": norm_payload,
    }
    return CommandResult(
        "ok", payload, "\n".join(lines), report.diagnostics, as_json=args.json
    )


def _cmd_strata_enumerate(args) -> CommandResult:
    params = strata_mod.StrataParams(args.N, args.g, args.n, args.p, args.d)
    radius, vectors = strata_mod.admissible_strata(params, args.a, args.b, args.kappa)
    lines = [
        f"certificate radius: {radius}",
        f"admissible vectors: {len(vectors)}",
    ]
    payload_vectors = []
    for wv in vectors:
        ws = [f"{x.numerator}/{x.denominator}" for x in wv.w]
        lines.append(f"w=[{', '.join(ws)}] j'={wv.j_prime}")
        payload_vectors.append({"w": ws, "j_prime": wv.j_prime})
    payload = {
        "radius": _num(radius),
        "M": _num(params.M),
        "rank": _num(params.nh),
        "vectors": payload_vectors,
    }
    return CommandResult(
        "ok", payload, "\n".join(lines), (strata_mod.LK_BOUND_NOTE,), as_json=args.json
    )


def _cmd_strata_weights(args) -> CommandResult:
    try:
        data = json.loads(args.label)
    except json.JSONDecodeError as exc:
        raise DomainError(f"label is not valid JSON: {exc}") from exc
    try:
        label = strata_mod.StratumLabel(
            tuple(int(x) for x in data["degrees"]),
            tuple(int(x) for x in data["ranks"]),
            int(data["j"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed label JSON: {exc}") from exc
    params = strata_mod.StrataParams(args.N, args.g, args.n, args.p, sum(label.degrees))
    wv = strata_mod.label_to_weights(label, params)
    ws = [f"{x.numerator}/{x.denominator}" for x in wv.w]
    payload = {"w": ws, "j_prime": wv.j_prime}
    text = f"w=[{', '.join(ws)}] j'={wv.j_prime}"
    return CommandResult("ok", payload, text, as_json=args.json)


def _parse_constituents(spec: str) -> hn_mod.ToyObject:
    pieces = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            r, d = chunk.split(":")
            pieces.append(hn_mod.Piece(int(r), int(d)))
        except ValueError as exc:
            raise DomainError(f"cannot parse constituent {chunk!r}; want 'rank:degree'") from exc
    if not pieces:
        raise DomainError("no constituents given")
    return hn_mod.ToyObject(tuple(pieces))


def _cmd_hn(args) -> CommandResult:
    obj = _parse_constituents(args.constituents)
    alpha = _frac_from_str(args.alpha)
    total = obj.total()
    groups = hn_mod.slope_groups(obj)
    lines = [f"total: rank {total.rank}, degree {total.degree}, slope {total.slope}"]
    payload: dict = {
        "total": {"rank": _num(total.rank), "degree": _num(total.degree)},
        "alpha": _num(alpha),
    }
    if len(groups) == 1 and alpha == 0:
        lines.append("semistable: no destabilizing filtration")
        payload["semistable"] = True
        return CommandResult("ok", payload, "\n".join(lines), as_json=args.json)
    filtration = hn_mod.optimal_weights(
        [(slope, rank) for slope, rank, _ in groups], total.slope, None, alpha
    )
    numerator, radicand = hn_mod.nu_parts(filtration, total, alpha)
    nu_sq = numerator * numerator / radicand
    nu_val = hn_mod.nu(filtration, total, alpha)
    payload["jumps"] = [
        {"weight": _num(w), "rank": _num(p.rank), "degree": _num(p.degree)}
        for w, p in filtration.jumps
    ]
    payload["nu_squared"] = _num(nu_sq)
    payload["nu_sign"] = 1 if numerator > 0 else (-1 if numerator < 0 else 0)
    payload["nu"] = nu_val
    for w, p in filtration.jumps:
        lines.append(f"  weight {w}: rank {p.rank}, degree {p.degree}")
    lines.append(f"nu^2 = {nu_sq} (sign {payload['nu_sign']}), nu = {nu_val!r}")
    if len(groups) >= 2:
        gap_nu, gap = hn_mod.mu_max_gap_bound(obj)
        payload["gap_certificate"] = {"nu": gap_nu, "gap": gap}
        lines.append(f"max-slope step: nu = {gap_nu!r} >= slope gap = {gap!r}")
    return CommandResult("ok", payload, "\n".join(lines), as_json=args.json)


def _cmd_chains(args) -> CommandResult:
    types = chains_mod.enum_admissible(args.rank, args.length)
    count = len(types)
    oracle = chains_mod.inclusion_exclusion_count(args.rank, args.length)
    distinct = chains_mod.distinct_summand_types(args.rank, args.length)
    if args.count_only:
        text = str(count)
        payload = {"count": _num(count)}
    else:
        lines = [
            f"admissible row assignments: {count} (inclusion-exclusion: {oracle})",
            f"distinct summand multisets: {len(distinct)}",
        ]
        for t in types:
            lines.append(json.dumps([list(row) for row in t.rows]))
        text = "\n".join(lines)
        payload = {
            "count": _num(count),
            "inclusion_exclusion": _num(oracle),
            "distinct_multisets": _num(len(distinct)),
            "types": [[list(row) for row in t.rows] for t in types],
        }
    return CommandResult("ok", payload, text, as_json=args.json)


def _load_graph(path: str) -> graphs_mod.DirectedModularGraph:
    try:
        raw = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    except OSError as exc:
        raise DomainError(f"cannot read graph file: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DomainError(f"graph file is not valid JSON: {exc}") from exc
    g = graphs_mod.DirectedModularGraph.from_json(data)
    problems = graphs_mod.validate(g)
    if problems:
        raise DomainError("invalid graph: " + "; ".join(problems))
    return g


def _cmd_graph(args) -> CommandResult:
    g = _load_graph(args.infile)
    diagnostics: tuple[str, ...] = ()
    if args.graph_op == "genus":
        genus = graphs_mod.arithmetic_genus(g)
        return CommandResult("ok", {"genus": _num(genus)}, str(genus), as_json=args.json)
    if args.graph_op == "cut":
        out = graphs_mod.cut_edge(g, args.edge)
        diagnostics = (graphs_mod.CUT_CONVENTION_NOTE,)
    elif args.graph_op == "contract":
        out = graphs_mod.contract_edge(g, args.edge)
    elif args.graph_op == "glue":
        out = graphs_mod.glue(g)
        diagnostics = (graphs_mod.CUT_CONVENTION_NOTE,)
    elif args.graph_op == "flip-neg":
        out = graphs_mod.flip_neg_to_pos(g)
    elif args.graph_op == "flip-pos":
        out = graphs_mod.flip_pos_to_neg(g)
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown graph operation {args.graph_op!r}")
    payload = out.to_json()
    text = json.dumps(payload, sort_keys=True, indent=2)
    return CommandResult("ok", payload, text, diagnostics, as_json=args.json)


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # Route argparse failures through a catchable exception carrying the
        # usage-error exit code contract (1, not argparse's default 2).
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="thetacalc",
        description="stability-weight calculus, transfer series, modular graphs, chain types",
        epilog="THETA_STRATA_SEED fixes the seed of seeded numeric subroutines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("transfer", help="two-point transfer weight")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    add_json(p)
    p.set_defaults(func=_cmd_transfer)

    p = sub.add_parser("series", help="two-point generating series")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trunc", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--closed", action="store_true", help="closed-form presentation")
    mode.add_argument("--sum", action="store_true", help="degree-indexed sum (default)")
    p.add_argument("--q1", action="store_true", help="set q = 1")
    add_json(p)
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser("three-point", help="three-point series")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trunc", type=int, required=True)
    add_json(p)
    p.set_defaults(func=_cmd_three_point)

    p = sub.add_parser(
        "consistency-report", help="closed form vs. graded-invariants oracle"
    )
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--n-min", dest="n_min", type=int, required=True)
    p.add_argument("--n-max", dest="n_max", type=int, required=True)
    p.add_argument("--d-min", dest="d_min", type=int, required=True)
    p.add_argument("--d-max", dest="d_max", type=int, required=True)
    add_json(p)
    p.set_defaults(func=_cmd_consistency_report)

    p = sub.add_parser("strata", help="stratum index calculus")
    strata_sub = p.add_subparsers(dest="strata_op", required=True)

    pe = strata_sub.add_parser("enumerate", help="certified admissible enumeration")
    for flag in ("N", "g", "n", "p", "d", "a", "b", "kappa"):
        pe.add_argument(f"--{flag}", type=int, required=True)
    add_json(pe)
    pe.set_defaults(func=_cmd_strata_enumerate)

    pw = strata_sub.add_parser("weights", help="label -> weight vector")
    pw.add_argument("--label", type=str, required=True, help='{"degrees":[..],"ranks":[..],"j":..}')
    for flag in ("N", "g", "n", "p"):
        pw.add_argument(f"--{flag}", type=int, required=True)
    add_json(pw)
    pw.set_defaults(func=_cmd_strata_weights)

    p = sub.add_parser("hn", help="canonical filtration and invariant")
    p.add_argument("--constituents", type=str, required=True, help='"r1:d1,r2:d2,..."')
    p.add_argument("--alpha", type=str, default="0", help="nonnegative rational")
    add_json(p)
    p.set_defaults(func=_cmd_hn)

    p = sub.add_parser("chains", help="splitting types on rational chains")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--count-only", dest="count_only", action="store_true")
    add_json(p)
    p.set_defaults(func=_cmd_chains)

    p = sub.add_parser("graph", help="directed modular graph moves")
    graph_sub = p.add_subparsers(dest="graph_op", required=True)
    for op in ("cut", "contract", "glue", "flip-neg", "flip-pos", "genus"):
        pg = graph_sub.add_parser(op)
        pg.add_argument("--in", dest="infile", type=str, required=True, help="path or - for stdin")
        if op in ("cut", "contract"):
            pg.add_argument("--edge", type=str, required=True)
        add_json(pg)
        pg.set_defaults(func=_cmd_graph)

    return parser


def run(argv: list[str]) -> tuple[CommandResult, int]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        return (
            CommandResult("error", None, "", (f"usage error: {exc}",), as_json=False),
            1,
        )
    try:
        result = args.func(args)
    except DomainError as exc:
        return (
            CommandResult(
                "error", None, "", (str(exc),), as_json=getattr(args, "json", False)
            ),
            2,
        )
    return result, 0


def main(argv: list[str] | None = None) -> None:
    try:
        result, code = run(sys.argv[1:] if argv is None else argv)
    except SystemExit:
        raise
    if result.as_json:
        envelope = {
            "status": result.status,
            "payload": result.payload,
            "diagnostics": list(result.diagnostics),
        }
        print(json.dumps(envelope, sort_keys=True))
    elif result.status == "ok":
        if result.text:
            print(result.text)
        for note in result.diagnostics:
            print(f"note: {note}", file=sys.stderr)
    else:
        print(f"error: {result.diagnostics[0]}", file=sys.stderr)
    sys.exit(code)


if __name__ == "__main__":
    main()

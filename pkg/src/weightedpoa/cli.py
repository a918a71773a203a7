"""Command-line front end.

Exit codes: 0 on success, 1 on domain errors (bad regime, unsupported class,
failed verification), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .catalog import CATALOG, RegimeError, build_instance, sample_weights, verify_entry
from .equilibria import NoEquilibriumError, UnboundedPoaError, instance_poa
from .exactmath import ExactMathError, RationalInterval, format_rational, parse_rational
from .fileformat import dumps_game, load_game
from .formulas import poa_closed_form, regime, supremum_info, sym_uni_b_candidates
from .game import CostModel, GameError
from .worstcase import (
    CertificateError,
    GameClass,
    UnsupportedClassError,
    WitnessError,
    WorstCaseSpec,
    all_label_subsets,
    dual_certificate,
    format_table,
    labels_for,
    parse_labelset,
    solve_worst_case,
    tabulate_solutions,
)

logger = logging.getLogger(__name__)

CLASS_CHOICES = ("sim", "sym-sim", "seq", "sym-seq")
COST_CHOICES = ("uni", "prop")
DOMAIN_ERRORS = (
    ValueError,
    GameError,
    RegimeError,
    UnsupportedClassError,
    ExactMathError,
    UnboundedPoaError,
    NoEquilibriumError,
    WitnessError,
    CertificateError,
    KeyError,
    OSError,
)


class DomainFailure(Exception):
    """A check run by the CLI did not pass."""


def format_decimal(value: Fraction, digits: int) -> str:
    """Fixed-point rendering rounded half-to-even at ``digits`` decimals."""
    scaled = round(value * 10**digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def ratio_grid(r_min: Fraction, r_max: Fraction, n: int, max_denominator: int = 10**4) -> list[Fraction]:
    """About log-spaced ratios, snapped to rationals with bounded denominators.

    Endpoints are kept exactly; ``n`` points are returned, sorted ascending.
    """
    if r_min <= 0 or r_max < r_min:
        raise ValueError(f"need 0 < MIN <= MAX, got {r_min} and {r_max}")
    if n < 2:
        raise ValueError(f"need N >= 2 grid points, got {n}")
    lo, hi = math.log(r_min), math.log(r_max)
    points = [r_min]
    for k in range(1, n - 1):
        x = math.exp(lo + (hi - lo) * k / (n - 1))
        points.append(Fraction(x).limit_denominator(max_denominator))
    points.append(r_max)
    return sorted(points)


@dataclass(frozen=True)
class SweepRow:
    ratio: Fraction
    game_class: GameClass
    cost_model: CostModel
    poa_exact: Fraction
    poa_decimal: str
    regime: str

    def cells(self) -> list[str]:
        return [
            format_rational(self.ratio),
            self.game_class.short,
            "uni" if self.cost_model is CostModel.UNIFORM else "prop",
            format_rational(self.poa_exact),
            self.poa_decimal,
            self.regime,
        ]


SWEEP_HEADER = ["ratio", "class", "cost", "poa_exact", "poa_decimal", "regime"]


def sweep_rows(
    classes: Sequence[str],
    costs: Sequence[str],
    ratios: Iterable[Fraction],
    digits: int = 6,
    source: str = "lp",
) -> list[SweepRow]:
    """One row per (class, cost, ratio); weights are (numerator, denominator)."""
    ratios = sorted(ratios)
    rows = []
    for c in classes:
        gc = GameClass.parse(c)
        for m in costs:
            cm = CostModel.parse(m)
            for r in ratios:
                w1, w2 = Fraction(r.numerator), Fraction(r.denominator)
                if source == "lp":
                    value = solve_worst_case(WorstCaseSpec(gc, cm, w1, w2)).poa
                else:
                    value = poa_closed_form(gc, cm, w1, w2)
                rows.append(SweepRow(r, gc, cm, value, format_decimal(value, digits), regime(gc, cm, w1, w2)))
    return rows


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow(row.cells())
    return buf.getvalue()


# ---------------------------------------------------------------------------
# verify-all


VERIFY_RATIOS = [
    Fraction(n, d)
    for n, d in [(1, 5), (1, 3), (2, 5), (1, 2), (2, 3), (1, 1), (4, 3), (3, 2), (2, 1),
                 (101, 50), (81, 40), (9, 4), (5, 2), (3, 1), (16, 5), (4, 1), (7, 1)]
]


def verify_all(out) -> bool:
    ok = True

    def report(passed: bool, text: str) -> None:
        nonlocal ok
        ok &= passed
        print(f"[{'ok' if passed else 'FAIL'}] {text}", file=out)

    for gc in (GameClass.SIMULTANEOUS, GameClass.SYMMETRIC_SIMULTANEOUS, GameClass.SEQUENTIAL):
        for cm in CostModel:
            mismatches = []
            certs_ok = True
            for r in VERIFY_RATIOS:
                w1, w2 = Fraction(r.numerator), Fraction(r.denominator)
                res = solve_worst_case(WorstCaseSpec(gc, cm, w1, w2))
                if res.poa != poa_closed_form(gc, cm, w1, w2):
                    mismatches.append(format_rational(r))
                try:
                    dual_certificate(res)
                except CertificateError:
                    certs_ok = False
            report(not mismatches, f"LP = closed form, {gc.short}/{cm.value}"
                   + (f" (mismatch at ratios {', '.join(mismatches)})" if mismatches else ""))
            report(certs_ok, f"dual certificates, {gc.short}/{cm.value}")
    for eid, entry in CATALOG.items():
        for cm in sorted(entry.cost_models, key=lambda m: m.value):
            for w1, w2 in sample_weights(eid, cm):
                rep = verify_entry(eid, w1, w2, cm)
                relation = "=" if entry.tight else "<="
                report(rep.ok, f"{eid}/{cm.value} at ({w1}, {w2}): instance {format_rational(rep.poa)} "
                       f"{relation} LP {format_rational(rep.lp_value)}")
    return ok


# ---------------------------------------------------------------------------
# argument handling


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _spec(args, w1=None, w2=None) -> WorstCaseSpec:
    if w1 is None:
        w1, w2 = args.weights
    spec = WorstCaseSpec.with_forcing(args.game_class, args.cost, w1, w2, args.force_zero or [])
    if not args.keep:
        return spec
    both, beta_only = set(), set()
    for item in args.keep:
        kind, _, rest = item.partition(":")
        if not rest:
            both.add(parse_labelset(kind))
        elif kind.strip().lower() in ("beta", "b"):
            beta_only.add(parse_labelset(rest))
        else:
            raise ValueError(f"bad --keep {item!r}; use LABELS or beta:LABELS")
    kept = both | beta_only
    dropped = {s for s in all_label_subsets(labels_for(spec.game_class)) if s not in kept}
    return replace(
        spec,
        forced_zero=spec.forced_zero | dropped,
        forced_alpha_zero=spec.forced_alpha_zero | beta_only,
    )


def _emit(text: str, out_path: str | None, out) -> None:
    if out_path:
        Path(out_path).write_text(text)
    else:
        out.write(text)


def _fmt(value) -> str:
    if isinstance(value, RationalInterval):
        return f"[{format_rational(value.lo)}, {format_rational(value.hi)}] ~ {float(value.midpoint):.6f}"
    if value is None:
        return "none (approached as the ratio tends to infinity)"
    return format_rational(value)


def cmd_solve_lp(args, out) -> int:
    res = solve_worst_case(_spec(args))
    print(format_rational(res.poa), file=out)
    if args.details:
        for rid, (a, b) in res.primal.items():
            print(f"resource {rid}: alpha={format_rational(a)} beta={format_rational(b)}", file=out)
        for name, y in res.nonzero_dual().items():
            print(f"dual {name}: {format_rational(y)}", file=out)
        if not res.forcing_exact:
            print("warning: forcing may have lowered the optimum", file=out)
    if args.witness_out:
        Path(args.witness_out).write_text(dumps_game(res.witness))
    return 0


def cmd_formula(args, out) -> int:
    if args.supremum:
        info = supremum_info(args.game_class, args.cost)
        print(f"supremum: {_fmt(info.value)}", file=out)
        print(f"ratio: {_fmt(info.ratio)}", file=out)
        print(f"attained: {'yes' if info.attained else 'no'}", file=out)
        return 0
    if args.weights is None:
        raise ValueError("formula needs --weights W1 W2 or --supremum")
    w1, w2 = args.weights
    print(format_rational(poa_closed_form(args.game_class, args.cost, w1, w2)), file=out)
    if args.show_regime:
        print(regime(args.game_class, args.cost, w1, w2), file=out)
    return 0


def cmd_instance_poa(args, out) -> int:
    g = load_game(args.file)
    rep = instance_poa(g, args.mode)
    if args.json:
        print(json.dumps(rep.to_dict(g), indent=2), file=out)
    else:
        print(format_rational(rep.poa), file=out)
    return 0


def cmd_catalog(args, out) -> int:
    if args.action == "list":
        for eid, e in CATALOG.items():
            models = ",".join(sorted(m.value for m in e.cost_models))
            kind = "attains" if e.tight else "lower bound"
            print(f"{eid}\t{e.game_class.value}\t{models}\t{e.regime}\t{kind}", file=out)
        return 0
    if not args.id:
        raise ValueError(f"catalog {args.action} needs an entry id")
    models = CATALOG[args.id].cost_models
    cm = args.cost or ("uni" if CostModel.UNIFORM in models else "prop")
    if args.action == "export":
        if args.weights is None:
            raise ValueError("catalog export needs --weights W1 W2")
        inst = build_instance(args.id, *args.weights, cm)
        _emit(dumps_game(inst.game), args.out, out)
        return 0
    weights = [tuple(args.weights)] if args.weights else sample_weights(args.id, cm)
    all_ok = True
    for w1, w2 in weights:
        rep = verify_entry(args.id, w1, w2, cm)
        all_ok &= rep.ok
        print(
            f"{args.id} w=({w1}, {w2}) {rep.cost_model.value}: poa={format_rational(rep.poa)} "
            f"equilibrium_valid={rep.equilibrium_valid} matches_formula={rep.matches_formula} "
            f"matches_lp={rep.matches_lp} ok={rep.ok}",
            file=out,
        )
    if not all_ok:
        raise DomainFailure(f"catalog verification failed for {args.id}")
    return 0


def cmd_sweep(args, out) -> int:
    r_min, r_max, n = args.grid
    n_int = int(n)
    if n_int != n:
        raise ValueError("grid point count must be an integer")
    rows = sweep_rows(args.game_class_list or ["sim"], args.cost_list or ["uni"],
                      ratio_grid(r_min, r_max, n_int), args.digits, args.source)
    _emit(sweep_csv(rows), args.out, out)
    return 0


def cmd_verify_all(args, out) -> int:
    if not verify_all(out):
        raise DomainFailure("verify-all found failures")
    print("all checks passed", file=out)
    return 0


def cmd_dual_cert(args, out) -> int:
    res = solve_worst_case(_spec(args))
    _emit(dual_certificate(res).to_text(), args.out, out)
    return 0


def cmd_lp_samples(args, out) -> int:
    specs = [_spec(args, w1, w2) for w1, w2 in args.weights]
    _emit(format_table(tabulate_solutions(specs)), args.out, out)
    if args.candidates:
        for s in specs:
            cands = sym_uni_b_candidates(s.w1, s.w2)
            shown = " ".join(f"{k}={format_rational(v)}" for k, v in cands.items())
            print(f"candidates w=({s.w1}, {s.w2}): {shown}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weightedpoa",
        description="Exact price of anarchy for weighted two-player affine congestion games.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def class_cost(p, required=True):
        p.add_argument("--class", dest="game_class", choices=CLASS_CHOICES, required=required)
        p.add_argument("--cost", choices=COST_CHOICES, required=required)

    def weights(p, **kw):
        p.add_argument("--weights", nargs=2, type=_rational, metavar=("W1", "W2"), **kw)

    def forcing(p):
        p.add_argument("--force-zero", action="append", metavar="LABELSET",
                       help="pin a resource to zero, e.g. O1,E1,E2X; prefix alpha: or beta: "
                            "to pin one coefficient (repeatable)")
        p.add_argument("--keep", action="append", metavar="LABELSET",
                       help="pin every resource not listed to zero; prefix beta: to keep only "
                            "the linear coefficient (repeatable)")

    p = sub.add_parser("solve-lp", help="solve the worst-case LP and print the PoA")
    class_cost(p)
    weights(p, required=True)
    forcing(p)
    p.add_argument("--details", action="store_true", help="also print primal and dual nonzeros")
    p.add_argument("--witness-out", metavar="PATH", help="write the witness game as JSON")
    p.set_defaults(func=cmd_solve_lp)

    p = sub.add_parser("formula", help="evaluate the closed-form PoA or its supremum")
    class_cost(p)
    weights(p)
    p.add_argument("--supremum", action="store_true", help="supremum over all weights")
    p.add_argument("--show-regime", action="store_true")
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("instance-poa", help="PoA of one game file by brute force")
    p.add_argument("--file", required=True)
    p.add_argument("--mode", default="simultaneous",
                   choices=("simultaneous", "sequential:1", "sequential:2"))
    p.add_argument("--json", action="store_true", help="print the full report")
    p.set_defaults(func=cmd_instance_poa)

    p = sub.add_parser("catalog", help="list, export or verify worst-case instances")
    p.add_argument("action", choices=("list", "export", "verify"))
    p.add_argument("id", nargs="?", choices=tuple(CATALOG))
    p.add_argument("--cost", choices=COST_CHOICES)
    weights(p)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("sweep", help="CSV of the PoA over a weight-ratio grid")
    p.add_argument("--class", dest="game_class_list", action="append", choices=CLASS_CHOICES)
    p.add_argument("--cost", dest="cost_list", action="append", choices=COST_CHOICES)
    p.add_argument("--grid", nargs=3, type=_rational, metavar=("MIN", "MAX", "N"),
                   default=[Fraction(1, 10), Fraction(10), Fraction(41)])
    p.add_argument("--digits", type=int, default=6)
    p.add_argument("--source", choices=("lp", "formula"), default="lp")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify-all", help="cross-check LP, closed forms, catalog and certificates")
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("dual-cert", help="print the dual certificate of a worst-case LP")
    class_cost(p)
    weights(p, required=True)
    forcing(p)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_dual_cert)

    p = sub.add_parser("lp-samples", help="table of exact primal/dual nonzeros at several weights")
    class_cost(p)
    p.add_argument("--weights", nargs=2, type=_rational, action="append", required=True,
                   metavar=("W1", "W2"), help="repeatable")
    forcing(p)
    p.add_argument("--candidates", action="store_true",
                   help="also print the competing readings of the middle symmetric uniform piece")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_lp_samples)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, out)
    except DomainFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

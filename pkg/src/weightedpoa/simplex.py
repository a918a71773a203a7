"""Exact rational linear programming.

Two-phase primal simplex with Bland's rule on an integer tableau. Every
constraint row is scaled to integers and pivots use fraction-free (Bareiss)
updates, so all tableau entries are Python ints sharing one positive common
denominator ``D``; the real tableau is ``T / D``. Results are returned as
Fractions together with exact dual multipliers, and every optimal solution is
re-verified (feasibility, strong duality, complementary slackness) in rational
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .exactmath import RationalLike, format_rational, parse_rational


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LpModelError(ValueError):
    pass


class LpVerificationError(RuntimeError):
    """An exact optimality or infeasibility certificate failed to verify."""


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: Mapping[str, Fraction]
    relation: Relation
    rhs: Fraction

    def activity(self, x: Mapping[str, Fraction]) -> Fraction:
        return sum((c * x.get(v, 0) for v, c in self.coeffs.items()), Fraction(0))


class LpModel:
    """``maximize c.x`` subject to named linear rows; variables nonnegative or free."""

    def __init__(self, name: str = "lp") -> None:
        self.name = name
        self.variables: dict[str, bool] = {}  # name -> nonnegative?
        self.objective: dict[str, Fraction] = {}
        self.constraints: list[Constraint] = []
        self._row_names: set[str] = set()

    def add_variable(self, name: str, nonnegative: bool = True) -> str:
        if name in self.variables:
            raise LpModelError(f"duplicate variable {name!r}")
        self.variables[name] = nonnegative
        return name

    def _form(self, coeffs: Mapping[str, RationalLike]) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for v, c in coeffs.items():
            if v not in self.variables:
                raise LpModelError(f"undeclared variable {v!r}")
            c = parse_rational(c)
            if c:
                out[v] = out.get(v, Fraction(0)) + c
        return {v: c for v, c in out.items() if c}

    def set_objective(self, coeffs: Mapping[str, RationalLike]) -> None:
        self.objective = self._form(coeffs)

    def add_constraint(
        self,
        coeffs: Mapping[str, RationalLike],
        relation: Relation | str,
        rhs: RationalLike,
        name: str | None = None,
    ) -> Constraint:
        name = name or f"r{len(self.constraints)}"
        if name in self._row_names:
            raise LpModelError(f"duplicate constraint name {name!r}")
        row = Constraint(name, self._form(coeffs), Relation(relation), parse_rational(rhs))
        self.constraints.append(row)
        self._row_names.add(name)
        return row

    def constraint(self, name: str) -> Constraint:
        for row in self.constraints:
            if row.name == name:
                return row
        raise KeyError(name)

    def objective_value(self, x: Mapping[str, Fraction]) -> Fraction:
        return sum((c * x.get(v, 0) for v, c in self.objective.items()), Fraction(0))

    def permuted(self, var_order: list[str], row_order: list[int]) -> LpModel:
        """Copy with variables and rows reordered (for invariance checks)."""
        m = LpModel(self.name)
        for v in var_order:
            m.add_variable(v, self.variables[v])
        m.set_objective(self.objective)
        for i in row_order:
            r = self.constraints[i]
            m.add_constraint(r.coeffs, r.relation, r.rhs, r.name)
        return m

    def dump(self) -> str:
        """Human-readable LP text listing with rationals as ``p/q``."""

        def form(coeffs: Mapping[str, Fraction]) -> str:
            if not coeffs:
                return "0"
            parts = []
            for v, c in coeffs.items():
                sign = "-" if c < 0 else "+"
                parts.append(f"{sign} {format_rational(abs(c))} {v}")
            text = " ".join(parts)
            return text[2:] if text.startswith("+ ") else text

        lines = [f"\\ {self.name}", "maximize", f"  obj: {form(self.objective)}", "subject to"]
        for r in self.constraints:
            lines.append(f"  {r.name}: {form(r.coeffs)} {r.relation.value} {format_rational(r.rhs)}")
        lines.append("bounds")
        for v, nonneg in self.variables.items():
            lines.append(f"  {v} >= 0" if nonneg else f"  {v} free")
        lines.append("end")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LpSolution:
    status: Status
    objective_value: Fraction | None = None
    primal: dict[str, Fraction] = field(default_factory=dict)
    dual: dict[str, Fraction] = field(default_factory=dict)
    farkas: dict[str, Fraction] | None = None
    pivots: int = 0

    def nonzero_primal(self) -> dict[str, Fraction]:
        return {k: v for k, v in self.primal.items() if v}

    def nonzero_dual(self) -> dict[str, Fraction]:
        return {k: v for k, v in self.dual.items() if v}


def _lcm_denominators(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v.denominator)
    return out


class _Tableau:
    """Integer tableau ``T`` with common denominator ``D`` (real value ``T / D``)."""

    def __init__(self, rows: list[list[int]], basis: list[int], zrows: list[list[int]]):
        self.rows = rows
        self.basis = basis
        self.zrows = zrows
        self.D = 1
        self.pivots = 0

    def pivot(self, i: int, j: int) -> None:
        prow = self.rows[i]
        p = prow[j]
        D = self.D
        width = len(prow)
        for k, row in enumerate(self.rows):
            if k == i:
                continue
            f = row[j]
            if f:
                for l in range(width):
                    row[l] = (row[l] * p - f * prow[l]) // D
            elif p != D:
                for l in range(width):
                    row[l] = row[l] * p // D
        for row in self.zrows:
            f = row[j]
            if f:
                for l in range(width):
                    row[l] = (row[l] * p - f * prow[l]) // D
            elif p != D:
                for l in range(width):
                    row[l] = row[l] * p // D
        self.D = p
        self.basis[i] = j
        self.pivots += 1
        if p < 0:
            for row in self.rows:
                for l in range(width):
                    row[l] = -row[l]
            for row in self.zrows:
                for l in range(width):
                    row[l] = -row[l]
            self.D = -p

    def run(self, z: list[int], allowed: list[bool]) -> Status:
        """Maximize against objective row ``z`` with Bland's rule."""
        rhs = len(z) - 1
        while True:
            enter = -1
            for j in range(rhs):
                if allowed[j] and z[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return Status.OPTIMAL
            leave = -1
            best_num = best_den = 0
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a <= 0:
                    continue
                num = row[rhs]
                if leave < 0:
                    leave, best_num, best_den = i, num, a
                    continue
                lhs_, rhs_ = num * best_den, best_num * a
                if lhs_ < rhs_ or (lhs_ == rhs_ and self.basis[i] < self.basis[leave]):
                    leave, best_num, best_den = i, num, a
            if leave < 0:
                return Status.UNBOUNDED
            self.pivot(leave, enter)


def solve_lp(model: LpModel, *, check: bool = True) -> LpSolution:
    """Solve ``model`` exactly.

    Duals are reported per constraint name with the sign convention of the
    maximization dual: ``<=`` rows nonnegative, ``>=`` rows nonpositive,
    equalities free, so that the dual objective is ``sum(dual * rhs)``.
    Infeasible models carry a verified Farkas multiplier vector instead.
    """
    var_names = list(model.variables)
    # structural columns: (model var, sign)
    columns: list[tuple[str, int]] = []
    for v in var_names:
        columns.append((v, 1))
        if not model.variables[v]:
            columns.append((v, -1))
    col_of: dict[str, list[tuple[int, int]]] = {}
    for j, (v, s) in enumerate(columns):
        col_of.setdefault(v, []).append((j, s))
    n_struct = len(columns)

    # integer-scaled, rhs-nonnegative rows
    m = len(model.constraints)
    row_mult: list[Fraction] = []
    std_rel: list[Relation] = []
    int_rows: list[dict[int, int]] = []
    int_rhs: list[int] = []
    for r in model.constraints:
        lam = _lcm_denominators(list(r.coeffs.values()) + [r.rhs])
        sign = -1 if r.rhs < 0 else 1
        rel = r.relation
        if sign < 0 and rel is not Relation.EQ:
            rel = Relation.GE if rel is Relation.LE else Relation.LE
        mult = sign * lam
        coeffs: dict[int, int] = {}
        for v, c in r.coeffs.items():
            for j, s in col_of[v]:
                coeffs[j] = coeffs.get(j, 0) + int(c * mult) * s
        int_rows.append(coeffs)
        int_rhs.append(int(r.rhs * mult))
        row_mult.append(Fraction(mult))
        std_rel.append(rel)

    # logical columns
    n_cols = n_struct
    slack_col: list[int | None] = []
    art_col: list[int | None] = []
    for rel in std_rel:
        if rel is Relation.LE:
            slack_col.append(n_cols)
            art_col.append(None)
            n_cols += 1
        elif rel is Relation.GE:
            slack_col.append(n_cols)
            art_col.append(n_cols + 1)
            n_cols += 2
        else:
            slack_col.append(None)
            art_col.append(n_cols)
            n_cols += 1
    width = n_cols + 1
    rows: list[list[int]] = []
    basis: list[int] = []
    id_col: list[int] = []
    for i in range(m):
        row = [0] * width
        for j, a in int_rows[i].items():
            row[j] = a
        if std_rel[i] is Relation.LE:
            row[slack_col[i]] = 1
            basis.append(slack_col[i])
            id_col.append(slack_col[i])
        else:
            if std_rel[i] is Relation.GE:
                row[slack_col[i]] = -1
            row[art_col[i]] = 1
            basis.append(art_col[i])
            id_col.append(art_col[i])
        row[-1] = int_rhs[i]
        rows.append(row)
    is_art = [False] * n_cols
    for a in art_col:
        if a is not None:
            is_art[a] = True

    sigma = _lcm_denominators(model.objective.values()) if model.objective else 1
    z2 = [0] * width
    for v, c in model.objective.items():
        for j, s in col_of[v]:
            z2[j] -= int(c * sigma) * s
    # phase 1: maximize -(sum of artificials); price out the artificial basis
    z1 = [0] * width
    for i in range(m):
        if art_col[i] is not None:
            for l in range(width):
                if l == width - 1 or not is_art[l]:
                    z1[l] -= rows[i][l]

    tab = _Tableau(rows, basis, [z1, z2])
    if any(is_art):
        tab.run(z1, [True] * n_cols)
        if z1[-1] < 0:
            y_std = []
            for i in range(m):
                c = -1 if is_art[id_col[i]] else 0
                y_std.append(Fraction(z1[id_col[i]], tab.D) + c)
            farkas = {model.constraints[i].name: y_std[i] * row_mult[i] for i in range(m)}
            sol = LpSolution(Status.INFEASIBLE, farkas=farkas, pivots=tab.pivots)
            if check:
                verify_farkas(model, farkas)
            return sol
        # drive zero-level artificials out of the basis where possible
        for i in range(m):
            if is_art[tab.basis[i]]:
                row = tab.rows[i]
                for j in range(n_cols):
                    if not is_art[j] and row[j] != 0:
                        tab.pivot(i, j)
                        break

    status = tab.run(z2, [not a for a in is_art])
    if status is Status.UNBOUNDED:
        return LpSolution(Status.UNBOUNDED, pivots=tab.pivots)

    col_value = [Fraction(0)] * n_cols
    for i, j in enumerate(tab.basis):
        col_value[j] = Fraction(tab.rows[i][-1], tab.D)
    primal = {v: Fraction(0) for v in var_names}
    for j, (v, s) in enumerate(columns):
        primal[v] += s * col_value[j]
    dual = {}
    for i in range(m):
        y = Fraction(z2[id_col[i]], tab.D)
        dual[model.constraints[i].name] = y * row_mult[i] / sigma
    sol = LpSolution(
        Status.OPTIMAL,
        objective_value=model.objective_value(primal),
        primal=primal,
        dual=dual,
        pivots=tab.pivots,
    )
    if check:
        verify_optimal(model, sol)
    return sol


def reduced_costs(model: LpModel, dual: Mapping[str, Fraction]) -> dict[str, Fraction]:
    """``(A^T y - c)_j`` per variable."""
    red = {v: -model.objective.get(v, Fraction(0)) for v in model.variables}
    for r in model.constraints:
        y = dual.get(r.name, Fraction(0))
        if y:
            for v, a in r.coeffs.items():
                red[v] += y * a
    return red


def _dual_sign_ok(rel: Relation, y: Fraction) -> bool:
    if rel is Relation.LE:
        return y >= 0
    if rel is Relation.GE:
        return y <= 0
    return True


def verify_optimal(model: LpModel, sol: LpSolution) -> None:
    """Exact primal/dual feasibility, strong duality and complementary slackness."""
    x, y = sol.primal, sol.dual
    for v, nonneg in model.variables.items():
        if nonneg and x[v] < 0:
            raise LpVerificationError(f"primal bound violated: {v} = {x[v]}")
    for r in model.constraints:
        act = r.activity(x)
        ok = {Relation.LE: act <= r.rhs, Relation.GE: act >= r.rhs, Relation.EQ: act == r.rhs}[r.relation]
        if not ok:
            raise LpVerificationError(f"row {r.name} violated: {act} {r.relation.value} {r.rhs}")
        if not _dual_sign_ok(r.relation, y[r.name]):
            raise LpVerificationError(f"dual of {r.name} has wrong sign: {y[r.name]}")
        if (act - r.rhs) * y[r.name] != 0:
            raise LpVerificationError(f"complementary slackness fails on row {r.name}")
    red = reduced_costs(model, y)
    for v, nonneg in model.variables.items():
        if (nonneg and red[v] < 0) or (not nonneg and red[v] != 0):
            raise LpVerificationError(f"dual infeasible at column {v}: {red[v]}")
        if x[v] * red[v] != 0:
            raise LpVerificationError(f"complementary slackness fails on column {v}")
    dual_obj = sum((y[r.name] * r.rhs for r in model.constraints), Fraction(0))
    if dual_obj != sol.objective_value:
        raise LpVerificationError(f"duality gap: primal {sol.objective_value} vs dual {dual_obj}")


def verify_farkas(model: LpModel, y: Mapping[str, Fraction]) -> None:
    """Check ``y`` proves infeasibility: ``y^T A >= 0`` (``= 0`` on free columns), ``y.b < 0``."""
    for r in model.constraints:
        if not _dual_sign_ok(r.relation, y.get(r.name, Fraction(0))):
            raise LpVerificationError(f"Farkas multiplier of {r.name} has wrong sign")
    comb = {v: Fraction(0) for v in model.variables}
    for r in model.constraints:
        yi = y.get(r.name, Fraction(0))
        for v, a in r.coeffs.items():
            comb[v] += yi * a
    for v, nonneg in model.variables.items():
        if (nonneg and comb[v] < 0) or (not nonneg and comb[v] != 0):
            raise LpVerificationError(f"Farkas combination fails at column {v}")
    yb = sum((y.get(r.name, Fraction(0)) * r.rhs for r in model.constraints), Fraction(0))
    if yb >= 0:
        raise LpVerificationError("Farkas combination does not yield a contradiction")

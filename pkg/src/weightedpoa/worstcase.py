"""Worst-case LPs over labelled actions: build, solve, extract witnesses and certificates.

Actions are labelled by role: ``O1``/``O2`` form the social optimum,
``E1``/``E2`` the worst equilibrium, and in the sequential class ``E2X`` is the
follower's best response to ``O1``. Resources are the nonempty label subsets;
resource ``r`` is used by the action labelled ``L`` iff ``L`` is in ``r``. The LP
variables are the cost coefficients ``alpha_r, beta_r >= 0``; player costs are
inlined as linear forms in those coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .equilibria import instance_poa
from .exactmath import RationalLike, format_rational, parse_rational
from .game import CostModel, GameInstance, Resource
from .simplex import LpModel, LpSolution, Relation, Status, reduced_costs, solve_lp

O1, O2, E1, E2, E2X = "O1", "O2", "E1", "E2", "E2X"
LABEL_ORDER = (O1, O2, E1, E2, E2X)


class GameClass(str, Enum):
    SIMULTANEOUS = "simultaneous"
    SYMMETRIC_SIMULTANEOUS = "symmetric_simultaneous"
    SEQUENTIAL = "sequential"
    SYMMETRIC_SEQUENTIAL = "symmetric_sequential"

    @classmethod
    def parse(cls, text: str | GameClass) -> GameClass:
        if isinstance(text, GameClass):
            return text
        aliases = {
            "sim": cls.SIMULTANEOUS,
            "sym-sim": cls.SYMMETRIC_SIMULTANEOUS,
            "seq": cls.SEQUENTIAL,
            "sym-seq": cls.SYMMETRIC_SEQUENTIAL,
        }
        try:
            return aliases.get(text) or cls(text)
        except ValueError:
            raise ValueError(f"unknown game class {text!r}") from None

    @property
    def short(self) -> str:
        return {
            GameClass.SIMULTANEOUS: "sim",
            GameClass.SYMMETRIC_SIMULTANEOUS: "sym-sim",
            GameClass.SEQUENTIAL: "seq",
            GameClass.SYMMETRIC_SEQUENTIAL: "sym-seq",
        }[self]


class UnsupportedClassError(ValueError):
    """The requested game class has no LP (or closed form) in this library."""


class WitnessError(RuntimeError):
    """The extracted witness does not reproduce the LP optimum: an implementation bug."""


class CertificateError(RuntimeError):
    """A dual certificate failed its exact re-check: an implementation bug."""


def check_supported(game_class: GameClass) -> None:
    if game_class is GameClass.SYMMETRIC_SEQUENTIAL:
        raise UnsupportedClassError(
            "symmetric sequential games are not supported: letting the leader use follower "
            "actions would require a new follower response label per such action, recursively"
        )


def labels_for(game_class: GameClass) -> tuple[str, ...]:
    if game_class is GameClass.SEQUENTIAL:
        return (O1, O2, E1, E2, E2X)
    return (O1, O2, E1, E2)


def admissible(game_class: GameClass) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Label sets available to players 1 and 2."""
    if game_class is GameClass.SEQUENTIAL:
        return (O1, E1), (O2, E2, E2X)
    if game_class is GameClass.SYMMETRIC_SIMULTANEOUS:
        both = (O1, O2, E1, E2)
        return both, both
    return (O1, E1), (O2, E2)


LabelSet = frozenset


def parse_labelset(text: str | Iterable[str]) -> frozenset[str]:
    """``"O1,E1,E2X"`` (or ``"O1+E1+E2X"``, or an iterable) -> frozenset of labels."""
    parts = text.replace("+", ",").split(",") if isinstance(text, str) else list(text)
    out = frozenset(p.strip().upper() for p in parts if p.strip())
    bad = out - set(LABEL_ORDER)
    if bad or not out:
        raise ValueError(f"bad label set {text!r}")
    return out


def resource_id(labels: Iterable[str]) -> str:
    s = set(labels)
    return "+".join(l for l in LABEL_ORDER if l in s)


def all_label_subsets(labels: Sequence[str]) -> list[frozenset[str]]:
    """Nonempty subsets ordered by size, then lexicographically in label order."""
    out = []
    for k in range(1, len(labels) + 1):
        out.extend(frozenset(c) for c in combinations(labels, k))
    return out


@dataclass(frozen=True)
class WorstCaseSpec:
    game_class: GameClass
    cost_model: CostModel
    w1: Fraction
    w2: Fraction
    forced_zero: frozenset[frozenset[str]] = frozenset()
    forced_alpha_zero: frozenset[frozenset[str]] = frozenset()
    forced_beta_zero: frozenset[frozenset[str]] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "game_class", GameClass.parse(self.game_class))
        object.__setattr__(self, "cost_model", CostModel.parse(self.cost_model))
        object.__setattr__(self, "w1", parse_rational(self.w1))
        object.__setattr__(self, "w2", parse_rational(self.w2))
        for attr in ("forced_zero", "forced_alpha_zero", "forced_beta_zero"):
            object.__setattr__(self, attr, frozenset(parse_labelset(s) for s in getattr(self, attr)))
        if self.w1 < 0 or self.w2 < 0 or self.w1 + self.w2 <= 0:
            raise ValueError(f"need w1, w2 >= 0 with w1 + w2 > 0, got ({self.w1}, {self.w2})")
        check_supported(self.game_class)
        allowed = set(labels_for(self.game_class))
        for s in self.forced_zero | self.forced_alpha_zero | self.forced_beta_zero:
            if not s <= allowed:
                raise ValueError(f"forced resource {resource_id(s)} uses labels outside this class")

    @classmethod
    def keeping_only(
        cls,
        game_class: GameClass | str,
        cost_model: CostModel | str,
        w1: RationalLike,
        w2: RationalLike,
        keep: Iterable[str | Iterable[str]],
        *,
        keep_alpha: bool = True,
    ) -> WorstCaseSpec:
        """Spec forcing every resource except ``keep`` to zero.

        With ``keep_alpha=False`` the kept resources are also restricted to
        purely linear costs (``alpha = 0``).
        """
        gc = GameClass.parse(game_class)
        check_supported(gc)
        kept = frozenset(parse_labelset(k) for k in keep)
        forced = frozenset(s for s in all_label_subsets(labels_for(gc)) if s not in kept)
        return cls(gc, cost_model, w1, w2, forced, frozenset() if keep_alpha else kept)

    @classmethod
    def with_forcing(
        cls,
        game_class: GameClass | str,
        cost_model: CostModel | str,
        w1: RationalLike,
        w2: RationalLike,
        forcing: Iterable[str],
    ) -> WorstCaseSpec:
        """Spec from forcing strings: ``"O1,E1"`` pins both coefficients, while
        ``"alpha:O1,E1"`` or ``"beta:O1,E1"`` pins just one."""
        both, alpha, beta = set(), set(), set()
        for item in forcing:
            kind, _, rest = item.partition(":")
            if not rest:
                both.add(parse_labelset(kind))
            elif kind.strip().lower() in ("alpha", "a"):
                alpha.add(parse_labelset(rest))
            elif kind.strip().lower() in ("beta", "b"):
                beta.add(parse_labelset(rest))
            else:
                raise ValueError(f"bad forcing {item!r}")
        return cls(game_class, cost_model, w1, w2, frozenset(both), frozenset(alpha), frozenset(beta))

    def scaled(self, lam: RationalLike) -> WorstCaseSpec:
        lam = parse_rational(lam)
        return replace(self, w1=self.w1 * lam, w2=self.w2 * lam)

    def swapped(self) -> WorstCaseSpec:
        return replace(self, w1=self.w2, w2=self.w1)

    def resources(self) -> list[frozenset[str]]:
        return [s for s in all_label_subsets(labels_for(self.game_class)) if s not in self.forced_zero]

    @property
    def is_forced(self) -> bool:
        return bool(self.forced_zero or self.forced_alpha_zero or self.forced_beta_zero)

    def has_alpha(self, r: frozenset[str]) -> bool:
        return r not in self.forced_alpha_zero

    def has_beta(self, r: frozenset[str]) -> bool:
        return r not in self.forced_beta_zero

    def forcing_strings(self) -> list[str]:
        out = [resource_id(s) for s in self.forced_zero]
        out += [f"alpha:{resource_id(s)}" for s in self.forced_alpha_zero]
        out += [f"beta:{resource_id(s)}" for s in self.forced_beta_zero]
        return sorted(out)


def alpha_var(r: frozenset[str]) -> str:
    return f"alpha[{resource_id(r)}]"


def beta_var(r: frozenset[str]) -> str:
    return f"beta[{resource_id(r)}]"


def cost_form(spec: WorstCaseSpec, player: int, a1: str, a2: str) -> dict[str, Fraction]:
    """Linear form of ``C_player(a1, a2)`` in the resource coefficients."""
    own = a1 if player == 1 else a2
    factor = Fraction(1)
    if spec.cost_model is CostModel.PROPORTIONAL:
        factor = spec.w1 if player == 1 else spec.w2
    form: dict[str, Fraction] = {}
    for r in spec.resources():
        if own not in r:
            continue
        load = (spec.w1 if a1 in r else 0) + (spec.w2 if a2 in r else 0)
        if spec.has_alpha(r):
            form[alpha_var(r)] = factor
        if spec.has_beta(r):
            form[beta_var(r)] = factor * load
    return form


def _plus(*forms: dict[str, Fraction], signs: Sequence[int] | None = None) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for k, f in enumerate(forms):
        s = 1 if signs is None else signs[k]
        for v, c in f.items():
            out[v] = out.get(v, Fraction(0)) + s * c
    return out


def social_form(spec: WorstCaseSpec, a1: str, a2: str) -> dict[str, Fraction]:
    return _plus(cost_form(spec, 1, a1, a2), cost_form(spec, 2, a1, a2))


NORMALIZATION = "normalization"


def build_lp(spec: WorstCaseSpec) -> LpModel:
    """The worst-case LP of ``spec`` (maximize the equilibrium's social cost).

    Row names: ``normalization``; ``opt_lb(A1,A2)`` for the optimality rows;
    ``nash1(A1)``/``nash2(A2)`` for simultaneous deviations;
    ``follower_eq(A2)``, ``follower_opt(A2)``, ``leader`` for the sequential rows.
    """
    lp = LpModel(
        f"worstcase {spec.game_class.value} {spec.cost_model.value} "
        f"w1={format_rational(spec.w1)} w2={format_rational(spec.w2)}"
    )
    for r in spec.resources():
        if spec.has_alpha(r):
            lp.add_variable(alpha_var(r))
        if spec.has_beta(r):
            lp.add_variable(beta_var(r))
    A1, A2 = admissible(spec.game_class)
    lp.set_objective(social_form(spec, E1, E2))
    lp.add_constraint(social_form(spec, O1, O2), Relation.EQ, 1, NORMALIZATION)
    for a1 in A1:
        for a2 in A2:
            lp.add_constraint(social_form(spec, a1, a2), Relation.GE, 1, f"opt_lb({a1},{a2})")
    eq1, eq2 = cost_form(spec, 1, E1, E2), cost_form(spec, 2, E1, E2)
    if spec.game_class is GameClass.SEQUENTIAL:
        for a2 in A2:
            if a2 != E2:
                dev = cost_form(spec, 2, E1, a2)
                lp.add_constraint(_plus(eq2, dev, signs=(1, -1)), Relation.LE, 0, f"follower_eq({a2})")
        resp = cost_form(spec, 2, O1, E2X)
        for a2 in A2:
            if a2 != E2X:
                dev = cost_form(spec, 2, O1, a2)
                lp.add_constraint(_plus(resp, dev, signs=(1, -1)), Relation.LE, 0, f"follower_opt({a2})")
        lead = cost_form(spec, 1, O1, E2X)
        lp.add_constraint(_plus(eq1, lead, signs=(1, -1)), Relation.LE, 0, "leader")
    else:
        for a1 in A1:
            if a1 != E1:
                dev = cost_form(spec, 1, a1, E2)
                lp.add_constraint(_plus(eq1, dev, signs=(1, -1)), Relation.LE, 0, f"nash1({a1})")
        for a2 in A2:
            if a2 != E2:
                dev = cost_form(spec, 2, E1, a2)
                lp.add_constraint(_plus(eq2, dev, signs=(1, -1)), Relation.LE, 0, f"nash2({a2})")
    return lp


@dataclass(frozen=True)
class WorstCaseResult:
    spec: WorstCaseSpec
    poa: Fraction
    witness: GameInstance
    label_action: dict[str, tuple[int, int]]  # label -> (player, action index)
    primal: dict[str, tuple[Fraction, Fraction]]  # resource id -> (alpha, beta), nonzero only
    dual: dict[str, Fraction]
    solution: LpSolution = field(repr=False)
    model: LpModel = field(repr=False, compare=False)
    # For forced specs: whether the reported dual also certifies the unforced LP,
    # which proves that forcing did not lower the optimum.
    forcing_exact: bool = True


    def nonzero_dual(self) -> dict[str, Fraction]:
        return {k: v for k, v in self.dual.items() if v}

    def coefficient(self, labels: str | Iterable[str]) -> tuple[Fraction, Fraction]:
        rid = resource_id(parse_labelset(labels))
        return self.primal.get(rid, (Fraction(0), Fraction(0)))


def extract_witness(spec: WorstCaseSpec, primal: dict[str, tuple[Fraction, Fraction]]) -> tuple[GameInstance, dict[str, tuple[int, int]]]:
    """Game whose resources are the nonzero label subsets and whose actions are the labels."""
    resources = tuple(Resource(rid, a, b) for rid, (a, b) in primal.items())
    used = {rid: set(rid.split("+")) for rid in primal}
    A1, A2 = admissible(spec.game_class)
    label_action: dict[str, tuple[int, int]] = {}
    per_player: list[tuple[list[frozenset[str]], list[str]]] = []
    for player, labels in ((1, A1), (2, A2)):
        actions: list[frozenset[str]] = []
        names: list[str] = []
        for lab in labels:
            act = frozenset(rid for rid, labs in used.items() if lab in labs)
            if act in actions:
                k = actions.index(act)
                names[k] = f"{names[k]}/{lab}"
            else:
                k = len(actions)
                actions.append(act)
                names.append(lab)
            label_action.setdefault(lab, (player, k))
            if spec.game_class is GameClass.SYMMETRIC_SIMULTANEOUS:
                label_action[f"{lab}@{player}"] = (player, k)
        per_player.append((actions, names))
    game = GameInstance(
        resources=resources,
        actions1=tuple(per_player[0][0]),
        actions2=tuple(per_player[1][0]),
        w1=spec.w1,
        w2=spec.w2,
        cost_model=spec.cost_model,
        names1=tuple(per_player[0][1]),
        names2=tuple(per_player[1][1]),
    )
    return game, label_action


def fold_duplicate_normalization(dual: dict[str, Fraction]) -> dict[str, Fraction]:
    """Move the multiplier of ``opt_lb(O1,O2)`` onto the normalization row it repeats."""
    key = f"opt_lb({O1},{O2})"
    if not dual.get(key):
        return dict(dual)
    out = dict(dual)
    out[NORMALIZATION] += out[key]
    out[key] = Fraction(0)
    return out


def unforced(spec: WorstCaseSpec) -> WorstCaseSpec:
    return replace(spec, forced_zero=frozenset(), forced_alpha_zero=frozenset(), forced_beta_zero=frozenset())


def canonical_dual(spec: WorstCaseSpec, value: Fraction) -> dict[str, Fraction] | None:
    """Minimum-L1 dual vector of value ``value`` that is feasible for the unforced LP.

    Duals of the worst-case LPs are far from unique (several rows repeat or
    negate each other). This picks a reproducible one. Because it is checked
    against every column of the unforced LP, its existence proves that forcing
    did not cost optimality. Returns ``None`` if no such dual exists.
    """
    full = build_lp(unforced(spec))
    aux = LpModel("canonical dual")
    pos: dict[str, str] = {}
    neg: dict[str, str] = {}
    for k, row in enumerate(full.constraints):
        if row.relation is not Relation.GE:
            pos[row.name] = aux.add_variable(f"p{k}")
        if row.relation is not Relation.LE:
            neg[row.name] = aux.add_variable(f"n{k}")
    aux.set_objective({v: -1 for v in (*pos.values(), *neg.values())})

    def signed(coeff_of) -> dict[str, Fraction]:
        form: dict[str, Fraction] = {}
        for row in full.constraints:
            a = coeff_of(row)
            if a:
                if row.name in pos:
                    form[pos[row.name]] = a
                if row.name in neg:
                    form[neg[row.name]] = -a
        return form

    for v in full.variables:
        aux.add_constraint(signed(lambda row: row.coeffs.get(v, Fraction(0))), Relation.GE,
                           full.objective.get(v, Fraction(0)), f"col[{v}]")
    aux.add_constraint(signed(lambda row: row.rhs), Relation.EQ, value, "value")
    sol = solve_lp(aux)
    if sol.status is not Status.OPTIMAL:
        return None
    return {
        row.name: sol.primal.get(pos.get(row.name, ""), Fraction(0))
        - sol.primal.get(neg.get(row.name, ""), Fraction(0))
        for row in full.constraints
    }


@lru_cache(maxsize=4096)
def solve_worst_case(spec: WorstCaseSpec, verify_witness: bool = True) -> WorstCaseResult:
    """Solve the worst-case LP exactly and extract a verified witness game."""
    model = build_lp(spec)
    sol = solve_lp(model)
    if sol.status is not Status.OPTIMAL:
        raise RuntimeError(f"worst-case LP is {sol.status.value} for {spec}; this indicates a bug")
    primal: dict[str, tuple[Fraction, Fraction]] = {}
    for r in spec.resources():
        a = sol.primal.get(alpha_var(r), Fraction(0))
        b = sol.primal.get(beta_var(r), Fraction(0))
        if a or b:
            primal[resource_id(r)] = (a, b)
    witness, label_action = extract_witness(spec, primal)
    forcing_exact = True
    dual = None
    if spec.is_forced:
        dual = canonical_dual(spec, sol.objective_value)
        forcing_exact = dual is not None
    if dual is None:
        dual = fold_duplicate_normalization(sol.dual)
    result = WorstCaseResult(
        spec, sol.objective_value, witness, label_action, primal, dual, sol, model, forcing_exact
    )
    if verify_witness:
        mode = "sequential:1" if spec.game_class is GameClass.SEQUENTIAL else "simultaneous"
        got = instance_poa(witness, mode).poa
        # A forced LP is a restriction: its witness may have a worse equilibrium
        # than the labelled one, so only the lower bound holds.
        if got < result.poa or (got != result.poa and not spec.is_forced):
            raise WitnessError(f"witness PoA {got} does not match LP optimum {result.poa} for {spec}")
    return result


def lp_poa(
    game_class: GameClass | str, cost_model: CostModel | str, w1: RationalLike, w2: RationalLike
) -> Fraction:
    return solve_worst_case(WorstCaseSpec(GameClass.parse(game_class), CostModel.parse(cost_model), w1, w2)).poa


# ---------------------------------------------------------------------------
# Dual certificates


@dataclass(frozen=True)
class DualCertificate:
    """Multipliers combining LP rows into an upper bound on the objective.

    ``combined`` is ``sum_i y_i * a_i`` per variable, ``bound`` is ``sum_i y_i * b_i``.
    The certificate is valid when multiplier signs match row relations and
    ``combined >= objective`` coefficient-wise (all variables are nonnegative),
    so that every feasible point has objective at most ``bound``.
    """

    multipliers: tuple[tuple[str, Fraction], ...]
    combined: dict[str, Fraction]
    bound: Fraction

    def to_text(self) -> str:
        lines = ["# constraint\tmultiplier"]
        lines += [f"{name}\t{format_rational(y)}" for name, y in self.multipliers if y]
        lines.append(f"# bound\t{format_rational(self.bound)}")
        return "\n".join(lines) + "\n"


def certificate_from_multipliers(model: LpModel, multipliers: dict[str, Fraction]) -> DualCertificate:
    combined = {v: Fraction(0) for v in model.variables}
    for r in model.constraints:
        y = multipliers.get(r.name, Fraction(0))
        if y:
            for v, a in r.coeffs.items():
                combined[v] += y * a
    bound = sum((multipliers.get(r.name, Fraction(0)) * r.rhs for r in model.constraints), Fraction(0))
    mults = tuple((r.name, multipliers.get(r.name, Fraction(0))) for r in model.constraints)
    return DualCertificate(mults, combined, bound)


def check_certificate(model: LpModel, cert: DualCertificate, expected_bound: Fraction | None = None) -> None:
    """Exact re-check; raises :class:`CertificateError` on any failure."""
    names = {r.name for r in model.constraints}
    for name, y in cert.multipliers:
        if name not in names:
            raise CertificateError(f"unknown row {name!r}")
        rel = model.constraint(name).relation
        if (rel is Relation.LE and y < 0) or (rel is Relation.GE and y > 0):
            raise CertificateError(f"multiplier of {name} has the wrong sign ({y})")
    recomputed = certificate_from_multipliers(model, dict(cert.multipliers))
    if recomputed.combined != cert.combined or recomputed.bound != cert.bound:
        raise CertificateError("stored combination does not match the multipliers")
    slack = reduced_costs(model, dict(cert.multipliers))
    for v, s in slack.items():
        if not model.variables[v]:
            raise CertificateError("certificates assume nonnegative variables")
        if s < 0:
            raise CertificateError(f"combination does not dominate the objective at {v} ({s})")
    if expected_bound is not None and cert.bound != expected_bound:
        raise CertificateError(f"certificate bound {cert.bound} differs from {expected_bound}")


def dual_certificate(result: WorstCaseResult) -> DualCertificate:
    """Certificate built from the optimal duals; verified to reproduce the LP optimum."""
    cert = certificate_from_multipliers(result.model, result.dual)
    check_certificate(result.model, cert, expected_bound=result.poa)
    return cert


# ---------------------------------------------------------------------------
# Solution tables


@dataclass(frozen=True)
class SolutionRow:
    spec: WorstCaseSpec
    poa: Fraction
    primal: dict[str, Fraction]  # "beta[E1]" style names, nonzero only
    dual: dict[str, Fraction]  # nonzero only


def tabulate_solutions(specs: Iterable[WorstCaseSpec]) -> list[SolutionRow]:
    rows = []
    for spec in specs:
        res = solve_worst_case(spec)
        primal = {k: v for k, v in res.solution.primal.items() if v}
        rows.append(SolutionRow(spec, res.poa, primal, res.nonzero_dual()))
    return rows


def format_table(rows: Sequence[SolutionRow]) -> str:
    """Tab-separated table with one column per primal/dual entry seen in any row."""
    if not rows:
        return ""
    pcols: list[str] = []
    dcols: list[str] = []
    for row in rows:
        pcols += [k for k in row.primal if k not in pcols]
        dcols += [k for k in row.dual if k not in dcols]
    header = ["w1", "w2", "poa"] + pcols + [f"dual:{d}" for d in dcols]
    lines = ["\t".join(header)]
    for row in rows:
        cells = [format_rational(row.spec.w1), format_rational(row.spec.w2), format_rational(row.poa)]
        cells += [format_rational(row.primal.get(k, 0)) for k in pcols]
        cells += [format_rational(row.dual.get(k, 0)) for k in dcols]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"

"""Projective-tower data model and the two tower Segre-series computations.

A tower is described level by level: each level carries a list of factors
(a univariate rational function together with an integer twist vector over
the lower levels) whose shifted product is the Segre series of that single
step, plus an optional set of auxiliary variables that pair extra copies of
the level's tautological class.

Two independent computations of the tower Segre series are provided:

* ``closed_formula_segre`` multiplies the shifted factors in the formal
  tower variables and applies the all-negative-exponents projection once at
  the end.
* ``stepwise_pushforward`` pushes tautological powers down one level at a
  time, replacing each power of a tautological class by the matching
  coefficient of that level's own Segre series.  It never uses the closed
  formula's resummation, which makes it an independent oracle.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .series import (
    LaurentPoly,
    Monomial,
    RationalFunction1V,
    VariableId,
    coefficient_of,
    descending_expand,
    geometric_expand,
    negative_part,
    rename_variables,
    shift_expand,
)

#: Reserved expansion pivot for univariate rational functions.
PIVOT = VariableId("u", "tower", 0)

DEGREE_CAP_ENV = "SEGRE_TOWERS_DEGREE_CAP"


def tower_variable(level: int) -> VariableId:
    return VariableId(f"u{level}", "tower", level)


def taut_variable(level: int) -> VariableId:
    return VariableId(f"c{level}", "taut", level)


def aux_variable(name: str, level: int) -> VariableId:
    return VariableId(name, "aux", level)


def base_variable(name: str) -> VariableId:
    return VariableId(name, "base", 0)


@dataclass(frozen=True)
class TowerFactor:
    """One factor of a level's Segre-series factorization.

    ``twists`` has one integer per lower level; the factor's argument is the
    level variable shifted by the twisted sum of lower tautological classes.
    ``series`` is the univariate rational function in the reserved pivot.
    """

    twists: tuple[int, ...]
    series: RationalFunction1V


@dataclass(frozen=True)
class TowerLevel:
    index: int
    factors: tuple[TowerFactor, ...]
    aux: tuple[VariableId, ...] = ()


@dataclass(frozen=True)
class TowerSpec:
    """A complete tower description.

    ``base_generators`` lists (name, degree) pairs for the free graded
    coefficient ring; ``base_degree_cap``, when set, drops terms above that
    weighted base degree during tower computations.
    """

    k: int
    levels: tuple[TowerLevel, ...]
    base_generators: tuple[tuple[str, int], ...] = ()
    base_degree_cap: int | None = None

    def tower_variables(self) -> tuple[VariableId, ...]:
        return tuple(tower_variable(i) for i in range(1, self.k + 1))

    def aux_variables(self) -> tuple[VariableId, ...]:
        return tuple(v for lvl in self.levels for v in lvl.aux)

    def base_variables(self) -> tuple[VariableId, ...]:
        return tuple(base_variable(name) for name, _ in self.base_generators)


@dataclass(frozen=True)
class Violation:
    level: int | None
    field: str
    message: str

    def __str__(self) -> str:
        where = f"level {self.level}" if self.level is not None else "tower"
        return f"{where}, {self.field}: {self.message}"


class InvalidTowerError(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


def tower_violations(spec: TowerSpec) -> list[Violation]:
    """All invariant breaches of a tower description, each naming its location."""
    out: list[Violation] = []
    if spec.k < 0:
        out.append(Violation(None, "k", f"level count must be non-negative, got {spec.k}"))
    if len(spec.levels) != max(spec.k, 0):
        out.append(
            Violation(None, "levels", f"expected {spec.k} levels, found {len(spec.levels)}")
        )
    declared_bases = set()
    for name, degree in spec.base_generators:
        if name in declared_bases:
            out.append(Violation(None, "base_generators", f"duplicate generator {name!r}"))
        declared_bases.add(name)
        if not isinstance(degree, int) or degree <= 0:
            out.append(
                Violation(None, "base_generators", f"generator {name!r} needs a positive degree")
            )
    if spec.base_degree_cap is not None and spec.base_degree_cap < 0:
        out.append(Violation(None, "base_degree_cap", "cap must be non-negative"))

    reserved = {f"u{i}" for i in range(1, spec.k + 1)}
    reserved |= {f"c{i}" for i in range(1, spec.k + 1)}
    reserved.add(PIVOT.name)
    seen_names = set(reserved) | declared_bases
    if len(declared_bases & reserved) > 0:
        for name in sorted(declared_bases & reserved):
            out.append(Violation(None, "base_generators", f"name {name!r} is reserved"))

    for pos, lvl in enumerate(spec.levels):
        want = pos + 1
        if lvl.index != want:
            out.append(Violation(want, "index", f"expected index {want}, got {lvl.index}"))
        if not lvl.factors:
            out.append(Violation(want, "factors", "factor list must be nonempty"))
        for fpos, factor in enumerate(lvl.factors):
            if len(factor.twists) != want - 1:
                out.append(
                    Violation(
                        want,
                        f"factors[{fpos}].m",
                        f"twist vector must have length {want - 1}, got {len(factor.twists)}",
                    )
                )
            if factor.series.var != PIVOT:
                out.append(
                    Violation(
                        want,
                        f"factors[{fpos}].q",
                        "series must use the reserved pivot variable",
                    )
                )
            used = {
                v.name
                for poly in (factor.series.numerator, factor.series.denominator)
                for v in poly.variables()
                if v.kind == "base"
            }
            missing = used - declared_bases
            for name in sorted(missing):
                out.append(
                    Violation(
                        want,
                        f"factors[{fpos}].q",
                        f"base variable {name!r} is not declared in base_generators",
                    )
                )
        for apos, var in enumerate(lvl.aux):
            if var.kind != "aux":
                out.append(Violation(want, f"aux[{apos}]", f"{var.name!r} is not aux-kind"))
            if var.level != want:
                out.append(
                    Violation(
                        want,
                        f"aux[{apos}]",
                        f"{var.name!r} is attached to level {var.level}, expected {want}",
                    )
                )
            if var.name in seen_names:
                out.append(Violation(want, f"aux[{apos}]", f"name {var.name!r} is not unique"))
            seen_names.add(var.name)
    return out


def validate_tower(spec: TowerSpec) -> None:
    """Raise ``InvalidTowerError`` listing every invariant breach, if any."""
    violations = tower_violations(spec)
    if violations:
        raise InvalidTowerError(violations)


def _lead_plus(factor: TowerFactor) -> int:
    lead = factor.series.leading_exponent
    return max(lead, 0) if lead is not None else 0


@dataclass(frozen=True)
class TruncationRequest:
    """Exactness window for tower-series computations.

    ``tower_orders[i-1] = a`` guarantees exact coefficients of u_i^(-t-1)
    for all t <= a; ``aux_orders`` does the same per auxiliary variable.
    ``degree_cap`` is the derived global truncation bound; it may be raised
    (never lowered) explicitly or via the SEGRE_TOWERS_DEGREE_CAP
    environment variable.  The per-level caps are internal plumbing derived
    alongside it.
    """

    tower_orders: tuple[int, ...]
    aux_orders: tuple[tuple[str, int], ...]
    degree_cap: int
    shift_caps: tuple[int, ...] = field(compare=False)
    incoming: tuple[int, ...] = field(compare=False)

    @classmethod
    def derive(
        cls,
        spec: TowerSpec,
        tower_orders: Sequence[int],
        aux_orders: Mapping[str, int] | None = None,
        degree_cap: int | None = None,
    ) -> "TruncationRequest":
        k = spec.k
        orders = tuple(int(a) for a in tower_orders)
        if len(orders) != k:
            raise ValueError(f"expected {k} tower orders, got {len(orders)}")
        if any(a < 0 for a in orders):
            raise ValueError("tower orders must be non-negative")
        aux_names = [v.name for v in spec.aux_variables()]
        given = dict(aux_orders or {})
        unknown = set(given) - set(aux_names)
        if unknown:
            raise ValueError(f"unknown auxiliary variables: {sorted(unknown)}")
        aux_map = {name: int(given.get(name, 0)) for name in aux_names}
        if any(b < 0 for b in aux_map.values()):
            raise ValueError("auxiliary orders must be non-negative")

        lead_sums = [sum(_lead_plus(f) for f in lvl.factors) for lvl in spec.levels]
        aux_sums = [sum(aux_map[v.name] for v in lvl.aux) for lvl in spec.levels]
        # Per-level shift budget: enough to absorb the window, the level's own
        # positive leading degrees, auxiliary inflow, and every possible dump
        # from the levels above.
        budgets = [0] * k
        for i in range(k, 0, -1):
            above = sum(budgets[i:])
            budgets[i - 1] = lead_sums[i - 1] + orders[i - 1] + 1 + aux_sums[i - 1] + above
        floor = sum(a + 1 for a in orders) + sum(b + 1 for b in aux_map.values())
        floor += max(lead_sums, default=0)
        derived = max(max(budgets, default=0), floor)

        requested = derived
        env = os.environ.get(DEGREE_CAP_ENV)
        if env is not None:
            requested = max(requested, _parse_cap(env, derived))
        if degree_cap is not None:
            if degree_cap < derived:
                raise ValueError(
                    f"degree_cap {degree_cap} is below the derived bound {derived}"
                )
            requested = max(requested, degree_cap)
        pad = requested - derived
        shift_caps = tuple(b + pad for b in budgets)
        incoming = tuple(
            aux_sums[i] + sum(shift_caps[i + 1 :]) + pad for i in range(k)
        )
        return cls(
            tower_orders=orders,
            aux_orders=tuple(sorted(aux_map.items())),
            degree_cap=requested,
            shift_caps=shift_caps,
            incoming=incoming,
        )

    def aux_order(self, name: str) -> int:
        for n, b in self.aux_orders:
            if n == name:
                return b
        raise KeyError(name)


def _parse_cap(raw: str, derived: int) -> int:
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{DEGREE_CAP_ENV} must be an integer, got {raw!r}") from exc
    if value < derived:
        raise ValueError(
            f"{DEGREE_CAP_ENV}={value} is below the derived bound {derived}"
        )
    return value


def _base_weights(spec: TowerSpec) -> dict[VariableId, int]:
    return {base_variable(name): degree for name, degree in spec.base_generators}


def _cap_base(poly: LaurentPoly, spec: TowerSpec) -> LaurentPoly:
    if spec.base_degree_cap is None or not spec.base_generators:
        return poly
    weights = _base_weights(spec)
    cap = spec.base_degree_cap
    return poly.filter_terms(lambda m: m.weighted_degree(weights) <= cap)


def individual_segre(spec: TowerSpec, level: int, min_exponent: int) -> LaurentPoly:
    """Segre series of the single step at ``level``.

    Returns the shifted-factor product as a Laurent polynomial in the
    reserved pivot and the tautological variables c_1..c_{level-1}; pivot
    exponents >= min_exponent are exact.
    """
    validate_tower(spec)
    if not 1 <= level <= spec.k:
        raise ValueError(f"level must be in 1..{spec.k}, got {level}")
    lvl = spec.levels[level - 1]
    pluses = [_lead_plus(f) for f in lvl.factors]
    if any(f.series.numerator.is_zero() for f in lvl.factors):
        return LaurentPoly.zero()
    total_plus = sum(pluses)
    cap = max(total_plus - min_exponent, 0)
    result = LaurentPoly.one()
    remaining = total_plus
    for factor, own in zip(lvl.factors, pluses):
        depth = min_exponent - (total_plus - own)
        expansion = descending_expand(factor.series, depth)
        shift = LaurentPoly(
            (Monomial.of(taut_variable(j + 1)), Fraction(t))
            for j, t in enumerate(factor.twists)
            if t
        )
        result = result * shift_expand(expansion, PIVOT, shift, cap)
        result = _cap_base(result, spec)
        remaining -= own
        floor = min_exponent - remaining
        result = result.filter_terms(lambda m, f=floor: m.exponent(PIVOT) >= f)
    return result


def _window_bounds(
    spec: TowerSpec, req: TruncationRequest
) -> list[tuple[VariableId, int]]:
    bounds = [(tower_variable(i + 1), a) for i, a in enumerate(req.tower_orders)]
    bounds += [(v, req.aux_order(v.name)) for v in spec.aux_variables()]
    return bounds


def _restrict_window(
    poly: LaurentPoly, spec: TowerSpec, req: TruncationRequest
) -> LaurentPoly:
    bounds = _window_bounds(spec, req)

    def keep(m: Monomial) -> bool:
        return all(-a - 1 <= m.exponent(v) <= -1 for v, a in bounds)

    return poly.filter_terms(keep)


def closed_formula_product(
    spec: TowerSpec, req: TruncationRequest, prune: bool = True
) -> LaurentPoly:
    """The closed-formula product before the all-negative projection.

    With ``prune`` the running product is restricted to terms that can still
    reach the requested window, which leaves window coefficients unchanged;
    without it the full truncated product is returned (used by diagnostics
    that inspect the pre-projection series).
    """
    validate_tower(spec)
    result = LaurentPoly.one()
    for i in range(spec.k, 0, -1):
        lvl = spec.levels[i - 1]
        u_i = tower_variable(i)
        a_i = req.tower_orders[i - 1]
        inflow = req.incoming[i - 1]
        pluses = [_lead_plus(f) for f in lvl.factors]
        total_plus = sum(pluses)
        aux_budget = sum(req.aux_order(v.name) for v in lvl.aux)
        future_up = total_plus + aux_budget
        for factor, own in zip(lvl.factors, pluses):
            depth = -(a_i + 1 + inflow + (total_plus - own))
            expansion = rename_variables(
                descending_expand(factor.series, depth), {PIVOT: u_i}
            )
            shift = LaurentPoly(
                (Monomial.of(tower_variable(j + 1)), Fraction(t))
                for j, t in enumerate(factor.twists)
                if t
            )
            result = result * shift_expand(expansion, u_i, shift, req.shift_caps[i - 1])
            result = _cap_base(result, spec)
            future_up -= own
            if prune:
                floor = -a_i - 1 - future_up
                result = result.filter_terms(lambda m, f=floor: m.exponent(u_i) >= f)
        for var in lvl.aux:
            result = result * geometric_expand(var, u_i, req.aux_order(var.name))
            future_up -= req.aux_order(var.name)
            if prune:
                floor = -a_i - 1 - future_up
                result = result.filter_terms(lambda m, f=floor: m.exponent(u_i) >= f)
        if prune:
            result = result.filter_terms(
                lambda m: -a_i - 1 <= m.exponent(u_i) <= -1
            )
    return result


def closed_formula_segre(spec: TowerSpec, req: TruncationRequest) -> LaurentPoly:
    """Tower Segre series by the closed formula, restricted to the window.

    Every returned coefficient is exact; every monomial has strictly
    negative exponent in each tower and auxiliary variable.
    """
    product = closed_formula_product(spec, req, prune=True)
    filter_vars = spec.tower_variables() + spec.aux_variables()
    return _restrict_window(negative_part(product, filter_vars), spec, req)


def stepwise_pushforward(spec: TowerSpec, req: TruncationRequest) -> LaurentPoly:
    """Tower Segre series by explicit level-by-level push-forward.

    Starts from the truncated generating product of all tautological powers
    inside the window and, for each level from the top down, replaces every
    power of that level's tautological class by the matching descending
    coefficient of the level's own Segre series, applying the all-negative
    projection after each step.  No closed-form resummation is used, so this
    serves as an independent oracle for ``closed_formula_segre``.
    """
    validate_tower(spec)
    state = LaurentPoly.one()
    for i in range(1, spec.k + 1):
        lvl = spec.levels[i - 1]
        c_i = taut_variable(i)
        u_i = tower_variable(i)
        a_i = req.tower_orders[i - 1]
        block = LaurentPoly(
            (Monomial(((c_i, g), (u_i, -g - 1))), Fraction(1)) for g in range(a_i + 1)
        )
        state = state * block
        for var in lvl.aux:
            b = req.aux_order(var.name)
            state = state * LaurentPoly(
                (Monomial(((c_i, g), (var, -g - 1))), Fraction(1)) for g in range(b + 1)
            )
    filter_vars = spec.tower_variables() + spec.aux_variables()
    for j in range(spec.k, 0, -1):
        if state.is_zero():
            break
        c_j = taut_variable(j)
        slices: dict[int, dict[Monomial, Fraction]] = {}
        for mono, coeff in state.items():
            gamma = mono.exponent(c_j)
            slices.setdefault(gamma, {})[mono.without({c_j})] = coeff
        gamma_max = max(slices)
        if gamma_max > req.degree_cap:
            raise RuntimeError(
                f"intermediate degree {gamma_max} in {c_j.name} exceeds the "
                f"derived cap {req.degree_cap}"
            )
        series = individual_segre(spec, j, -gamma_max - 1)
        state = LaurentPoly.zero()
        for gamma, terms in slices.items():
            piece = coefficient_of(series, Monomial.of(PIVOT, -gamma - 1), {PIVOT})
            if piece.is_zero():
                continue
            state = state + _cap_base(LaurentPoly(terms) * piece, spec)
        state = negative_part(state, filter_vars)
    return _restrict_window(state, spec, req)


def pushforward_monomial(
    spec: TowerSpec,
    tower_exponents: Sequence[int],
    aux_exponents: Mapping[str, int] | None = None,
) -> LaurentPoly:
    """Push-forward of a tautological monomial, as a polynomial in base variables.

    ``tower_exponents`` gives the power of each level's tautological class;
    ``aux_exponents`` gives powers for the extra copies carried by auxiliary
    variables.  The value is read off as the coefficient of the matching
    all-negative monomial of the closed-formula Segre series.
    """
    exps = tuple(int(a) for a in tower_exponents)
    if any(a < 0 for a in exps):
        raise ValueError("tautological exponents must be non-negative")
    aux = {name: int(b) for name, b in (aux_exponents or {}).items()}
    if any(b < 0 for b in aux.values()):
        raise ValueError("auxiliary exponents must be non-negative")
    req = TruncationRequest.derive(spec, exps, aux)
    series = closed_formula_segre(spec, req)
    entries = [(tower_variable(i + 1), -a - 1) for i, a in enumerate(exps)]
    entries += [
        (v, -req.aux_order(v.name) - 1) for v in spec.aux_variables()
    ]
    target = Monomial(entries)
    over = set(spec.tower_variables()) | set(spec.aux_variables())
    return coefficient_of(series, target, over)


def inverse_chern_series(
    rank: int,
    chern_coeffs: Sequence[LaurentPoly | Fraction | int],
    min_exponent: int,
) -> tuple[RationalFunction1V, LaurentPoly]:
    """Inverse of the degree-weighted Chern polynomial of a rank-r bundle.

    Builds c(V,u) = u^rank + c_1*u^(rank-1) + ... and returns the rational
    function 1/c(V,u) together with its descending expansion down to
    ``min_exponent``.  This is the Segre series of the projectivization of V.
    """
    if rank < 0:
        raise ValueError("rank must be non-negative")
    coeffs = [
        c if isinstance(c, LaurentPoly) else LaurentPoly.constant(c)
        for c in chern_coeffs
    ]
    if len(coeffs) > rank:
        raise ValueError("a rank-r bundle has at most r Chern classes")
    poly = LaurentPoly.variable(PIVOT, rank)
    for t, c in enumerate(coeffs, start=1):
        poly = poly + c * LaurentPoly.variable(PIVOT, rank - t)
    rf = RationalFunction1V(PIVOT, LaurentPoly.one(), poly)
    return rf, descending_expand(rf, min_exponent)


def random_tower_spec(
    rng: random.Random,
    max_k: int = 3,
    max_factors: int = 3,
    twist_bound: int = 2,
    exponent_bound: int = 3,
    max_aux: int = 2,
) -> TowerSpec:
    """A random tower for cross-validation sweeps.

    Twists lie in [-twist_bound, twist_bound], numerator/denominator
    supports within [-exponent_bound, exponent_bound], and every coefficient
    is a small exact rational.  Coefficients stay rational (no base
    generators) so each generated tower serializes through the file format.
    """
    k = rng.randint(1, max_k)
    levels = []
    for i in range(1, k + 1):
        factors = []
        for _ in range(rng.randint(1, max_factors)):
            twists = tuple(rng.randint(-twist_bound, twist_bound) for _ in range(i - 1))
            num_exps = rng.sample(
                range(-exponent_bound, exponent_bound + 1), rng.randint(1, 3)
            )
            num = LaurentPoly(
                (Monomial.of(PIVOT, e), _random_coeff(rng)) for e in num_exps
            )
            lead = rng.randint(0, exponent_bound)
            den = LaurentPoly.variable(PIVOT, lead)
            for e in rng.sample(range(-exponent_bound, lead), rng.randint(0, 2)):
                den = den + LaurentPoly.monomial(Monomial.of(PIVOT, e), _random_coeff(rng))
            factors.append(TowerFactor(twists, RationalFunction1V(PIVOT, num, den)))
        aux = tuple(
            aux_variable(f"w{i}_{t}", i) for t in range(rng.randint(0, max_aux))
        )
        levels.append(TowerLevel(i, tuple(factors), aux))
    return TowerSpec(k, tuple(levels))


def _random_coeff(rng: random.Random) -> Fraction:
    num = rng.choice([n for n in range(-3, 4) if n])
    return Fraction(num, rng.randint(1, 3))

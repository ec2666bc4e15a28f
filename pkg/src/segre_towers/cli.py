"""Command-line front end: spec-file ingestion, computations, verification.

The ``segre-towers`` binary exposes three subcommands:

* ``flag-integral`` evaluates one flag-variety integral (with optional
  cross-checks against the Vandermonde coefficient and the fixed-point sum),
* ``tower-segre`` prints the Segre-series coefficients of a tower read from
  a JSON spec file, by either computation method,
* ``verify`` runs the flag triple-agreement sweep and the randomized
  closed-versus-stepwise corpus, exiting nonzero on any exact mismatch.

Output is deterministic: identical inputs and seeds produce byte-identical
text, and all rationals are printed exactly as ``num/den`` in lowest terms.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import flag as flag_mod
from .series import LaurentPoly, Monomial, RationalFunction1V, VariableId
from .tower import (
    PIVOT,
    InvalidTowerError,
    TowerFactor,
    TowerLevel,
    TowerSpec,
    TruncationRequest,
    aux_variable,
    closed_formula_segre,
    random_tower_spec,
    stepwise_pushforward,
    validate_tower,
)

MAX_VERIFY_K = 4
DEFAULT_SEED = 7
DEFAULT_TRIALS = 3
DEFAULT_TOWERS = 50


def format_rational(value: Fraction) -> str:
    """Exact ``num/den`` in lowest terms; just ``num`` for integers."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class SpecFileError(ValueError):
    """A tower spec file that cannot be decoded; the message names the location."""


# -- tower spec (de)serialization -------------------------------------------


def _poly_to_triples(poly: LaurentPoly, where: str) -> list[list[int]]:
    triples = []
    for mono, coeff in poly.terms():
        exp = mono.exponent(PIVOT)
        if not mono.without({PIVOT}).is_one():
            raise SpecFileError(
                f"{where}: only rational coefficients can be serialized"
            )
        triples.append([exp, coeff.numerator, coeff.denominator])
    return triples


def _poly_from_triples(raw, where: str) -> LaurentPoly:
    if not isinstance(raw, list):
        raise SpecFileError(f"{where}: expected a list of [exp, num, den] triples")
    terms = []
    for pos, item in enumerate(raw):
        if (
            not isinstance(item, list)
            or len(item) != 3
            or not all(isinstance(x, int) for x in item)
        ):
            raise SpecFileError(f"{where}[{pos}]: expected an [exp, num, den] integer triple")
        exp, num, den = item
        if den == 0:
            raise SpecFileError(f"{where}[{pos}]: zero denominator")
        terms.append((Monomial.of(PIVOT, exp), Fraction(num, den)))
    return LaurentPoly(terms)


def tower_spec_to_doc(spec: TowerSpec) -> dict:
    """JSON-ready document for a tower (rational-coefficient factors only)."""
    doc = {
        "k": spec.k,
        "base_generators": [
            {"name": name, "degree": degree} for name, degree in spec.base_generators
        ],
        "levels": [
            {
                "factors": [
                    {
                        "m": list(f.twists),
                        "q_num": _poly_to_triples(
                            f.series.numerator, f"levels[{lvl.index}].factors.q_num"
                        ),
                        "q_den": _poly_to_triples(
                            f.series.denominator, f"levels[{lvl.index}].factors.q_den"
                        ),
                    }
                    for f in lvl.factors
                ],
                "aux": [v.name for v in lvl.aux],
            }
            for lvl in spec.levels
        ],
    }
    if spec.base_degree_cap is not None:
        doc["base_degree_cap"] = spec.base_degree_cap
    return doc


def tower_spec_from_doc(doc) -> TowerSpec:
    """Decode and validate a tower spec document, naming faulty fields."""
    if not isinstance(doc, dict):
        raise SpecFileError("top level: expected a JSON object")
    k = doc.get("k")
    if not isinstance(k, int) or k < 0:
        raise SpecFileError("k: expected a non-negative integer")
    raw_bases = doc.get("base_generators", [])
    if not isinstance(raw_bases, list):
        raise SpecFileError("base_generators: expected a list")
    bases = []
    for pos, item in enumerate(raw_bases):
        if not isinstance(item, dict) or "name" not in item or "degree" not in item:
            raise SpecFileError(f"base_generators[{pos}]: expected {{name, degree}}")
        bases.append((str(item["name"]), item["degree"]))
    raw_levels = doc.get("levels")
    if not isinstance(raw_levels, list):
        raise SpecFileError("levels: expected a list")
    levels = []
    for pos, raw_level in enumerate(raw_levels):
        index = pos + 1
        where = f"levels[{index}]"
        if not isinstance(raw_level, dict):
            raise SpecFileError(f"{where}: expected an object")
        raw_factors = raw_level.get("factors")
        if not isinstance(raw_factors, list):
            raise SpecFileError(f"{where}.factors: expected a list")
        factors = []
        for fpos, raw_factor in enumerate(raw_factors):
            fwhere = f"{where}.factors[{fpos}]"
            if not isinstance(raw_factor, dict):
                raise SpecFileError(f"{fwhere}: expected an object")
            m = raw_factor.get("m")
            if not isinstance(m, list) or not all(isinstance(x, int) for x in m):
                raise SpecFileError(f"{fwhere}.m: expected a list of integers")
            num = _poly_from_triples(raw_factor.get("q_num"), f"{fwhere}.q_num")
            den = _poly_from_triples(raw_factor.get("q_den"), f"{fwhere}.q_den")
            try:
                series = RationalFunction1V(PIVOT, num, den)
            except (ValueError, ZeroDivisionError) as exc:
                raise SpecFileError(f"{fwhere}.q_den: {exc}") from exc
            factors.append(TowerFactor(tuple(m), series))
        raw_aux = raw_level.get("aux", [])
        if not isinstance(raw_aux, list) or not all(isinstance(x, str) for x in raw_aux):
            raise SpecFileError(f"{where}.aux: expected a list of names")
        aux = tuple(aux_variable(name, index) for name in raw_aux)
        levels.append(TowerLevel(index, tuple(factors), aux))
    cap = doc.get("base_degree_cap")
    if cap is not None and (not isinstance(cap, int) or cap < 0):
        raise SpecFileError("base_degree_cap: expected a non-negative integer")
    spec = TowerSpec(k, tuple(levels), tuple(bases), cap)
    validate_tower(spec)
    return spec


def load_tower_spec(path: str) -> TowerSpec:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"{path} is not valid JSON: {exc}") from exc
    return tower_spec_from_doc(doc)


# -- result tables -----------------------------------------------------------


@dataclass(frozen=True)
class ResultTable:
    """Coefficients keyed by exponent tuples, in deterministic row order."""

    header: tuple[str, ...]
    rows: tuple[tuple[tuple[int, ...], str], ...]

    @classmethod
    def from_poly(cls, poly: LaurentPoly, variables: Sequence[VariableId]) -> "ResultTable":
        var_list = list(variables)
        var_set = set(var_list)
        rows = []
        for mono, coeff in poly.items():
            if not mono.without(var_set).is_one():
                raise ValueError(f"term {mono} involves variables outside the table header")
            exps = tuple(mono.exponent(v) for v in var_list)
            rows.append((exps, format_rational(coeff)))
        rows.sort(key=lambda row: row[0])
        return cls(tuple(v.name for v in var_list), tuple(rows))

    def to_text(self) -> str:
        lines = ["\t".join(self.header + ("value",))]
        for exps, value in self.rows:
            lines.append("\t".join([str(e) for e in exps] + [value]))
        return "\n".join(lines)

    def to_json_doc(self) -> dict:
        return {
            "header": list(self.header),
            "rows": [{"exponents": list(exps), "value": value} for exps, value in self.rows],
        }

    @classmethod
    def from_json_doc(cls, doc: dict) -> "ResultTable":
        return cls(
            tuple(doc["header"]),
            tuple(
                (tuple(int(e) for e in row["exponents"]), str(row["value"]))
                for row in doc["rows"]
            ),
        )


# -- verification sweeps -----------------------------------------------------


@dataclass(frozen=True)
class VerifyCase:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def flag_exponent_tuples(k: int) -> list[tuple[int, ...]]:
    """All exponent tuples with entries in 0..k summing to the flag dimension."""
    dim = k * (k + 1) // 2
    out = []

    def rec(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 0:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        for a in range(min(k, remaining) + 1):
            prefix.append(a)
            rec(prefix, remaining - a, slots - 1)
            prefix.pop()

    rec([], dim, k)
    return out


def run_verify(
    max_k: int,
    seed: int,
    trials: int,
    towers: int = DEFAULT_TOWERS,
) -> list[VerifyCase]:
    """Triple-agreement sweep plus the randomized closed-vs-stepwise corpus."""
    if max_k > MAX_VERIFY_K:
        raise ValueError(f"max_k above the configured ceiling {MAX_VERIFY_K}")
    cases: list[VerifyCase] = []

    empty = TowerSpec(0, ())
    req = TruncationRequest.derive(empty, ())
    degenerate_ok = (
        closed_formula_segre(empty, req) == 1 and stepwise_pushforward(empty, req) == 1
    )
    cases.append(
        VerifyCase(
            "degenerate k=0 tower",
            degenerate_ok,
            "closed and stepwise series both equal 1"
            if degenerate_ok
            else "degenerate tower does not reduce to the constant 1",
        )
    )

    for k in range(1, max_k + 1):
        tuples = flag_exponent_tuples(k)
        bad: list[str] = []
        for exps in tuples:
            via_tower = flag_mod.flag_integral(k, exps)
            via_vandermonde = flag_mod.vandermonde_integral(k, exps)
            via_fixed_points = flag_mod.localization_integral(
                k, exps, trials=trials, seed=seed
            )
            if not (via_tower == via_vandermonde == via_fixed_points):
                bad.append(
                    f"a={exps}: tower={format_rational(via_tower)} "
                    f"vandermonde={format_rational(via_vandermonde)} "
                    f"localization={format_rational(via_fixed_points)}"
                )
        cases.append(
            VerifyCase(
                f"flag k={k}",
                not bad,
                f"{len(tuples)} integrals, triple agreement" if not bad else "; ".join(bad),
            )
        )

    rng = random.Random(seed)
    for index in range(1, towers + 1):
        spec = random_tower_spec(rng)
        orders = tuple(rng.randint(0, 2) for _ in range(spec.k))
        aux_orders = {v.name: rng.randint(0, 1) for v in spec.aux_variables()}
        req = TruncationRequest.derive(spec, orders, aux_orders)
        closed = closed_formula_segre(spec, req)
        stepwise = stepwise_pushforward(spec, req)
        name = f"tower {index:02d}/{towers} (k={spec.k}, window={orders}{aux_orders or ''})"
        if closed == stepwise:
            cases.append(
                VerifyCase(name, True, f"{len(closed)} coefficients agree exactly")
            )
        else:
            diff = (closed - stepwise).terms()
            mono, _ = diff[0]
            detail = (
                f"monomial {mono}: closed={format_rational(closed.coefficient(mono))} "
                f"stepwise={format_rational(stepwise.coefficient(mono))}; "
                f"spec={json.dumps(tower_spec_to_doc(spec))}"
            )
            cases.append(VerifyCase(name, False, detail))
    return cases


# -- subcommands -------------------------------------------------------------


def _parse_int_list(raw: str) -> tuple[int, ...]:
    raw = raw.strip()
    if not raw:
        return ()
    try:
        return tuple(int(x) for x in raw.split(","))
    except ValueError as exc:
        raise ValueError(f"expected a comma-separated integer list, got {raw!r}") from exc


def _parse_assignments(raw: str) -> dict[str, int]:
    out: dict[str, int] = {}
    if not raw.strip():
        return out
    for item in raw.split(","):
        name, _, value = item.partition("=")
        if not name or not value:
            raise ValueError(f"expected name=value assignments, got {item!r}")
        out[name.strip()] = int(value)
    return out


def cmd_flag_integral(args) -> int:
    exps = _parse_int_list(args.exps)
    if len(exps) != args.k:
        print(
            f"error: --exps needs exactly {args.k} entries, got {len(exps)}",
            file=sys.stderr,
        )
        return 2
    value = flag_mod.flag_integral(args.k, exps)
    if args.verbose or args.format == "json":
        vdm = flag_mod.vandermonde_integral(args.k, exps)
        loc = flag_mod.localization_integral(
            args.k, exps, trials=args.trials, seed=args.seed
        )
        if args.format == "json":
            print(
                json.dumps(
                    {
                        "value": format_rational(value),
                        "vandermonde": format_rational(vdm),
                        "localization": format_rational(loc),
                        "seed": args.seed,
                        "trials": args.trials,
                    }
                )
            )
        else:
            print(f"# seed: {args.seed}  trials: {args.trials}")
            print(format_rational(value))
            print(f"vandermonde: {format_rational(vdm)}")
            print(f"localization: {format_rational(loc)}")
        if not (value == vdm == loc):
            print("error: cross-check mismatch", file=sys.stderr)
            return 1
        return 0
    print(format_rational(value))
    return 0


def cmd_tower_segre(args) -> int:
    spec = load_tower_spec(args.spec)
    orders = _parse_int_list(args.orders)
    aux_orders = _parse_assignments(args.aux_orders)
    req = TruncationRequest.derive(spec, orders, aux_orders)
    if args.method == "stepwise":
        series = stepwise_pushforward(spec, req)
    else:
        series = closed_formula_segre(spec, req)
    variables = (
        list(spec.tower_variables())
        + list(spec.aux_variables())
        + list(spec.base_variables())
    )
    table = ResultTable.from_poly(series, variables)
    if args.format == "json":
        print(json.dumps(table.to_json_doc()))
    else:
        print(table.to_text())
    return 0


def cmd_verify(args) -> int:
    cases = run_verify(args.max_k, args.seed, args.trials, args.towers)
    ok = all(case.passed for case in cases)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "seed": args.seed,
                    "trials": args.trials,
                    "max_k": args.max_k,
                    "cases": [
                        {"name": c.name, "passed": c.passed, "detail": c.detail}
                        for c in cases
                    ],
                    "passed": ok,
                }
            )
        )
    else:
        print(f"# segre-towers verify  seed: {args.seed}  trials: {args.trials}  max-k: {args.max_k}")
        for case in cases:
            print(case.line())
        passed = sum(1 for c in cases if c.passed)
        print(f"# {passed}/{len(cases)} checks passed")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="segre-towers",
        description="Exact Segre-series push-forwards on projective towers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_flag = sub.add_parser("flag-integral", help="integrate a monomial over a flag variety")
    p_flag.add_argument("--k", type=int, required=True, help="number of tower levels")
    p_flag.add_argument("--exps", required=True, help="comma-separated exponents a_1..a_k")
    p_flag.add_argument("-v", "--verbose", action="store_true", help="print cross-checks")
    p_flag.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_flag.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p_flag.add_argument("--format", choices=("table", "json"), default="table")
    p_flag.set_defaults(func=cmd_flag_integral)

    p_segre = sub.add_parser("tower-segre", help="Segre series of a tower spec file")
    p_segre.add_argument("spec", help="path to a JSON tower spec")
    p_segre.add_argument("--orders", required=True, help="per-level orders a_1,..,a_k")
    p_segre.add_argument(
        "--aux-orders", default="", help="per-aux orders as name=b,name=b"
    )
    p_segre.add_argument("--method", choices=("closed", "stepwise"), default="closed")
    p_segre.add_argument("--format", choices=("table", "json"), default="table")
    p_segre.set_defaults(func=cmd_tower_segre)

    p_verify = sub.add_parser("verify", help="run the cross-validation sweeps")
    p_verify.add_argument("--max-k", type=int, default=3, dest="max_k")
    p_verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_verify.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p_verify.add_argument("--towers", type=int, default=DEFAULT_TOWERS)
    p_verify.add_argument("--format", choices=("table", "json"), default="table")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecFileError, InvalidTowerError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except flag_mod.LocalizationDisagreement as exc:
        print(f"internal-consistency failure: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

"""Command-line front end.

    python cli.py ring-check --ring data/a1.ring
    python cli.py fsig --example a1 --e-max 3
    python cli.py condition-a --example qgor-demo --t-max 5
    python cli.py eq1 --example qgor-demo --n 2 --N 3 --i 2
    python cli.py eq1 --ring data/twisted_cubic.ring
    python cli.py ehk --example regular-2 --ideal "x^2, y"
    python cli.py --self-test --seed 7
"""

import argparse
import json
import logging
import math
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd
from tqdm.contrib.logging import logging_redirect_tqdm

from artinian import is_m_primary, length, length_dense_oracle, random_monomial_ideal, ring_dimension
from conditions import (
    NOT_STABLE,
    IdealTower,
    build_parameter_tower,
    build_qgorenstein_tower,
    condition_a_check,
    condition_b_level,
    condition_equivalence_check,
    is_cofinal,
    tower_cofinality_degrees,
    verify_colon_saturation_identity,
)
from config import (
    DEFAULT_E_MAX,
    DEFAULT_FORMAT,
    DEFAULT_MAX_BASIS,
    DEFAULT_MAX_DEGREE,
    DEFAULT_ORDER,
    DEFAULT_SEED,
    DEFAULT_T_MAX,
    ORDER_NAMES,
    OUTPUT_FORMATS,
    ResourceCaps,
    RunConfig,
)
from errors import AlgebraError, DimensionMismatchError, IdentityMismatchError, ValidationError
from frobenius import (
    Extrapolation,
    check_splitting_identity,
    hk_sequence,
    signature_sequence,
    signature_via_hk_difference,
    splitting_number,
)
from groebner import IdealHandle
from polyring import RingPresentation, order_from_name, parse_polynomial, parse_polynomial_list
from rings import DEFAULT_AN_N, EXAMPLES, ExampleRing, RingDefinition, load_example, load_ring_file

logger = logging.getLogger(__name__)

SELF_TEST_E_MAX = 2
SELF_TEST_ORACLE_SAMPLES = 10
SELF_TEST_ORACLE_RINGS = ((2, ("x", "y")), (3, ("x", "y", "z")))


@dataclass
class Context:
    ring: RingPresentation
    example: Optional[ExampleRing] = None
    definition: Optional[RingDefinition] = None


# Formatting

def format_rational(value) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float) and math.isinf(value):
        return "INFINITE"
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def extrapolation_dict(fit: Optional[Extrapolation]) -> Optional[dict]:
    if fit is None:
        return None
    return {
        "limit": fit.limit,
        "limit_approx": round(float(fit.limit), 6),
        "slope": fit.slope,
        "max_residual": fit.residual,
        "points": fit.points,
        "method": fit.method,
        "intercept_stderr": None if fit.intercept_stderr is None else round(fit.intercept_stderr, 9),
    }


def emit(report: dict, rows: List[dict], config: RunConfig):
    if config.output_format == "csv":
        text = pd.DataFrame(_jsonable(rows)).to_csv(index=False)
    else:
        text = json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"
    if config.output_path:
        config.output_path.write_text(text, encoding="utf-8")
        print(f"Report written to {config.output_path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


# Inputs

def run_config(args) -> RunConfig:
    caps = ResourceCaps(args.max_basis, args.max_degree)
    return RunConfig(
        e_max=args.e_max,
        t_max=args.t_max,
        order=args.order,
        caps=caps,
        output_format=args.format,
        output_path=Path(args.out) if args.out else None,
        seed=args.seed,
    )


def load_context(args, config: RunConfig) -> Context:
    order = order_from_name(config.order)
    if args.example and args.ring:
        raise ValidationError("give either --example or --ring, not both")
    if args.example:
        example = load_example(args.example, args.p, args.an_n, config.caps, order)
        return Context(example.ring, example=example)
    if args.ring:
        definition = load_ring_file(args.ring)
        if args.p and args.p != definition.p:
            raise ValidationError(f"--p {args.p} disagrees with p = {definition.p} in {args.ring}")
        return Context(definition.presentation(config.caps, order), definition=definition)
    raise ValidationError("a ring is required: use --example NAME or --ring FILE")


def load_tower(args, context: Context) -> IdealTower:
    if args.params:
        params = parse_polynomial_list(args.params, context.ring)
        socle_rep = parse_polynomial(args.socle, context.ring) if args.socle else None
        return build_parameter_tower(context.ring, params, socle_rep)
    if context.example is not None:
        return context.example.tower()
    data = context.definition.qgorenstein_data(context.ring)
    if data is not None:
        return build_qgorenstein_tower(data)
    raise ValidationError("a ring file needs --params (and optionally --socle) to define a tower")


# Commands

def cmd_ring_check(args, config: RunConfig) -> Tuple[dict, List[dict]]:
    context = load_context(args, config)
    ring = context.ring
    print(f"Checking {ring}...", file=sys.stderr)
    d = ring_dimension(ring)
    declared = context.definition.dimension if context.definition else None
    if context.example is not None:
        declared = context.example.dimension
    if declared is not None and declared != d:
        raise DimensionMismatchError(f"declared dimension {declared} but computed {d}")
    basis = IdealHandle.zero(ring).groebner_basis()
    row = {
        "ring": ring.label or str(ring),
        "p": ring.p,
        "variables": ",".join(ring.variables),
        "dimension": d,
        "relation_basis_size": len(basis),
        "maximal_ideal_m_primary": is_m_primary(IdealHandle.maximal(ring)),
    }
    report = dict(row, command="ring-check", presentation=str(ring),
                  relation_basis=[str(g) for g in basis])
    return report, [row]


def _signature_rows(estimate) -> List[dict]:
    return [
        {
            "e": row.e,
            "q": row.q,
            "length": row.length,
            "normalized": row.normalized,
            "stable_t": row.stable_t if row.stable else NOT_STABLE,
        }
        for row in estimate.rows
    ]


def cmd_fsig(args, config: RunConfig) -> Tuple[dict, List[dict]]:
    context = load_context(args, config)
    tower = load_tower(args, context)
    print(f"Computing splitting rows for {tower.label}...", file=sys.stderr)
    estimate = signature_sequence(tower, config.e_max, config.t_max, progress=True)
    t_star = max((row.stable_t for row in estimate.rows if row.stable), default=1)
    I = tower.ideal(t_star)
    u = tower.socle_element(t_star)
    difference = signature_via_hk_difference(I, u, config.e_max, progress=True)
    for row in difference.rows:
        direct = splitting_number(I, u, row.q, validate=False)
        if direct != row.length:
            raise IdentityMismatchError(
                f"q = {row.q}: colon length {direct} but length difference {row.length}")
    agree = True
    for tower_row, diff in zip(estimate.rows, difference.rows):
        if tower_row.length == diff.length:
            continue
        agree = False
        if tower_row.stable:
            raise IdentityMismatchError(
                f"q = {tower_row.q}: tower row {tower_row.length} but length difference "
                f"{diff.length} at t = {t_star}")
        logger.warning("q = %d: unstable tower row %d differs from length difference %d at t = %d",
                       tower_row.q, tower_row.length, diff.length, t_star)
    rows = _signature_rows(estimate)
    for row, diff in zip(rows, difference.rows):
        row["hk_difference"] = diff.normalized
    report = {
        "command": "fsig",
        "ring": context.ring.label or str(context.ring),
        "tower": tower.label,
        "dimension": estimate.dimension,
        "rows": rows,
        "signature": extrapolation_dict(estimate.extrapolation),
        "hk_difference_t": t_star,
        "hk_difference": extrapolation_dict(difference.extrapolation),
        "rows_agree": agree,
        "all_stable": estimate.all_stable,
        "truncated": estimate.truncated or difference.truncated,
    }
    return report, rows


def cmd_ehk(args, config: RunConfig) -> Tuple[dict, List[dict]]:
    context = load_context(args, config)
    if not args.ideal:
        raise ValidationError("ehk needs --ideal, e.g. --ideal \"x, y\"")
    I = IdealHandle(context.ring, parse_polynomial_list(args.ideal, context.ring), args.ideal)
    print(f"Computing Hilbert-Kunz rows for ({args.ideal})...", file=sys.stderr)
    estimate = hk_sequence(I, config.e_max, progress=True)
    rows = [
        {"e": row.e, "q": row.q, "length": row.length, "normalized": row.normalized}
        for row in estimate.rows
    ]
    report = {
        "command": "ehk",
        "ring": context.ring.label or str(context.ring),
        "ideal": str(I),
        "dimension": estimate.dimension,
        "rows": rows,
        "e_hk": extrapolation_dict(estimate.extrapolation),
        "truncated": estimate.truncated,
    }
    return report, rows


def cmd_condition_a(args, config: RunConfig) -> Tuple[dict, List[dict]]:
    context = load_context(args, config)
    tower = load_tower(args, context)
    print(f"Checking condition A on {tower.label}...", file=sys.stderr)
    result = condition_a_check(tower, config.e_max, config.t_max, progress=True)
    rows = [
        {
            "e": row.e,
            "q": row.q,
            "t0": row.t0 if row.stable else NOT_STABLE,
            "kernel_length": row.kernel_length,
            "lengths": " ".join(map(str, row.lengths)),
            "fingerprints": " ".join(f[:16] for f in row.fingerprints),
            "chain_ascending": row.chain_ascending,
        }
        for row in result.rows
    ]
    degrees = tower_cofinality_degrees(tower, config.t_max)
    report = {
        "command": "condition-a",
        "tower": tower.label,
        "verdict": result.verdict,
        "scope": result.scope,
        "chain_ascending": result.chain_ascending,
        "cofinality_degrees": degrees,
        "cofinal": is_cofinal(degrees),
        "rows": rows,
    }
    return report, rows


def cmd_condition_b(args, config: RunConfig) -> Tuple[dict, List[dict]]:
    context = load_context(args, config)
    tower = load_tower(args, context)
    print(f"Checking condition B on {tower.label}...", file=sys.stderr)
    levels = [condition_b_level(tower, e, config.t_max) for e in range(1, config.e_max + 1)]
    equivalence = condition_equivalence_check(tower, config.e_max, config.t_max, progress=True)
    rows = []
    for level, eq in zip(levels, equivalence.rows):
        rows.append({
            "e": level.e,
            "q": level.q,
            "kernel_length": level.length,
            "stable_t": level.stable_t if level.stable else NOT_STABLE,
            "condition_a_t0": eq.t0 if eq.t0 is not None else NOT_STABLE,
            "equivalent": eq.holds,
            "discrepancy": eq.discrepancy,
        })
    stable = all(level.stable for level in levels)
    report = {
        "command": "condition-b",
        "tower": tower.label,
        "verdict": {"STABLE_AT": max(level.stable_t for level in levels)} if stable else NOT_STABLE,
        "scope": f"verified up to (e_max={config.e_max}, t_max={config.t_max})",
        "equivalence_holds": equivalence.holds,
        "rows": rows,
    }
    return report, rows


def cmd_eq1(args, config: RunConfig) -> Tuple[dict, List[dict]]:
    context = load_context(args, config)
    if context.example is not None:
        data = context.example.qgorenstein
    else:
        data = context.definition.qgorenstein_data(context.ring)
    if data is None:
        raise ValidationError(
            "eq1 needs Q-Gorenstein data: use --example qgor-demo or a ring file with canonical, "
            "index, principal, parameters and saturating keys")
    print(f"Checking the colon-saturation identity on {data.label}...", file=sys.stderr)
    result = verify_colon_saturation_identity(data, args.n, args.N, args.i)
    row = {
        "n": result.n,
        "N": result.N,
        "i": result.i,
        "verdict": "HOLDS" if result.holds else "FAILS",
        "witness": None if result.witness is None else str(result.witness),
        "saturation_exponent": result.saturation_exponent,
    }
    report = dict(row, command="eq1", ring=data.label, notes=list(result.notes))
    return report, [row]


def self_test_example(example: ExampleRing) -> dict:
    """Validate one registry entry: dimension, tower, splitting identity, cofinality"""
    checks = {}
    checks["dimension"] = ring_dimension(example.ring) == example.dimension
    tower = example.tower()
    checks["tower"] = True
    identity = check_splitting_identity(tower.ideal(1), tower.socle_element(1), SELF_TEST_E_MAX)
    checks["splitting_identity"] = all(row.holds for row in identity)
    checks["cofinal"] = is_cofinal(tower_cofinality_degrees(tower, 3))
    if example.qgorenstein is not None:
        result = verify_colon_saturation_identity(example.qgorenstein, 1, 2, 2)
        checks["colon_saturation_identity"] = result.holds
    return {
        "example": example.name,
        "p": example.ring.p,
        "checks": checks,
        "passed": all(checks.values()),
        "splitting_rows": [
            {"q": row.q, "colon": row.colon_length, "bracket": row.bracket_length,
             "enlarged": row.enlarged_length}
            for row in identity
        ],
    }


def self_test_oracles(seed: int) -> dict:
    """Staircase and dense lengths on seeded random monomial ideals"""
    rng = random.Random(seed)
    mismatches = []
    checked = 0
    for p, names in SELF_TEST_ORACLE_RINGS:
        ring = RingPresentation.from_strings(p, names)
        for _ in range(SELF_TEST_ORACLE_SAMPLES):
            I = random_monomial_ideal(rng, ring)
            staircase = length(I)
            dense = length_dense_oracle(I, sum(g.total_degree() for g in I.generators))
            checked += 1
            if staircase != dense:
                mismatches.append({"ideal": str(I), "staircase": staircase, "dense": dense})
    return {"seed": seed, "checked": checked, "mismatches": mismatches, "passed": not mismatches}


def cmd_self_test(args, config: RunConfig) -> Tuple[dict, List[dict]]:
    results = []
    for name in EXAMPLES:
        print(f"Self-testing {name}...", file=sys.stderr)
        try:
            results.append(self_test_example(load_example(name, caps=config.caps)))
        except AlgebraError as err:
            results.append({"example": name, "passed": False, "error": str(err)})
    print(f"Cross-checking lengths with seed {config.seed}...", file=sys.stderr)
    oracles = self_test_oracles(config.seed)
    rows = [{"example": r["example"], "passed": r["passed"]} for r in results]
    rows.append({"example": f"oracles(seed={config.seed})", "passed": oracles["passed"]})
    report = {
        "command": "self-test",
        "passed": all(r["passed"] for r in results) and oracles["passed"],
        "examples": results,
        "oracles": oracles,
    }
    return report, rows


COMMANDS = {
    "ring-check": cmd_ring_check,
    "fsig": cmd_fsig,
    "condition-a": cmd_condition_a,
    "condition-b": cmd_condition_b,
    "eq1": cmd_eq1,
    "ehk": cmd_ehk,
    "self-test": cmd_self_test,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--example", choices=sorted(EXAMPLES), help="built-in example ring")
    common.add_argument("--ring", type=Path, help="ring-definition file")
    common.add_argument("--p", type=int, help="characteristic (examples only)")
    common.add_argument("--an-n", type=int, default=DEFAULT_AN_N, help="n for the an example")
    common.add_argument("--params", help="comma-separated parameters x_1, ..., x_d")
    common.add_argument("--socle", help="socle representative u_1 of (x_1, ..., x_d)")
    common.add_argument("--ideal", help="comma-separated ideal generators")
    common.add_argument("--e-max", type=int, default=DEFAULT_E_MAX)
    common.add_argument("--t-max", type=int, default=DEFAULT_T_MAX)
    common.add_argument("--n", type=int, default=1)
    common.add_argument("--N", type=int, default=2)
    common.add_argument("--i", type=int, default=2)
    common.add_argument("--order", choices=ORDER_NAMES, default=DEFAULT_ORDER)
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=DEFAULT_FORMAT)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--max-basis", type=int, default=DEFAULT_MAX_BASIS)
    common.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for the random self-test ideals")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        description="Exact F-signature and Hilbert-Kunz computations over F_p",
        parents=[common],
        allow_abbrev=False,
    )
    parser.add_argument("--self-test", action="store_true", help="validate every built-in example")
    subparsers = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[common], allow_abbrev=False)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = "self-test" if args.self_test else args.command
    if command is None:
        parser.print_help(sys.stderr)
        return 2
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = run_config(args)
        with logging_redirect_tqdm():
            report, rows = COMMANDS[command](args, config)
        emit(report, rows, config)
    except AlgebraError as err:
        print(f"Error: {err}", file=sys.stderr)
        return err.exit_code
    if command == "self-test" and not report["passed"]:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

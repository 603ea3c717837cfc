"""Command-line front end: every library operation is reachable from a
subcommand, with deterministic, machine-readable output.

Conventions enforced here:

* Numeric parameters are exact 'p/q' or integer strings; decimal input is
  rejected with a hint rather than silently converted.
* Identical invocations produce byte-identical output. Timestamps only
  appear with --meta, and always outside the data block.
* Exit codes: 0 success, 1 usage errors (bad flags, unparseable rationals,
  unknown commands), 2 domain errors (inadmissible inputs, range
  violations, malformed data files).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .bellsim import (
    CONTEXTS,
    MeasurementSettings,
    build_bell_ensemble,
    chsh_value,
    classical_chsh_max,
    decimal_string,
    singlet_correlation,
    spin_operator_oracle,
    tsirelson_gap,
    tsirelson_settings,
    verify_free_choice_on_IU,
    verify_local_causality_on_IU,
)
from .detgen import BitString, generate_bits, seed_from_bits
from .exactnum import (
    DigitString,
    RationalAngle,
    format_rational,
    niven_classify,
    padic_norm,
    padic_valuation,
    parse_rational,
    ultrametric_distance,
)
from .finitestates import (
    ensemble_statistics,
    helix_ensemble,
    make_finite_qubit,
    state_from_dict,
    state_to_dict,
    superpose_classify,
    validate_finite_state,
)
from .ontology import (
    ContextPair,
    SphericalTriangle,
    admissible_contexts,
    context_weight,
    counterfactual_cosine_class,
)

USAGE_EXIT = 1
DOMAIN_EXIT = 2

# Where each library operation surfaces on the command line. The chsh
# report embeds the verifiers, the classical bound and (on request) the
# floating-point oracle; the counterfactual report embeds the context
# machinery; the validate report embeds the qubit/ensemble pipeline.
OPERATION_COVERAGE = {
    "niven_classify": "niven",
    "is_perfect_square": "counterfactual",
    "surd_mul": "counterfactual",
    "ultrametric_distance": "padic",
    "padic_valuation": "padic",
    "validate_finite_state": "validate",
    "make_finite_qubit": "validate",
    "superpose_classify": "superpose",
    "helix_ensemble": "validate",
    "ensemble_statistics": "validate",
    "counterfactual_cosine_class": "counterfactual",
    "admissible_contexts": "counterfactual",
    "context_weight": "counterfactual",
    "singlet_correlation": "chsh",
    "rational_cos_approx": "chsh",
    "build_bell_ensemble": "chsh",
    "chsh_value": "chsh",
    "verify_free_choice_on_IU": "chsh",
    "verify_local_causality_on_IU": "chsh",
    "classical_chsh_max": "chsh",
    "spin_operator_oracle": "chsh",
    "generate_bits": "bits",
    "seed_from_bits": "bits",
}

_BOOLEAN_FLAGS = {"--auto-tsirelson", "--oracle-check", "--periodic", "--qubit", "--meta"}


class UsageError(Exception):
    """Malformed invocation detected past argparse."""


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # Let bare negative fractions like -11/16 pass as values, not flags.
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$")

    # argparse exits with 2 on usage problems; this tool reserves 2 for
    # domain errors, so remap.
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _angle_arg(text: str) -> RationalAngle:
    return RationalAngle(_rational_arg(text))


def _int_list_arg(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated integer list") from exc


def _bits_arg(text: str) -> BitString:
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"{text!r} is not a string over 0/1")
    return BitString(tuple(int(ch) for ch in text))


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "csv", "plain"), default="json", help="output format"
    )
    common.add_argument("--output", metavar="PATH", help="write output to a file instead of stdout")
    common.add_argument(
        "--meta", action="store_true", help="attach run metadata outside the data block"
    )
    common.add_argument(
        "--config",
        metavar="PATH",
        help="load 'key = value' defaults (same keys as the long flags)",
    )

    parser = _Parser(prog="exactbell", description=__doc__)
    parser.add_argument("--version", action="version", version=f"exactbell {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = commands.add_parser("niven", parents=[common], help="classify cos of a rational turn")
    p.add_argument("turns", type=_angle_arg, help="angle as a fraction of a full turn, e.g. 1/6")
    p.set_defaults(handler=cmd_niven)

    p = commands.add_parser(
        "counterfactual",
        parents=[common],
        help="classify the counterfactual third-side cosine of a measurement triangle",
    )
    p.add_argument("--cos-a", type=_rational_arg, required=True, help="cosine of the realized arc")
    p.add_argument("--cos-b", type=_rational_arg, required=True, help="cosine of the prepared arc")
    p.add_argument("--gamma", type=_angle_arg, required=True, help="opening angle in turns")
    p.add_argument(
        "--weight",
        type=_rational_arg,
        default=Fraction(1),
        help="base weight to propagate through the context table (default 1)",
    )
    p.set_defaults(handler=cmd_counterfactual)

    p = commands.add_parser(
        "superpose",
        parents=[common],
        help="classify the normalized sum of two equal-weight states",
    )
    p.add_argument("phi1", type=_angle_arg, help="first azimuth in turns")
    p.add_argument("phi2", type=_angle_arg, help="second azimuth in turns")
    p.set_defaults(handler=cmd_superpose)

    p = commands.add_parser("chsh", parents=[common], help="exact CHSH report for one N")
    p.add_argument("--N", type=int, required=True, help="grid denominator")
    p.add_argument(
        "--auto-tsirelson",
        action="store_true",
        help="derive the four cosines from the best 1/N approximation of sqrt(1/2)",
    )
    for name in ("cos00", "cos01", "cos10", "cos11"):
        p.add_argument(f"--{name}", type=_rational_arg, help=f"target cosine for context {name[3:]}")
    p.add_argument(
        "--oracle-check",
        action="store_true",
        help="cross-check correlations against the floating-point spin oracle",
    )
    p.set_defaults(handler=cmd_chsh)

    p = commands.add_parser("sweep", parents=[common], help="CHSH reports across several N")
    p.add_argument("--N", type=_int_list_arg, required=True, help="comma-separated N values")
    p.add_argument("--auto-tsirelson", action="store_true")
    for name in ("cos00", "cos01", "cos10", "cos11"):
        p.add_argument(f"--{name}", type=_rational_arg)
    p.set_defaults(handler=cmd_sweep)

    p = commands.add_parser("bits", parents=[common], help="doubling-map bit strings")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--from-seed", type=_rational_arg, help="rational seed in [0, 1)")
    group.add_argument("--to-seed", type=_bits_arg, help="bit string to read back into a seed")
    p.add_argument("--count", type=int, help="number of bits to generate (with --from-seed)")
    p.add_argument(
        "--periodic",
        action="store_true",
        help="read the string as one endlessly repeating block (with --to-seed)",
    )
    p.set_defaults(handler=cmd_bits)

    p = commands.add_parser("padic", parents=[common], help="p-adic valuation / digit ultrametric")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--valuation",
        nargs=2,
        metavar=("X", "P"),
        help="p-adic valuation and norm of rational X at prime P",
    )
    group.add_argument(
        "--ultrametric",
        nargs=2,
        metavar=("A", "B"),
        help="distance between two comma-separated digit strings",
    )
    p.add_argument("--base", type=int, help="digit base for --ultrametric")
    p.set_defaults(handler=cmd_padic)

    p = commands.add_parser("validate", parents=[common], help="admissibility diagnostics")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--state", metavar="PATH", help="JSON state file to validate ('-' = stdin)")
    group.add_argument(
        "--qubit",
        action="store_true",
        help="build a qubit from --cos-theta/--phi/--N and report its ensemble",
    )
    p.add_argument("--cos-theta", type=_rational_arg)
    p.add_argument("--phi", type=_angle_arg, default=RationalAngle(Fraction(0)))
    p.add_argument("--N", type=int)
    p.set_defaults(handler=cmd_validate)

    return parser


# --- subcommand handlers -------------------------------------------------


def cmd_niven(args: argparse.Namespace) -> dict:
    result = niven_classify(args.turns)
    return {"cos": format_rational(result.value) if result.is_rational else "irrational"}


def cmd_counterfactual(args: argparse.Namespace) -> dict:
    triangle = SphericalTriangle(args.cos_a, args.cos_b, args.gamma)
    result = counterfactual_cosine_class(triangle)
    realized = ContextPair(0, 0)
    counterfactual = ContextPair(1, 0)
    admissible = sorted(admissible_contexts(realized))
    return {
        "ontic": result.is_ontic,
        "value": format_rational(result.value) if result.is_ontic else "irrational",
        "case": result.case.value,
        "realized_context": _context_str(realized),
        "counterfactual_context": _context_str(counterfactual),
        "admissible_contexts": ";".join(_context_str(c) for c in admissible),
        "counterfactual_weight": format_rational(
            context_weight(args.weight, realized, counterfactual)
        ),
        "complement_weight": format_rational(
            context_weight(args.weight, realized, realized.complement())
        ),
    }


def _context_str(context: ContextPair) -> str:
    return f"{context.x},{context.y}"


def cmd_superpose(args: argparse.Namespace) -> dict:
    result = superpose_classify(args.phi1, args.phi2)
    cos_sq = result.cos_sq_half_polar.value
    return {
        "cos_sq_half_polar": format_rational(cos_sq) if cos_sq is not None else "irrational",
        "cos_polar": format_rational(result.cos_polar) if cos_sq is not None else "irrational",
        "azimuth_turns": format_rational(result.azimuth.turns),
        "finite": result.finite,
    }


def _settings_from_args(args: argparse.Namespace, n_value: int) -> MeasurementSettings:
    if args.auto_tsirelson:
        return tsirelson_settings(n_value)
    cosines = (args.cos00, args.cos01, args.cos10, args.cos11)
    if any(value is None for value in cosines):
        raise UsageError("provide --auto-tsirelson or all four of --cos00/--cos01/--cos10/--cos11")
    return MeasurementSettings(*cosines, n_value)


def _chsh_payload(settings: MeasurementSettings) -> dict:
    ensemble = build_bell_ensemble(settings)
    report = chsh_value(ensemble)
    c00, c01, c10, c11 = CONTEXTS
    payload = {
        "N": settings.N,
        "settings": {
            "cos00": format_rational(settings.cos00),
            "cos01": format_rational(settings.cos01),
            "cos10": format_rational(settings.cos10),
            "cos11": format_rational(settings.cos11),
        },
        "correlations": {
            "E00": format_rational(report.correlations[c00]),
            "E01": format_rational(report.correlations[c01]),
            "E10": format_rational(report.correlations[c10]),
            "E11": format_rational(report.correlations[c11]),
        },
        "marginals_a": {
            _context_str(c): format_rational(report.marginals_a[c]) for c in CONTEXTS
        },
        "marginals_b": {
            _context_str(c): format_rational(report.marginals_b[c]) for c in CONTEXTS
        },
        "S": format_rational(report.s_value),
        "S_decimal": decimal_string(report.s_value),
        "abs_S": format_rational(abs(report.s_value)),
        "classical_bound": format_rational(classical_chsh_max()),
        "tsirelson_reference": report.tsirelson_reference,
        "gap_to_tsirelson": tsirelson_gap(report.s_value),
        "violates_classical_bound": abs(report.s_value) > 2,
        "free_choice_on_invariant_set": verify_free_choice_on_IU(ensemble),
        "local_causality_on_invariant_set": verify_local_causality_on_IU(ensemble),
    }
    return payload


def cmd_chsh(args: argparse.Namespace) -> dict:
    settings = _settings_from_args(args, args.N)
    payload = _chsh_payload(settings)
    if args.oracle_check:
        worst = 0.0
        for context in CONTEXTS:
            cosine = settings.cosine(context)
            exact = singlet_correlation(cosine)
            numeric = spin_operator_oracle(math.acos(float(cosine)), 0.0).singlet_expectation
            worst = max(worst, abs(numeric - float(exact)))
        payload["oracle_max_abs_error"] = f"{worst:.3e}"
    return payload


def cmd_sweep(args: argparse.Namespace) -> dict:
    rows = []
    for n_value in args.N:
        settings = _settings_from_args(args, n_value)
        report = chsh_value(build_bell_ensemble(settings))
        grid_index = settings.cos00 * n_value
        rows.append(
            {
                "N": n_value,
                "n": int(grid_index),
                "S_num": report.s_value.numerator,
                "S_den": report.s_value.denominator,
                "S_decimal": decimal_string(report.s_value),
                "gap_to_tsirelson": tsirelson_gap(report.s_value),
            }
        )
    return {"rows": rows}


def cmd_bits(args: argparse.Namespace) -> dict:
    if args.from_seed is not None:
        if args.count is None:
            raise UsageError("--from-seed needs --count")
        result = generate_bits(args.from_seed, args.count)
        return {
            "seed": format_rational(args.from_seed),
            "count": args.count,
            "bits": str(result),
            "period": result.period,
        }
    seed = seed_from_bits(args.to_seed, periodic=args.periodic)
    return {
        "bits": str(args.to_seed),
        "reading": "periodic" if args.periodic else "finite",
        "seed": format_rational(seed),
    }


def cmd_padic(args: argparse.Namespace) -> dict:
    if args.valuation is not None:
        value_text, prime_text = args.valuation
        value = parse_rational(value_text)
        try:
            prime = int(prime_text)
        except ValueError as exc:
            raise UsageError(f"{prime_text!r} is not an integer prime") from exc
        valuation = padic_valuation(value, prime)
        return {
            "value": format_rational(value),
            "prime": prime,
            "valuation": "inf" if valuation == math.inf else valuation,
            "norm": format_rational(padic_norm(value, prime)),
        }
    if args.base is None:
        raise UsageError("--ultrametric needs --base")
    digits_a = _parse_digits(args.ultrametric[0])
    digits_b = _parse_digits(args.ultrametric[1])
    width = max(len(digits_a), len(digits_b))
    digits_a += (0,) * (width - len(digits_a))
    digits_b += (0,) * (width - len(digits_b))
    distance = ultrametric_distance(
        DigitString(args.base, digits_a), DigitString(args.base, digits_b)
    )
    return {
        "base": args.base,
        "digits_a": ",".join(str(d) for d in digits_a),
        "digits_b": ",".join(str(d) for d in digits_b),
        "distance": format_rational(distance),
    }


def _parse_digits(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part != "")
    except ValueError as exc:
        raise UsageError(f"{text!r} is not a comma-separated digit list") from exc


def cmd_validate(args: argparse.Namespace) -> dict:
    if args.state is not None:
        raw = sys.stdin.read() if args.state == "-" else _read_file(args.state)
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValueError(f"state file is not valid JSON: {exc}") from exc
        state = state_from_dict(data)
        violations = validate_finite_state(state)
        return {"valid": not violations, "violations": violations}
    if args.cos_theta is None or args.N is None:
        raise UsageError("--qubit needs --cos-theta and --N (and optionally --phi)")
    qubit = make_finite_qubit(args.cos_theta, args.phi, args.N)
    state = qubit.to_state()
    violations = validate_finite_state(state)
    strands = helix_ensemble(qubit)
    fraction_zero, fraction_one = ensemble_statistics(strands)
    return {
        "n1": qubit.n1,
        "N": qubit.N,
        "state": state_to_dict(state),
        "valid": not violations,
        "violations": violations,
        "helix_labels": "".join(str(label) for label in strands.labels),
        "fraction_zero": format_rational(fraction_zero),
        "fraction_one": format_rational(fraction_one),
    }


def _read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc


# --- config and rendering -------------------------------------------------


def _apply_config(argv: list[str]) -> list[str]:
    """Expand a --config file into flag tokens injected right after the
    subcommand, so explicit command-line flags still win."""
    path = None
    for index, token in enumerate(argv):
        if token == "--config" and index + 1 < len(argv):
            path = argv[index + 1]
            break
        if token.startswith("--config="):
            path = token.partition("=")[2]
            break
    if path is None:
        return argv
    tokens = _config_tokens(path)
    insert_at = next(
        (i for i, token in enumerate(argv) if not token.startswith("-")), None
    )
    if insert_at is None:
        return argv
    return argv[: insert_at + 1] + tokens + argv[insert_at + 1 :]


def _config_tokens(path: str) -> list[str]:
    tokens: list[str] = []
    for line_number, raw in enumerate(_read_file(path).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{line_number}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        flag = "--" + key.strip().replace("_", "-")
        value = value.strip()
        if flag in _BOOLEAN_FLAGS:
            if value.lower() in ("true", "yes", "1"):
                tokens.append(flag)
            elif value.lower() not in ("false", "no", "0"):
                raise UsageError(f"{path}:{line_number}: {flag} takes true/false, got {value!r}")
        else:
            tokens.extend((flag, value))
    return tokens


def _scalar(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    return str(value)


def _flatten(value: object, prefix: str, out: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key, inner in value.items():
            _flatten(inner, f"{prefix}.{key}" if prefix else str(key), out)
    elif isinstance(value, (list, tuple)):
        if all(not isinstance(item, (dict, list, tuple)) for item in value):
            out.append((prefix, ",".join(_scalar(item) for item in value)))
        else:
            for i, item in enumerate(value):
                _flatten(item, f"{prefix}[{i}]", out)
    else:
        out.append((prefix, _scalar(value)))


def _render(payload: dict, fmt: str, meta: dict | None) -> str:
    if fmt == "json":
        document = {"data": payload, "meta": meta} if meta else payload
        return json.dumps(document, indent=2) + "\n"
    prelude = ""
    if meta:
        prelude = "".join(f"# {key}={value}\n" for key, value in meta.items())
    if fmt == "csv":
        buffer = io.StringIO()
        rows = payload.get("rows")
        if isinstance(rows, list) and rows:
            writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        else:
            flat: list[tuple[str, str]] = []
            _flatten(payload, "", flat)
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow([key for key, _ in flat])
            writer.writerow([value for _, value in flat])
        return prelude + buffer.getvalue()
    flat = []
    _flatten(payload, "", flat)
    body = "".join(f"{key} = {value}\n" for key, value in flat)
    return prelude + body


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        argv = _apply_config(argv)
        args = parser.parse_args(argv)
    except (UsageError, ValueError) as exc:
        print(f"exactbell: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = args.handler(args)
    except UsageError as exc:
        print(f"exactbell: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (ValueError, TypeError) as exc:
        print(f"exactbell: error: {exc}", file=sys.stderr)
        return DOMAIN_EXIT
    meta = None
    if args.meta:
        meta = {
            "tool": f"exactbell {__version__}",
            "generated_at": datetime.now(timezone.utc).isoformat(),
            "argv": " ".join(argv),
        }
    text = _render(payload, args.format, meta)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

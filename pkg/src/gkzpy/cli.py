"""Command-line surface: every command reads a JSON problem file and prints a JSON report.

Exit codes are 0 on success, 1 when ``verify`` finds a surviving residue, 2 for invalid input and
3 for analytic obstructions such as a singular summation direction.
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import mpmath
import sympy
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from . import __version__
from .borel import (
    asymptotic_check,
    borel_transform,
    check_summability_hypotheses,
    laplace_sum,
    singular_directions_example12,
)
from .codec import (
    decode_series,
    dumps,
    encode_annihilation_report,
    encode_asymptotic_report,
    encode_exponent,
    encode_laplace_result,
    encode_scalar,
    encode_series,
    encode_slope_report,
    encode_summability_report,
    encode_triangulation,
    encode_vector,
)
from .errors import GKZError, InputError
from .exactla import ConfigMatrix, RationalVector, Simplex, rational_vector, to_scalar
from .geometry import perturb_weight, regular_triangulation
from .integrand_manager import IntegrandManager
from .logging import Logger, get_default_logger
from .ode import example12_ode
from .precision_manager import PrecisionManager
from .series import (
    Truncation,
    exponents_at_infinity,
    exponents_for_weight,
    generic_parameter_sampler,
    modified_solutions_mod_convergent,
    phi_v,
    psi_v,
)
from .settings import get_settings
from .slopes import (
    modified_slopes_along_T,
    modified_slopes_along_Tinf,
    slopes_along_hyperplane,
    slopes_at_infinity,
)
from .weyl import Modulo, annihilation_report, system_generators

SERIES_KINDS = ("phi", "psi", "mod_convergent", "at_infinity")
LAPLACE_MODES = ("series", "ode")


class TruncationSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    t_order: Optional[int] = Field(default=None, ge=0)
    x_degree: Optional[int] = Field(default=None, ge=0)


class ProblemSpec(BaseModel):
    """A problem file: the matrix, an optional weight and the parameters.

    ``beta`` is either a list of exact scalars or ``"generic"`` / ``"generic:<seed>"``, which asks
    for a deterministic resonance-free sample.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    A: List[List[int]]
    w: Optional[List[int]] = None
    beta: Optional[Union[str, List[Union[int, str]]]] = None
    alpha: Union[int, str] = 0
    truncation: Optional[TruncationSpec] = None
    precision: Optional[int] = Field(default=None, ge=16)

    def __init__(self, **data: Any):
        try:
            super().__init__(**data)
        except ValidationError as e:
            raise InputError(f"Invalid problem spec: {e}") from e
        d, n = len(self.A), len(self.A[0]) if self.A else 0
        if any(len(row) != n for row in self.A):
            raise InputError("Rows of A must have equal length")
        if self.w is not None and len(self.w) != n:
            raise InputError(f"w has length {len(self.w)}, expected {n}")
        if isinstance(self.beta, list) and len(self.beta) != d:
            raise InputError(f"beta has length {len(self.beta)}, expected {d}")
        if isinstance(self.beta, str) and not self.beta.startswith("generic"):
            raise InputError(f"beta must be a list or 'generic:<seed>', got {self.beta!r}")

    def matrix(self) -> ConfigMatrix:
        return ConfigMatrix(self.A)

    def weight(self, required: bool = True) -> Tuple[int, ...]:
        if self.w is None:
            if required:
                raise InputError("This command needs a weight vector w")
            return tuple([0] * len(self.A[0]))
        return tuple(self.w)

    def alpha_value(self) -> Any:
        return to_scalar(self.alpha)

    def resolve_beta(self, seed: Optional[int] = None, logger: Optional[Logger] = None):
        """The parameter vector, sampling it when the file asks for a generic one.

        An explicit ``seed`` wins over one written in the file.
        """
        if self.beta is None:
            raise InputError("This command needs the parameter beta")
        if isinstance(self.beta, list):
            return rational_vector(self.beta)
        _, _, written = self.beta.partition(":")
        if seed is None:
            try:
                seed = int(written) if written.strip() else 0
            except ValueError as e:
                raise InputError(f"Bad seed in beta {self.beta!r}") from e
        return generic_parameter_sampler(
            self.matrix(), get_settings().operator_degree, seed, logger=logger
        )

    def truncation_for(
        self, t_order: Optional[int] = None, x_degree: Optional[int] = None
    ) -> Truncation:
        written = self.truncation or TruncationSpec()
        values = {
            "t_order": t_order if t_order is not None else written.t_order,
            "x_degree": x_degree if x_degree is not None else written.x_degree,
        }
        return Truncation(**{k: v for k, v in values.items() if v is not None})

    def precision_bits(self, override: Optional[int] = None) -> int:
        return override or self.precision or get_settings().precision_bits


def load_spec(path: str) -> ProblemSpec:
    """Read a problem file.

    Raises:
        InputError: If the file is missing, is not JSON or does not describe a problem
    """
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"Cannot read problem file {path}: {e}") from e
    if not isinstance(data, dict):
        raise InputError(f"Problem file {path} must hold a JSON object")
    return ProblemSpec(**data)


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"Cannot read {path}: {e}") from e


def parse_locus(text: str, n: int) -> Tuple[str, Optional[int]]:
    """``hyperplane:j`` / ``infinity:j`` with 1-based j, or ``T`` / ``Tinf``.

    Returns the locus name and the 0-based column.
    """
    if text in ("T", "Tinf"):
        return text, None
    name, _, label = text.partition(":")
    if name not in ("hyperplane", "infinity") or not label.isdigit():
        raise InputError(f"Unknown locus {text!r}; use hyperplane:j, infinity:j, T or Tinf")
    j = int(label)
    if not 1 <= j <= n:
        raise InputError(f"Column label {j} out of range 1..{n}")
    return name, j - 1


def parse_scalars(text: str) -> RationalVector:
    return rational_vector([part.strip() for part in text.split(",") if part.strip()])


def cmd_slopes(spec: ProblemSpec, locus: str, logger: Optional[Logger] = None) -> Dict[str, Any]:
    logger = logger or get_default_logger("gkzpy.cli")
    a = spec.matrix()
    name, j = parse_locus(locus, a.n)
    if name == "hyperplane":
        report = slopes_along_hyperplane(a, j, logger=logger)
    elif name == "infinity":
        report = slopes_at_infinity(a, j, logger=logger)
    elif name == "T":
        report = modified_slopes_along_T(a, spec.weight(), logger=logger)
    else:
        report = modified_slopes_along_Tinf(a, spec.weight(), logger=logger)
    return encode_slope_report(report)


def cmd_triangulate(spec: ProblemSpec, logger: Optional[Logger] = None) -> Dict[str, Any]:
    """Simplices of the perturbed regular triangulation with their volumes and certificates."""
    logger = logger or get_default_logger("gkzpy.cli")
    a = spec.matrix()
    w = spec.weight(required=False)
    triangulation = regular_triangulation(a, perturb_weight(a, w), logger=logger)
    payload = encode_triangulation(triangulation)
    payload["w"] = list(w)
    return payload


def _at_infinity_series(a, beta, j, trunc, logger):
    series = []
    report = slopes_at_infinity(a, j, logger=logger)
    if not report.witnesses:
        raise InputError(f"No slope along x_{j + 1} = infinity, so no series there")
    seen = set()
    for witness in report.witnesses:
        sub = a.matrix.extract(list(range(a.d)), list(witness.facet))
        cells = regular_triangulation(sub, perturb_weight(sub, [0] * sub.cols), logger=logger)
        for cell in cells.simplices:
            indices = tuple(witness.facet[i] for i in cell.indices)
            if indices in seen:
                continue
            seen.add(indices)
            sigma = Simplex.of(a, indices)
            for exponent in exponents_at_infinity(a, beta, sigma, j, logger=logger):
                phi = phi_v(a, exponent, degree=trunc.x_degree, logger=logger)
                series.append(phi.model_copy(update={"gevrey_index": witness.slope}))
    return series


def cmd_series(
    spec: ProblemSpec,
    kind: str,
    locus: Optional[str] = None,
    trunc: Optional[Truncation] = None,
    seed: Optional[int] = None,
    logger: Optional[Logger] = None,
) -> Dict[str, Any]:
    """Truncated series of the requested kind with their exponents and Gevrey indices.

    Raises:
        InputError: If the kind is unknown or the file lacks what the kind needs
        NoSlope: For ``mod_convergent`` when there is no slope along t = 0
    """
    logger = logger or get_default_logger("gkzpy.cli")
    if kind not in SERIES_KINDS:
        raise InputError(f"Unknown series kind {kind!r}")
    a = spec.matrix()
    beta = spec.resolve_beta(seed, logger=logger)
    trunc = trunc or spec.truncation_for()
    payload: Dict[str, Any] = {"kind": kind, "beta": encode_vector(beta)}

    if kind == "phi":
        w = spec.weight(required=False)
        exponents = exponents_for_weight(a, beta, w, logger=logger)
        series = [phi_v(a, e, degree=trunc.x_degree, logger=logger) for e in exponents]
    elif kind == "psi":
        w = spec.weight()
        alpha = spec.alpha_value()
        exponents = exponents_for_weight(a, beta, w, logger=logger)
        series = [psi_v(a, w, alpha, e, trunc, logger=logger) for e in exponents]
        payload.update(w=list(w), alpha=encode_scalar(alpha))
    elif kind == "mod_convergent":
        w = spec.weight()
        alpha = spec.alpha_value()
        result = modified_solutions_mod_convergent(
            a, w, alpha, beta, trunc, strict=True, logger=logger
        )
        series = list(result.series)
        payload.update(w=list(w), alpha=encode_scalar(alpha), slopes=encode_vector(result.slopes))
    else:
        if locus is None:
            raise InputError("at_infinity series need --locus infinity:j")
        name, j = parse_locus(locus, a.n)
        if name != "infinity":
            raise InputError(f"at_infinity series need an infinity locus, got {locus!r}")
        series = _at_infinity_series(a, beta, j, trunc, logger)
        payload["column"] = j + 1

    indices = {s.gevrey_index for s in series if s.gevrey_index is not None}
    payload.update(
        series=[encode_series(s) for s in series],
        count=len(series),
        gevrey_indices=encode_vector(sorted(indices)),
        truncation={"t_order": trunc.t_order, "x_degree": trunc.x_degree},
    )
    logger.info("Built series", kind=kind, count=len(series))
    return payload


def _tolerance(kind: Optional[str], solves_system: bool, column: Optional[int]) -> Modulo:
    if kind == "mod_convergent":
        return "t"
    if kind == "at_infinity" and not solves_system and column is not None:
        return ("x", column)
    return None


def cmd_verify(
    spec: ProblemSpec,
    payload: Dict[str, Any],
    seed: Optional[int] = None,
    logger: Optional[Logger] = None,
) -> Dict[str, Any]:
    """Apply the system's generators to every series of a ``series`` payload.

    Series in t are checked against the modified system, the others against the hypergeometric
    one. Solutions modulo convergent series are accepted up to the terms such solutions leave.
    """
    logger = logger or get_default_logger("gkzpy.cli")
    if not isinstance(payload, dict):
        raise InputError("A series file must hold a JSON object")
    a = spec.matrix()
    beta = spec.resolve_beta(seed, logger=logger)
    if "beta" in payload and rational_vector(payload["beta"]) != beta:
        raise InputError("The series were built for a different beta")
    kind = payload.get("kind")
    column = payload.get("column")
    column = None if column is None else int(column) - 1
    items = payload["series"] if "series" in payload else [payload]

    generators: Dict[bool, List[Any]] = {}
    reports = []
    for item in items:
        series = decode_series(item)
        if series.has_t not in generators:
            if series.has_t:
                generators[True] = system_generators(
                    "modified",
                    a,
                    beta,
                    w=spec.weight(),
                    alpha=spec.alpha_value(),
                    logger=logger,
                )
            else:
                generators[False] = system_generators("hypergeometric", a, beta, logger=logger)
        modulo = _tolerance(kind, series.solves_system, column)
        report = annihilation_report(generators[series.has_t], series, logger=logger)
        entry = encode_annihilation_report(report, modulo)
        if series.exponent is not None:
            entry["exponent"] = encode_exponent(series.exponent)
        reports.append(entry)

    passed = all(entry["passed"] for entry in reports)
    logger.info("Verified series", count=len(reports), passed=passed)
    return {"passed": passed, "count": len(reports), "reports": reports}


def _is_two_column_example(a: ConfigMatrix, w: Sequence[int], alpha: Any) -> bool:
    return a.entries == ((1, 2),) and tuple(w) == (0, 1) and alpha == 0


def cmd_borel(
    spec: ProblemSpec,
    x: Sequence[Any],
    t: Any,
    theta: Any = None,
    mode: Optional[str] = None,
    check: bool = True,
    trunc: Optional[Truncation] = None,
    bits: Optional[int] = None,
    seed: Optional[int] = None,
    precision_policy: Optional[str] = None,
    logger: Optional[Logger] = None,
) -> Dict[str, Any]:
    """Borel transform, Laplace sum and asymptotic check for every modified series of the file.

    ``theta`` defaults to arg t. The ``ode`` mode is available for A = (1 2), w = (0 1) with
    alpha = 0, where the transform satisfies a known second-order equation; it is the default
    there. The asymptotic check repeats the sum at t / 10^k for k = 1..3.

    Raises:
        SingularDirection: If the ray meets a singularity of the transform
        DomainViolation: If t lies outside the summation sector
    """
    logger = logger or get_default_logger("gkzpy.cli")
    a = spec.matrix()
    w = spec.weight()
    alpha = spec.alpha_value()
    beta = spec.resolve_beta(seed, logger=logger)
    if any(b.free_symbols for b in beta):
        raise InputError("Borel sums need a numeric beta")
    trunc = trunc or spec.truncation_for()
    bits = spec.precision_bits(bits)
    x = rational_vector(x)
    t = to_scalar(t)
    theta = sympy.arg(t) if theta is None else to_scalar(theta)

    special = _is_two_column_example(a, w, alpha)
    mode = mode or ("ode" if special else "series")
    if mode not in LAPLACE_MODES:
        raise InputError(f"Unknown Laplace mode {mode!r}")
    options: Dict[str, Any] = {}
    directions: Tuple[Any, ...] = ()
    if special:
        options["ode"] = example12_ode(x, beta[0])
        directions = singular_directions_example12(x)
    integrands = IntegrandManager(logger=logger)
    integrands.resolve(mode, options)

    ceiling = max(bits, get_settings().max_precision_bits)
    policy = PrecisionManager(logger=logger).get_policy(
        precision_policy, start_bits=bits, max_bits=ceiling
    )

    results = []
    with mpmath.workprec(bits):
        for exponent in exponents_for_weight(a, beta, w, logger=logger):
            psi = psi_v(a, w, alpha, exponent, trunc, logger=logger)
            borel = borel_transform(psi, x, logger=logger)
            grid = [t / 10**k for k in range(4)] if check else [t]
            sums = [
                laplace_sum(
                    borel,
                    theta,
                    point,
                    mode=mode,
                    manager=integrands,
                    precision_policy=policy,
                    singular_directions=directions,
                    logger=logger,
                    **options,
                )
                for point in grid
            ]
            entry: Dict[str, Any] = {
                "exponent": encode_exponent(exponent),
                "sum": encode_laplace_result(sums[0]),
            }
            if check:
                report = asymptotic_check(
                    sums, borel.f_values, borel.kappa, borel.gamma, logger=logger
                )
                entry["asymptotic"] = encode_asymptotic_report(report)
            results.append(entry)
    return {
        "x": encode_vector(x),
        "t": encode_scalar(t),
        "theta": encode_scalar(theta),
        "mode": mode,
        "precision_bits": bits,
        "results": results,
    }


def cmd_hypotheses(
    spec: ProblemSpec,
    r: Any = None,
    gamma: Any = None,
    logger: Optional[Logger] = None,
) -> Dict[str, Any]:
    logger = logger or get_default_logger("gkzpy.cli")
    report = check_summability_hypotheses(
        spec.matrix(), spec.weight(), r=r, gamma=gamma, logger=logger
    )
    return encode_summability_report(report)


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="gkzpy",
        description="Slopes, Gevrey series and Borel sums of A-hypergeometric systems.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--spec", required=True, help="Problem file (JSON)")
        layout = p.add_mutually_exclusive_group()
        layout.add_argument("--json", action="store_true", help="Compact JSON output (the default)")
        layout.add_argument("--pretty", action="store_true", help="Indent the JSON output")
        p.add_argument("--seed", type=int, default=None, help="Seed for a generic beta")
        return p

    p = command("slopes", "Slopes along a coordinate hyperplane, at infinity or along t")
    p.add_argument("--locus", required=True, help="hyperplane:j, infinity:j, T or Tinf")

    command("triangulate", "Regular triangulation for the weight w")

    p = command("series", "Truncated series solutions")
    p.add_argument("--kind", choices=SERIES_KINDS, default="psi")
    p.add_argument("--locus", default=None, help="infinity:j for at_infinity series")
    p.add_argument("--t-order", type=int, default=None)
    p.add_argument("--x-degree", type=int, default=None)

    p = command("verify", "Apply the system's generators to series written by 'series'")
    p.add_argument("--series", required=True, help="Output of the series command")

    p = command("borel", "Borel transform and Laplace sum of the modified series")
    p.add_argument("--x", required=True, help="Comma-separated point, e.g. 1,1")
    p.add_argument("--t", required=True, help="Exact point in t, e.g. I/10")
    p.add_argument("--theta", default=None, help="Summation direction, defaults to arg t")
    p.add_argument("--mode", choices=LAPLACE_MODES, default=None)
    p.add_argument("--precision", type=int, default=None, help="Starting precision in bits")
    p.add_argument("--t-order", type=int, default=None)
    p.add_argument("--x-degree", type=int, default=None)
    p.add_argument("--no-check", action="store_true", help="Skip the asymptotic check")
    p.add_argument(
        "--precision-policy",
        choices=("doubling", "fixed"),
        default=None,
        help="Escalate the precision until sums agree (doubling) or run once (fixed)",
    )

    p = command("hypotheses", "Check the hypotheses of the summability theorem")
    p.add_argument("--r", default=None, help="Gevrey index minus one, defaults to the top slope")
    p.add_argument("--gamma", default=None, help="Leading t exponent of the series")

    return parser.parse_args(argv)


def run(args: argparse.Namespace, logger: Logger) -> Tuple[Dict[str, Any], int]:
    spec = load_spec(args.spec)
    if args.command == "slopes":
        return cmd_slopes(spec, args.locus, logger=logger), 0
    if args.command == "triangulate":
        return cmd_triangulate(spec, logger=logger), 0
    if args.command == "series":
        trunc = spec.truncation_for(args.t_order, args.x_degree)
        payload = cmd_series(spec, args.kind, args.locus, trunc, args.seed, logger=logger)
        return payload, 0
    if args.command == "verify":
        payload = cmd_verify(spec, load_json(args.series), args.seed, logger=logger)
        return payload, 0 if payload["passed"] else 1
    if args.command == "borel":
        payload = cmd_borel(
            spec,
            parse_scalars(args.x),
            args.t,
            theta=args.theta,
            mode=args.mode,
            check=not args.no_check,
            trunc=spec.truncation_for(args.t_order, args.x_degree),
            bits=args.precision,
            seed=args.seed,
            precision_policy=args.precision_policy,
            logger=logger,
        )
        return payload, 0
    r = None if args.r is None else to_scalar(args.r)
    gamma = None if args.gamma is None else to_scalar(args.gamma)
    return cmd_hypotheses(spec, r=r, gamma=gamma, logger=logger), 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    logger = get_default_logger("gkzpy.cli").child(args.command)
    try:
        payload, code = run(args, logger)
    except GKZError as e:
        logger.error("Command failed", command=args.command, error=type(e).__name__)
        print(dumps({"error": type(e).__name__, "message": str(e)}, pretty=args.pretty))
        return e.exit_code
    print(dumps(payload, pretty=args.pretty))
    return code


if __name__ == "__main__":
    sys.exit(main())

"""JSON encoding of exact scalars, operators, series and reports.

Exact values are written as strings: rationals as ``"p/q"``, symbols and closed forms in sympy's
spelling, Gaussian rationals as ``[re, im]`` pairs. Numerical values are decimal strings with as
many digits as the working precision carries. Column labels in reports are 1-based.
"""

import json
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath
import sympy

from .borel import AsymptoticReport, LaplaceResult, SummabilityReport
from .errors import InputError
from .exactla import rational_vector, to_scalar
from .geometry import Triangulation
from .series import Exponent, TruncatedSeries, WindowConstraint
from .slopes import SlopeReport
from .weyl import AnnihilationReport, Modulo, WeylOperator


def encode_scalar(value: Any) -> Any:
    """``"p/q"`` for rationals, ``[re, im]`` for Gaussian rationals, sympy text otherwise."""
    value = sympy.sympify(value)
    if value.free_symbols:
        return str(value)
    re, im = value.as_real_imag()
    if im == 0:
        return str(re)
    return [str(re), str(im)]


def encode_vector(values: Sequence[Any]) -> List[Any]:
    return [encode_scalar(v) for v in values]


def decode_scalar(value: Any) -> Any:
    return to_scalar(value)


def _digits() -> int:
    return max(int(mpmath.mp.prec * 0.30103), 15)


def encode_number(value: Any, digits: Optional[int] = None) -> Any:
    """Decimal string for a real number, ``[re, im]`` strings for a complex one."""
    digits = digits or _digits()
    value = mpmath.mpmathify(value)
    if isinstance(value, mpmath.mpc):
        if value.imag == 0:
            return mpmath.nstr(value.real, digits)
        return [mpmath.nstr(value.real, digits), mpmath.nstr(value.imag, digits)]
    return mpmath.nstr(value, digits)


def encode_operator(op: WeylOperator) -> List[Dict[str, Any]]:
    """Terms as ``{"x": a, "d": b, "coeff": c}`` in sorted monomial order."""
    return [
        {"x": list(a), "d": list(b), "coeff": encode_scalar(coeff)}
        for (a, b), coeff in sorted(op.terms.items())
    ]


def decode_operator(items: Sequence[Dict[str, Any]], nvars: Optional[int] = None) -> WeylOperator:
    """Inverse of ``encode_operator``; ``nvars`` is only needed for the zero operator."""
    if nvars is None:
        if not items:
            raise InputError("The zero operator needs an explicit number of variables")
        nvars = len(items[0]["x"])
    try:
        terms = {(tuple(item["x"]), tuple(item["d"])): to_scalar(item["coeff"]) for item in items}
    except (KeyError, TypeError) as e:
        raise InputError(f"Malformed operator term: {e}") from e
    return WeylOperator(nvars, terms)


def encode_exponent(exponent: Exponent) -> Dict[str, Any]:
    return {
        "v": encode_vector(exponent.v),
        "simplex": None if exponent.simplex is None else [i + 1 for i in exponent.simplex],
        "k": None if exponent.k is None else list(exponent.k),
    }


def decode_exponent(data: Dict[str, Any]) -> Exponent:
    simplex = data.get("simplex")
    return Exponent(
        v=rational_vector(data["v"]),
        simplex=None if simplex is None else tuple(int(i) - 1 for i in simplex),
        k=None if data.get("k") is None else tuple(int(x) for x in data["k"]),
    )


def encode_series(series: TruncatedSeries) -> Dict[str, Any]:
    """Terms as ``{"u": ..., "m": ..., "coeff": ...}`` around the base exponent ``v``.

    ``u`` is the x-offset from ``v`` and ``m`` the t-offset from ``gamma``. Series without a
    t-variable carry ``gamma: null`` and ``m: 0`` throughout.
    """
    width = series.nvars - 1 if series.has_t else series.nvars
    return {
        "v": encode_vector(series.base[:width]),
        "gamma": encode_scalar(series.gamma) if series.has_t else None,
        "terms": [
            {
                "u": list(offset[:width]),
                "m": offset[width] if series.has_t else 0,
                "coeff": encode_scalar(coeff),
            }
            for offset, coeff in series.sorted_terms()
        ],
        "window": [
            {"coefficients": list(c.coefficients), "bound": encode_scalar(c.bound)}
            for c in series.window
        ],
        "exponent": None if series.exponent is None else encode_exponent(series.exponent),
        "solves_system": series.solves_system,
        "gevrey_index": (
            None if series.gevrey_index is None else encode_scalar(series.gevrey_index)
        ),
    }


def _decode_term(term: Dict[str, Any], has_t: bool) -> Tuple[int, ...]:
    offset = tuple(int(u) for u in term["u"])
    if has_t:
        offset += (int(term["m"]),)
    elif int(term.get("m", 0)) != 0:
        raise InputError(f"Malformed series: t-offset {term['m']} without gamma")
    return offset


def decode_series(data: Dict[str, Any]) -> TruncatedSeries:
    """Rebuild a series written by ``encode_series``.

    Raises:
        InputError: If a required field is missing or malformed
    """
    try:
        has_t = data.get("gamma") is not None
        base = rational_vector(data["v"])
        if has_t:
            base += (to_scalar(data["gamma"]),)
        terms = {_decode_term(t, has_t): to_scalar(t["coeff"]) for t in data["terms"]}
        window = tuple(
            WindowConstraint(
                coefficients=tuple(int(g) for g in c["coefficients"]), bound=to_scalar(c["bound"])
            )
            for c in data.get("window", [])
        )
        exponent = data.get("exponent")
        gevrey = data.get("gevrey_index")
        return TruncatedSeries(
            base=base,
            terms=terms,
            window=window,
            has_t=has_t,
            exponent=None if exponent is None else decode_exponent(exponent),
            solves_system=bool(data.get("solves_system", True)),
            gevrey_index=None if gevrey is None else to_scalar(gevrey),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed series: {e}") from e


def encode_slope_report(report: SlopeReport) -> Dict[str, Any]:
    return {
        "locus": report.locus_label(),
        "slopes": encode_vector(report.slopes),
        "multiplicity": report.multiplicity,
        "witnesses": [
            {
                "slope": encode_scalar(w.slope),
                "facet": [i + 1 for i in w.facet],
                "covector": encode_vector(w.covector),
                "volume": w.volume,
            }
            for w in report.witnesses
        ],
    }


def encode_triangulation(triangulation: Triangulation) -> Dict[str, Any]:
    simplices = []
    for simplex in triangulation.simplices:
        certificate = triangulation.certificates.get(simplex.indices, ())
        simplices.append(
            {
                "indices": [i + 1 for i in simplex.indices],
                "volume": simplex.volume,
                "certificate": [encode_vector(c) for c in certificate],
            }
        )
    return {"simplices": simplices, "count": triangulation.total_volume}


def encode_summability_report(report: SummabilityReport) -> Dict[str, Any]:
    return {
        "ones_outside_rowspan_a": report.ones_outside_rowspan_a,
        "ones_in_rowspan_aw": report.ones_in_rowspan_aw,
        "ones_in_rowspan_aw_via_image": report.ones_in_rowspan_aw_via_image,
        "r": None if report.r is None else encode_scalar(report.r),
        "r_gamma_not_integer": report.r_gamma_not_integer,
        "kernel_integrality": report.kernel_integrality,
        "passed": report.passed,
    }


def encode_laplace_result(result: LaplaceResult) -> Dict[str, Any]:
    digits = max(int(result.precision * 0.30103), 15)
    return {
        "value": encode_number(result.value, digits),
        "error": encode_number(result.error, 6),
        "theta": encode_number(result.theta, digits),
        "t": encode_number(result.t, digits),
        "zeta_cut": encode_number(result.zeta_cut, 12),
        "precision_bits": result.precision,
        "mode": result.mode,
        "path": result.path,
        "kappa": encode_scalar(result.kappa),
        "gamma": encode_scalar(result.gamma),
        "converged": result.converged,
    }


def encode_asymptotic_report(report: AsymptoticReport) -> Dict[str, Any]:
    return {
        "passed": report.passed,
        "constant": f"{report.constant:.6g}",
        "growth": f"{report.growth:.6g}",
        "slopes": [[n, f"{slope:.4f}"] for n, slope in report.slopes],
        "skipped": list(report.skipped),
        "failures": list(report.failures),
    }


def encode_annihilation_report(
    report: AnnihilationReport, modulo: Modulo = None
) -> Dict[str, Any]:
    return {
        "passed": report.passed(modulo),
        "generators": len(report.residues),
        "modulo": None if modulo is None else (modulo if isinstance(modulo, str) else list(modulo)),
        "failures": [
            {"generator": index, "offset": list(offset), "coefficient": encode_scalar(coeff)}
            for index, offset, coeff in report.failures(modulo)
        ],
    }


def dumps(payload: Any, pretty: bool = False) -> str:
    """Deterministic JSON text: sorted keys, compact unless ``pretty``."""
    if pretty:
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)

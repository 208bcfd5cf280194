"""Borel transforms of modified series, Borel matrices and numerical Laplace sums.

Numerical Borel transforms live in the t-plane: for psi = sum f_l t^(l + gamma) and index
kappa the transform is sum f_l / Gamma(1 + (l + gamma) / kappa) zeta^(l + gamma), and the
Laplace sum along arg(zeta) = theta is

    S(t) = integral_0^inf B(zeta) exp(-(zeta / t)^kappa) d((zeta / t)^kappa).

The exact side works after the substitution t = z^r, where the transform has index 1 and its
coefficients are kept as Gamma ratios.
"""

from typing import Any, Callable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict

from .errors import (
    DomainViolation,
    GammaPole,
    InputError,
    SingularDirection,
)
from .exactla import (
    ConfigMatrix,
    ExtendedMatrix,
    RationalVector,
    Scalar,
    dot,
    in_image_abar,
    integer_kernel_vectors,
    rational_vector,
    rowspan_contains,
    to_scalar,
)
from .integrand_manager import IntegrandManager
from .logging import Logger, get_default_logger
from .precision_manager import PrecisionPolicy
from .series import TruncatedSeries, WindowConstraint, as_mpc, to_mpc
from .settings import get_settings
from .slopes import modified_slopes_along_T


def _is_pole(value: Scalar) -> bool:
    """True iff Gamma has a pole at ``value``."""
    value = sympy.sympify(value)
    return bool(value.is_integer and value <= 0)


class BorelSeries(BaseModel):
    """Numerical Borel transform: coefficients c_l of zeta^(l + gamma) at one point x."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    gamma: Scalar
    kappa: Scalar
    coefficients: Tuple[Any, ...]
    f_values: Tuple[Any, ...]
    precision: int
    x: Tuple[Any, ...]
    gamma_value: Any
    source: Optional[TruncatedSeries] = None

    def evaluate(self, zeta: Any) -> mpmath.mpc:
        zeta = mpmath.mpc(zeta)
        total = mpmath.polyval(list(reversed(self.coefficients)), zeta)
        if self.gamma_value == 0:
            return mpmath.mpc(total)
        return mpmath.mpc(total * mpmath.power(zeta, self.gamma_value))

    def derivative(self, zeta: Any, order: int = 1) -> mpmath.mpc:
        """The ``order``-th zeta-derivative, term by term."""
        if order == 0:
            return self.evaluate(zeta)
        zeta = mpmath.mpc(zeta)
        total = mpmath.mpc(0)
        for ell, c in enumerate(self.coefficients):
            exponent = ell + self.gamma_value
            factor = mpmath.ff(exponent, order)
            if c == 0 or factor == 0:
                continue
            total += c * factor * mpmath.power(zeta, exponent - order)
        return total

    def radius_estimate(self) -> mpmath.mpf:
        """Ratio estimate from the last two nonzero coefficients; infinite for a polynomial."""
        nonzero = [(ell, c) for ell, c in enumerate(self.coefficients) if c != 0]
        if len(nonzero) < 2:
            return mpmath.inf
        (i, ci), (j, cj) = nonzero[-2], nonzero[-1]
        return (abs(ci) / abs(cj)) ** (mpmath.mpf(1) / (j - i))

    def at_precision(self, bits: int) -> "BorelSeries":
        """Recompute the coefficients from the source series at ``bits`` of precision."""
        if bits == self.precision:
            return self
        if self.source is None:
            raise InputError("A Borel series without its source cannot change precision")
        with mpmath.workprec(bits):
            return borel_transform(self.source, self.x, self.kappa)


def borel_transform(
    psi: TruncatedSeries,
    x: Sequence[Any],
    kappa: Any = None,
    logger: Optional[Logger] = None,
) -> BorelSeries:
    """Borel transform of index kappa of a modified series evaluated at x.

    Each layer f_l(x) is summed exactly term by term and rounded at the working precision.

    Args:
        psi: A series in (x, t)
        x: The point, with nonzero coordinates along the exponent's simplex
        kappa: Borel index, defaults to 1 / (s - 1) for the Gevrey index s of ``psi``
        logger: Optional logger

    Raises:
        GammaPole: If 1 + (l + gamma) / kappa is a non-positive integer for some l
        DomainViolation: If a simplex coordinate of x vanishes
    """
    logger = logger or get_default_logger("gkzpy.borel")
    if not psi.has_t:
        raise InputError("Only series in t have a Borel transform")
    if len(x) != psi.nvars - 1:
        raise InputError(f"Expected {psi.nvars - 1} coordinates, got {len(x)}")
    if kappa is None:
        if psi.gevrey_index is None or not psi.gevrey_index > 1:
            raise InputError("The series converges along t = 0; pass kappa explicitly")
        kappa = 1 / (psi.gevrey_index - 1)
    kappa = to_scalar(kappa)
    if not kappa > 0:
        raise InputError(f"kappa must be positive, got {kappa}")
    gamma = psi.gamma
    if gamma.free_symbols:
        raise InputError(f"gamma={gamma} is symbolic; substitute the parameters first")

    point = [as_mpc(value) for value in x]
    if psi.exponent is not None and psi.exponent.simplex is not None:
        indices = [i for i in psi.exponent.simplex if i < len(point)]
    else:
        indices = range(len(point))
    if any(point[i] == 0 for i in indices):
        raise DomainViolation(f"A simplex coordinate of x vanishes: {tuple(x)}")

    orders = psi.t_orders()
    top = orders[-1] if orders else 0
    coefficients, f_values = [], []
    for ell in range(top + 1):
        argument = sympy.expand(1 + (ell + gamma) / kappa)
        if _is_pole(argument):
            raise GammaPole(f"Gamma has a pole at {argument} (l={ell}, gamma={gamma})")
        f = psi.evaluate_layer(ell, point) if ell in orders else mpmath.mpc(0)
        f_values.append(f)
        coefficients.append(f / mpmath.gamma(to_mpc(argument)))
    logger.debug(
        "Borel transform", gamma=gamma, kappa=kappa, terms=len(coefficients), bits=mpmath.mp.prec
    )
    return BorelSeries(
        gamma=gamma,
        kappa=kappa,
        coefficients=tuple(coefficients),
        f_values=tuple(f_values),
        precision=mpmath.mp.prec,
        x=tuple(x),
        gamma_value=to_mpc(gamma),
        source=psi,
    )


def substitute_t_power(psi: TruncatedSeries, r: Any) -> TruncatedSeries:
    """Replace t by z^r in a series in (x, t).

    Raises:
        InputError: If some t-step times r is not an integer
    """
    if not psi.has_t:
        raise InputError("Series has no t variable")
    r = sympy.Rational(to_scalar(r))
    if not r > 0:
        raise InputError(f"r must be positive, got {r}")
    p, q = int(r.p), int(r.q)
    terms = {}
    for offset, coeff in psi.terms.items():
        if offset[-1] % q:
            raise InputError(f"t-step {offset[-1]} times {r} is not an integer")
        terms[offset[:-1] + (offset[-1] * p // q,)] = coeff
    window = tuple(
        WindowConstraint(
            coefficients=tuple(p * g for g in c.coefficients[:-1]) + (q * c.coefficients[-1],),
            bound=p * c.bound,
        )
        for c in psi.window
    )
    return psi.model_copy(
        update={
            "base": psi.base[:-1] + (sympy.expand(r * psi.gamma),),
            "terms": terms,
            "window": window,
            "gevrey_index": None,
        }
    )


def multiply_by_power(series: TruncatedSeries, k: int) -> TruncatedSeries:
    """z^k times a series in (x, z)."""
    if not series.has_t:
        raise InputError("Series has no t variable")
    return series.model_copy(update={"base": series.base[:-1] + (series.base[-1] + k,)})


def formal_borel(series: TruncatedSeries, normalization: Any = None) -> TruncatedSeries:
    """Exact Borel transform of index 1 in the last variable, times Gamma(1 + n0).

    The coefficient of z^(n0 + k) is divided by Gamma(1 + n0 + k) / Gamma(1 + n0), a rising
    factorial for k >= 0 and the reciprocal of one for k < 0. ``n0`` defaults to the base
    exponent of the series and must differ from every exponent by an integer.

    Raises:
        GammaPole: If some exponent s has 1 + s a non-positive integer
    """
    if not series.has_t:
        raise InputError("Series has no t variable")
    base = series.base[-1]
    n0 = base if normalization is None else to_scalar(normalization)
    shift = sympy.expand(base - n0)
    if not shift.is_integer:
        raise InputError(f"Normalization {n0} is not an integer shift of {base}")
    if _is_pole(1 + n0):
        raise GammaPole(f"Gamma has a pole at {1 + n0}")
    terms = {}
    for offset, coeff in series.terms.items():
        exponent = sympy.expand(base + offset[-1])
        if _is_pole(1 + exponent):
            raise GammaPole(f"Gamma has a pole at {1 + exponent}")
        k = int(shift) + offset[-1]
        if k >= 0:
            value = coeff / sympy.rf(1 + n0, k)
        else:
            value = coeff * sympy.rf(1 + n0 + k, -k)
        terms[offset] = sympy.cancel(value)
    return series.model_copy(update={"terms": terms, "gevrey_index": None, "solves_system": True})


def borel_transform_formal(psi: TruncatedSeries, r: Any) -> TruncatedSeries:
    """``formal_borel`` of psi after t = z^r."""
    return formal_borel(substitute_t_power(psi, r))


class BorelSystem(BaseModel):
    """The Borel matrix (A 0; w extra) with its parameter (beta, alpha)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: ExtendedMatrix
    beta: RationalVector
    variant: str

    def normalized(self) -> Tuple[sympy.ImmutableMatrix, RationalVector]:
        """Integer matrix with the last row scaled, and the parameter scaled with it."""
        scale = self.matrix.last_row_scale()
        return self.matrix.normalized_matrix(), self.beta[:-1] + (self.beta[-1] * scale,)


def borel_matrix(
    a: ConfigMatrix,
    w: Sequence[int],
    r_or_kappa: Any,
    beta: Sequence[Any],
    alpha: Any = 0,
    variant: str = "gevrey",
) -> BorelSystem:
    """(A 0; w -1/r) for the ``gevrey`` variant or (A 0; w -kappa) for ``sigma``.

    The parameter is (beta, alpha) in both variants.
    """
    if variant not in ("gevrey", "sigma"):
        raise InputError(f"Unknown Borel matrix variant: {variant}")
    value = to_scalar(r_or_kappa)
    if not (value.is_rational and value > 0):
        raise InputError(f"r must be a positive rational, got {value}")
    extra = -1 / value if variant == "gevrey" else -value
    matrix = ExtendedMatrix(base=a, w=w, kind="AB", extra=extra)
    beta = rational_vector(beta)
    if len(beta) != a.d:
        raise InputError(f"beta has {len(beta)} entries, A has {a.d} rows")
    return BorelSystem(matrix=matrix, beta=beta + (to_scalar(alpha),), variant=variant)


class SummabilityReport(BaseModel):
    """Hypotheses under which the modified series is summable in all but finitely many directions.

    ``r_gamma_not_integer`` is None when no gamma was given.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ones_outside_rowspan_a: bool
    ones_in_rowspan_aw: bool
    ones_in_rowspan_aw_via_image: bool
    r: Optional[Scalar]
    r_gamma_not_integer: Optional[bool]
    kernel_integrality: bool

    @property
    def passed(self) -> bool:
        return (
            self.r is not None
            and self.ones_outside_rowspan_a
            and self.ones_in_rowspan_aw
            and self.kernel_integrality
            and self.r_gamma_not_integer is not False
        )


def check_summability_hypotheses(
    a: ConfigMatrix,
    w: Sequence[int],
    r: Any = None,
    gamma: Any = None,
    bound: Optional[int] = None,
    logger: Optional[Logger] = None,
) -> SummabilityReport:
    """Check the row-span, integrality and gamma conditions for Borel summability.

    ``r`` defaults to s - 1 for the largest modified slope s along t = 0. Kernel vectors are
    enumerated up to 1-norm ``bound``.
    """
    logger = logger or get_default_logger("gkzpy.borel")
    bound = get_settings().operator_degree if bound is None else bound
    w = tuple(int(value) for value in w)
    ones = [1] * a.n
    aw = ExtendedMatrix(base=a, w=w, kind="Aw")
    outside = not rowspan_contains(a, ones)
    in_aw = rowspan_contains(aw, ones)
    via_image = in_image_abar(a, w) and not rowspan_contains(a, w)
    if outside and in_aw != via_image:
        logger.warning("Row span tests disagree", direct=in_aw, via_image=via_image)

    if r is None:
        slopes = modified_slopes_along_T(a, w, logger=logger).slopes
        if len(slopes) > 1:
            logger.info("Several slopes along t = 0, using the largest", slopes=slopes)
        r = slopes[-1] - 1 if slopes else None
    else:
        r = to_scalar(r)

    r_gamma = None
    if gamma is not None and r is not None:
        r_gamma = not sympy.expand(r * to_scalar(gamma)).is_integer
    integral = r is not None and all(
        sympy.expand(r * dot(w, u)).is_integer for u in integer_kernel_vectors(a, bound)
    )
    report = SummabilityReport(
        ones_outside_rowspan_a=outside,
        ones_in_rowspan_aw=in_aw,
        ones_in_rowspan_aw_via_image=via_image,
        r=r,
        r_gamma_not_integer=r_gamma,
        kernel_integrality=integral,
    )
    logger.debug("Summability hypotheses", w=w, r=r, passed=report.passed)
    return report


class LaplaceResult(BaseModel):
    """A Borel sum at one point t, with its error estimate and how it was computed."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: Any
    theta: Any
    t: Any
    error: Any
    precision: int
    zeta_cut: Any
    mode: str
    kappa: Scalar
    gamma: Scalar
    path: str = "ray"
    converged: Optional[bool] = None


def _wrap(angle: Any) -> mpmath.mpf:
    """Reduce an angle to (-pi, pi]."""
    two_pi = 2 * mpmath.pi
    angle = mpmath.mpf(angle) - two_pi * mpmath.floor(mpmath.mpf(angle) / two_pi)
    return angle - two_pi if angle > mpmath.pi else angle


def _angle_tolerance() -> mpmath.mpf:
    return mpmath.mpf(2) ** (-(mpmath.mp.prec // 2))


def laplace_sum(
    borel: BorelSeries,
    theta: Any,
    t: Any,
    mode: Optional[str] = None,
    manager: Optional[IntegrandManager] = None,
    precision_policy: Optional[PrecisionPolicy] = None,
    singular_directions: Sequence[Any] = (),
    logger: Optional[Logger] = None,
    **options: Any,
) -> LaplaceResult:
    """Laplace integral of index kappa of a Borel transform along the ray arg(zeta) = theta.

    The ray is cut where exp(-(zeta / t)^kappa) drops below 2^-(P + 20) and integrated with
    tanh-sinh quadrature. The reported error adds the quadrature estimate, a tail estimate and
    the integrand's own error.

    Args:
        borel: The Borel transform
        theta: Direction of the ray
        t: The point, with |arg t - theta| < pi / (2 kappa)
        mode: Laplace mode, ``series`` when omitted
        manager: Registry of Laplace modes, defaults to the built-in ones
        precision_policy: When given, the sum is repeated at rising precision until stable
        singular_directions: Directions known to carry singularities of the transform
        logger: Optional logger
        **options: Passed to the strategy's ``prepare``

    Raises:
        InputError: If the mode is unknown or lacks its required options
        DomainViolation: If t is zero or outside the sector around theta
        SingularDirection: If a singularity lies on the ray
    """
    logger = logger or get_default_logger("gkzpy.borel")
    manager = manager or IntegrandManager(logger=logger)
    mode, strategy = manager.resolve(mode, options)

    def compute() -> LaplaceResult:
        source = borel.at_precision(mpmath.mp.prec) if borel.source is not None else borel
        theta_mp = mpmath.mpf(as_mpc(theta).real)
        t_mp = as_mpc(t)
        kappa = to_mpc(source.kappa).real
        if t_mp == 0:
            raise DomainViolation("The Borel sum is not defined at t = 0")
        delta = _wrap(mpmath.arg(t_mp) - theta_mp)
        if abs(delta) >= mpmath.pi / (2 * kappa):
            raise DomainViolation(
                f"|arg t - theta| = {mpmath.nstr(abs(delta), 8)} is not below pi/(2 kappa)"
            )
        tolerance = _angle_tolerance()
        for direction in singular_directions:
            if abs(_wrap(as_mpc(direction).real - theta_mp)) < tolerance:
                raise SingularDirection(
                    f"theta={mpmath.nstr(theta_mp, 12)} is a singular direction"
                )

        u_cut = (mpmath.mp.prec + 20) * mpmath.ln2
        zeta_cut = abs(t_mp) * (u_cut / mpmath.cos(kappa * delta)) ** (1 / kappa)
        strategy.prepare(source, theta_mp, zeta_cut, **options)
        for point in strategy.singularities():
            point = mpmath.mpc(point)
            if abs(point) > tolerance and abs(_wrap(mpmath.arg(point) - theta_mp)) < tolerance:
                raise SingularDirection(
                    f"The ray at theta={mpmath.nstr(theta_mp, 12)} meets the singular point "
                    f"{mpmath.nstr(point, 12)}"
                )

        direction = mpmath.expjpi(theta_mp / mpmath.pi)

        def integrand(rho: Any) -> mpmath.mpc:
            s = (rho * direction / t_mp) ** kappa
            return strategy(rho) * mpmath.exp(-s) * kappa * s / rho

        value, quad_error = mpmath.quad(integrand, [0, zeta_cut], error=True)
        tail = 2 * abs(strategy(zeta_cut)) * mpmath.exp(-u_cut) * (1 + u_cut)
        error = (
            quad_error
            + tail
            + (strategy.error_bound() + mpmath.mpf(2) ** (-mpmath.mp.prec + 10)) * abs(value)
        )
        return LaplaceResult(
            value=mpmath.mpc(value),
            theta=theta_mp,
            t=t_mp,
            error=error,
            precision=mpmath.mp.prec,
            zeta_cut=zeta_cut,
            mode=mode,
            kappa=source.kappa,
            gamma=source.gamma,
        )

    with logger.timed("Laplace sum", mode=mode):
        if precision_policy is None:
            result = compute()
        else:
            outcome = precision_policy.execute_with_escalation(compute)
            result = outcome.result.model_copy(
                update={
                    "error": max(outcome.result.error, outcome.difference),
                    "converged": outcome.converged,
                }
            )
    logger.debug(
        "Computed Borel sum",
        mode=mode,
        t=result.t,
        value=result.value,
        error=result.error,
        bits=result.precision,
    )
    return result


class AsymptoticReport(BaseModel):
    """Fitted constants of the Gevrey asymptotic bound and the per-order slope checks.

    ``slopes`` maps N to the log-log slope of the remainder between the two smallest |t| that
    rise above the noise floor.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    passed: bool
    constant: float
    growth: float
    slopes: Tuple[Tuple[int, float], ...]
    skipped: Tuple[int, ...]
    failures: Tuple[str, ...]


def asymptotic_check(
    results: Sequence[LaplaceResult],
    f_values: Sequence[Any],
    kappa: Any,
    gamma: Any,
    n_max: Optional[int] = None,
    logger: Optional[Logger] = None,
) -> AsymptoticReport:
    """Check |t^-gamma S(t) - sum_{l<N} f_l t^l| <= C K^N |t|^N Gamma(1 + N / kappa).

    K comes from a least-squares fit of log(remainder / (|t|^N Gamma(1 + N / kappa))) against N
    and C is the smallest constant that makes every measured remainder fit under the bound.
    Remainders within the numerical noise of a sum are skipped. Each N with two usable points
    must also show the remainder shrinking like |t|^N.
    """
    logger = logger or get_default_logger("gkzpy.borel")
    f = [mpmath.mpc(value) for value in f_values]
    n_max = len(f) if n_max is None else n_max
    if n_max > len(f):
        raise InputError(f"Need {n_max} coefficients, got {len(f)}")
    kappa = as_mpc(kappa).real
    gamma = as_mpc(gamma)

    remainders: List[List[Tuple[mpmath.mpf, mpmath.mpf]]] = [[] for _ in range(n_max + 1)]
    for result in results:
        t = mpmath.mpc(result.t)
        normalized = result.value * mpmath.power(t, -gamma) if gamma != 0 else result.value
        scale = abs(mpmath.power(t, -gamma)) if gamma != 0 else mpmath.mpf(1)
        floor = max(
            10 * result.error * scale,
            mpmath.mpf(2) ** (-result.precision + 24) * abs(normalized),
        )
        partial = mpmath.mpc(0)
        for n in range(1, n_max + 1):
            partial += f[n - 1] * t ** (n - 1)
            remainder = abs(normalized - partial)
            if remainder > floor:
                remainders[n].append((abs(t), remainder))

    slopes, skipped, failures = [], [], []
    orders, logs, scaled_values = [], [], []
    for n in range(1, n_max + 1):
        points = sorted(remainders[n])
        for size, remainder in points:
            scaled = remainder / (size**n * mpmath.gamma(1 + n / kappa))
            orders.append(n)
            logs.append(float(mpmath.log(scaled)))
            scaled_values.append(scaled)
        if len(points) < 2:
            skipped.append(n)
            continue
        (t1, r1), (t2, r2) = points[0], points[1]
        slope = float((mpmath.log(r2) - mpmath.log(r1)) / (mpmath.log(t2) - mpmath.log(t1)))
        slopes.append((n, slope))
        if slope < n - 0.5:
            failures.append(f"N={n}: remainder shrinks like |t|^{slope:.2f}")

    if not orders:
        return AsymptoticReport(
            passed=False,
            constant=float("nan"),
            growth=float("nan"),
            slopes=(),
            skipped=tuple(skipped),
            failures=("no remainder rose above the noise floor",),
        )
    if len(set(orders)) > 1:
        growth = float(np.exp(np.polyfit(np.array(orders), np.array(logs), 1)[0]))
    else:
        growth = 1.0
    constant = max(float(value) / growth**n for n, value in zip(orders, scaled_values))
    finite = bool(np.isfinite(constant) and np.isfinite(growth))
    if not finite:
        failures.append("fitted constants are not finite")
    passed = finite and not failures and bool(slopes)
    logger.info(
        "Asymptotic check",
        passed=passed,
        constant=f"{constant:.6g}",
        growth=f"{growth:.6g}",
        checked=len(slopes),
        skipped=len(skipped),
    )
    return AsymptoticReport(
        passed=passed,
        constant=constant,
        growth=growth,
        slopes=tuple(slopes),
        skipped=tuple(skipped),
        failures=tuple(failures),
    )


def singular_directions_example12(x: Sequence[Any]) -> Tuple[Scalar, ...]:
    """Directions of the singular point x1^2 / (4 x2) of the A = (1 2), w = (0 1) transform.

    Returns 2 arg x1 - arg x2 reduced to (-pi, pi].
    """
    x1, x2 = (to_scalar(value) for value in x)
    if x1 == 0 or x2 == 0:
        raise InputError("Both coordinates must be nonzero")
    angle = sympy.simplify(2 * sympy.arg(x1) - sympy.arg(x2))
    while angle > sympy.pi:
        angle -= 2 * sympy.pi
    while angle <= -sympy.pi:
        angle += 2 * sympy.pi
    return (angle,)


class GrowthSample(BaseModel):
    """|B| sampled along a ray with the fitted exponential rate and power."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    radii: Tuple[float, ...]
    magnitudes: Tuple[float, ...]
    exponential_rate: float
    power: float

    def is_subexponential(self, tolerance: float = 0.1) -> bool:
        return self.exponential_rate < tolerance


def sample_growth(
    integrand: Callable[[Any], Any],
    theta: Any,
    radii: Sequence[Any],
    logger: Optional[Logger] = None,
) -> GrowthSample:
    """Sample |integrand(rho e^(i theta))| and fit log|B| against rho and against log rho.

    An observation only; nothing is certified.
    """
    logger = logger or get_default_logger("gkzpy.borel")
    if len(radii) < 2:
        raise InputError("Need at least two radii")
    direction = mpmath.expjpi(mpmath.mpf(as_mpc(theta).real) / mpmath.pi)
    rho = np.array([float(r) for r in radii])
    magnitudes = np.array([float(abs(integrand(mpmath.mpf(r) * direction))) for r in radii])
    logs = np.log(magnitudes)
    rate = float(np.polyfit(rho, logs, 1)[0])
    power = float(np.polyfit(np.log(rho), logs, 1)[0])
    sample = GrowthSample(
        radii=tuple(rho.tolist()),
        magnitudes=tuple(magnitudes.tolist()),
        exponential_rate=rate,
        power=power,
    )
    if not sample.is_subexponential():
        logger.warning("Borel transform grows exponentially along the ray", rate=f"{rate:.4g}")
    logger.debug("Sampled growth", rate=f"{rate:.4g}", power=f"{power:.4g}")
    return sample

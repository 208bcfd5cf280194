"""Linear ODEs with polynomial coefficients and their Taylor continuation."""

from typing import Any, List, Optional, Sequence, Tuple

import mpmath
import sympy
from pydantic import BaseModel, ConfigDict

from .errors import InputError, StepTooClose
from .exactla import to_scalar
from .logging import Logger, get_default_logger
from .series import as_mpc


def _taylor_shift(coefficients: Sequence[mpmath.mpc], center: mpmath.mpc) -> List[mpmath.mpc]:
    """Coefficients of p(center + h) in h, given those of p in ascending order."""
    shifted = []
    for j in range(len(coefficients)):
        total = mpmath.mpc(0)
        for i in range(j, len(coefficients)):
            total += coefficients[i] * mpmath.binomial(i, j) * center ** (i - j)
        shifted.append(total)
    return shifted


class LinearODE(BaseModel):
    """sum_k p_k(z) y^(k)(z) = 0 with each p_k given by ascending coefficients.

    Coefficients may be exact scalars or mpmath numbers; exact ones are rounded at the precision
    in force when the equation is used.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficients: Tuple[Tuple[Any, ...], ...]

    def __init__(self, coefficients: Sequence[Sequence[Any]], **data: Any):
        coefficients = tuple(tuple(p) for p in coefficients)
        if len(coefficients) < 2:
            raise InputError("An ODE needs at least one derivative")
        if not any(_is_nonzero(c) for c in coefficients[-1]):
            raise InputError("The leading coefficient of an ODE cannot vanish identically")
        super().__init__(coefficients=coefficients, **data)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def numeric(self) -> List[List[mpmath.mpc]]:
        return [[as_mpc(c) for c in p] for p in self.coefficients]

    def singularities(self) -> List[mpmath.mpc]:
        """Roots of the leading coefficient."""
        leading = self.numeric()[-1]
        while leading and leading[-1] == 0:
            leading.pop()
        # factor out z^m so that polyroots sees a nonzero constant term
        zeros = 0
        while leading and leading[0] == 0:
            leading.pop(0)
            zeros += 1
        roots = [mpmath.mpc(0)] if zeros else []
        if len(leading) > 1:
            found = mpmath.polyroots(list(reversed(leading)), maxsteps=200, extraprec=64)
            roots.extend(mpmath.mpc(r) for r in (found if isinstance(found, list) else [found]))
        return roots

    def residual(self, z: Any, derivatives: Sequence[Any]) -> mpmath.mpc:
        """sum_k p_k(z) y^(k) for given values y, y', ..."""
        z = as_mpc(z)
        total = mpmath.mpc(0)
        for p, value in zip(self.numeric(), derivatives):
            total += mpmath.polyval(list(reversed(p)), z) * value
        return total


def _is_nonzero(value: Any) -> bool:
    if isinstance(value, sympy.Basic):
        return value != 0
    return as_mpc(value) != 0


def example12_ode(x: Sequence[Any], beta: Any) -> LinearODE:
    """Equation in zeta satisfied by the Borel transform of the A = (1 2), w = (0 1) series.

    (4 x2 z^2 - x1^2 z) y'' + ((6 - 4 beta) x2 z - x1^2) y' + (beta^2 - beta) x2 y = 0
    """
    x1, x2 = (to_scalar(v) for v in x)
    beta = to_scalar(beta)
    return LinearODE(
        [
            [sympy.expand((beta**2 - beta) * x2)],
            [-(x1**2), sympy.expand((6 - 4 * beta) * x2)],
            [0, -(x1**2), 4 * x2],
        ]
    )


class TaylorPatch(BaseModel):
    """Taylor expansion of the solution around ``center``, trusted within ``radius``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    center: Any
    radius: Any
    coefficients: Tuple[Any, ...]

    def evaluate(self, z: Any, derivative: int = 0) -> mpmath.mpc:
        h = mpmath.mpc(z) - self.center
        if derivative == 0:
            scaled = self.coefficients
        else:
            scaled = [
                mpmath.ff(n, derivative) * self.coefficients[n]
                for n in range(derivative, len(self.coefficients))
            ]
        return mpmath.mpc(mpmath.polyval(list(reversed(scaled)), h))


class ContinuedSolution(BaseModel):
    """Piecewise Taylor representation of a solution along a path."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    patches: Tuple[TaylorPatch, ...]
    order: int

    def patch_for(self, z: Any) -> TaylorPatch:
        """The patch whose trusted disc holds ``z`` most comfortably."""
        z = mpmath.mpc(z)
        best, best_ratio = None, None
        for patch in self.patches:
            ratio = abs(z - patch.center) / patch.radius
            if best_ratio is None or ratio < best_ratio:
                best, best_ratio = patch, ratio
        if best_ratio > 1:
            raise InputError(f"Point {mpmath.nstr(z, 8)} lies off the continuation path")
        return best

    def __call__(self, z: Any, derivative: int = 0) -> mpmath.mpc:
        return self.patch_for(z).evaluate(z, derivative)

    @property
    def end(self) -> Any:
        return self.patches[-1].center

    def error_bound(self) -> mpmath.mpf:
        """Relative truncation error of the Taylor sums, up to a factor 2 per patch."""
        return len(self.patches) * mpmath.mpf(2) ** (-self.order)


def _taylor_coefficients(
    shifted: List[List[mpmath.mpc]], values: Sequence[mpmath.mpc], order: int
) -> List[mpmath.mpc]:
    k_max = len(shifted) - 1
    a = [values[i] / mpmath.factorial(i) for i in range(k_max)]
    lead = shifted[k_max][0]
    for n in range(order - k_max + 1):
        total = mpmath.mpc(0)
        for k, q in enumerate(shifted):
            for j, qj in enumerate(q):
                if (k == k_max and j == 0) or qj == 0:
                    continue
                m = n - j + k
                if m < 0:
                    continue
                total += qj * mpmath.ff(m, k) * a[m]
        a.append(-total / (lead * mpmath.ff(n + k_max, k_max)))
    return a


def ode_continue(
    ode: LinearODE,
    center: Any,
    values: Sequence[Any],
    path: Sequence[Any],
    order: Optional[int] = None,
    step_fraction: Any = "1/2",
    max_steps: int = 2000,
    logger: Optional[Logger] = None,
) -> ContinuedSolution:
    """Continue a solution from initial values at ``center`` along a polygonal path.

    Each step re-expands the solution in a Taylor series and moves at most ``step_fraction``
    of the distance to the nearest singularity.

    Args:
        ode: The equation
        center: Starting point
        values: y, y', ..., y^(order - 1) at ``center``
        path: Vertices to visit in turn, ending at the last one
        order: Number of Taylor terms, defaults to the working precision in bits plus 32
        step_fraction: Largest step as a fraction of the distance to the nearest singularity
        max_steps: Largest number of continuation steps
        logger: Optional logger

    Raises:
        StepTooClose: If the path runs into a singularity
    """
    logger = logger or get_default_logger("gkzpy.ode")
    order = order or mpmath.mp.prec + 32
    fraction = as_mpc(step_fraction).real
    if len(values) != ode.order:
        raise InputError(f"Expected {ode.order} initial values, got {len(values)}")
    coefficients = ode.numeric()
    singular = ode.singularities()
    current = mpmath.mpc(as_mpc(center))
    state = [mpmath.mpc(as_mpc(v)) for v in values]
    tolerance = mpmath.mpf(2) ** (-(mpmath.mp.prec // 2))

    def distance(z: mpmath.mpc) -> mpmath.mpf:
        return min((abs(z - s) for s in singular), default=mpmath.inf)

    patches: List[TaylorPatch] = []
    steps = 0
    for target in [mpmath.mpc(as_mpc(p)) for p in path]:
        while True:
            radius = distance(current)
            scale = max(abs(target - current), abs(current), mpmath.mpf(1))
            if radius <= tolerance * scale:
                raise StepTooClose(f"Continuation reached a singularity near {current}")
            shifted = [_taylor_shift(p, current) for p in coefficients]
            a = _taylor_coefficients(shifted, state, order)
            patch = TaylorPatch(center=current, radius=radius * fraction, coefficients=tuple(a))
            patches.append(patch)
            remaining = abs(target - current)
            if remaining == 0:
                break
            steps += 1
            if steps > max_steps:
                raise StepTooClose(f"Step limit reached near {mpmath.nstr(current, 8)}")
            step = min(remaining, radius * fraction)
            nxt = target if step == remaining else current + (target - current) * step / remaining
            state = [patch.evaluate(nxt, i) for i in range(ode.order)]
            current = nxt
    logger.debug("Continued ODE solution", patches=len(patches), order=order)
    return ContinuedSolution(patches=tuple(patches), order=order)


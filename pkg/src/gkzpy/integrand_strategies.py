"""
Integrand strategies for evaluating Borel transforms along a Laplace ray.
"""

from typing import Any, Callable, List, Optional, Sequence

import mpmath

from .errors import DomainViolation, InputError
from .ode import ContinuedSolution, LinearODE, ode_continue
from .series import as_mpc


class SeriesIntegrand:
    """
    Strategy that sums the truncated Borel series directly.

    Only valid while the ray stays well inside the disc of convergence, which in practice
    means small |t|.
    """

    def __init__(self, max_ratio: Any = "0.5"):
        """
        Initialize the series integrand.

        Args:
            max_ratio: Largest allowed zeta_cut / radius of convergence
        """
        self.max_ratio = mpmath.mpf(max_ratio)
        self.borel = None
        self.direction = mpmath.mpc(1)
        self.zeta_cut = mpmath.mpf(0)
        self.radius = mpmath.inf

    def prepare(self, borel: Any, theta: Any, zeta_cut: Any, **options: Any) -> None:
        """
        Bind the strategy to a Borel transform and an integration ray.

        Args:
            borel: The BorelSeries being summed
            theta: Direction of the ray
            zeta_cut: Radius where the ray is cut off
            **options: Ignored

        Raises:
            DomainViolation: If the ray leaves the region where the truncated series is usable
        """
        self.borel = borel
        self.direction = mpmath.expjpi(mpmath.mpf(theta) / mpmath.pi)
        self.zeta_cut = mpmath.mpf(zeta_cut)
        self.radius = borel.radius_estimate()
        if self.radius != mpmath.inf and self.zeta_cut >= self.max_ratio * self.radius:
            raise DomainViolation(
                f"Cut-off {mpmath.nstr(self.zeta_cut, 8)} is too far out for a Borel series "
                f"with radius {mpmath.nstr(self.radius, 8)}; use a smaller |t| or ode mode"
            )

    def __call__(self, rho: Any) -> mpmath.mpc:
        return self.borel.evaluate(rho * self.direction)

    def singularities(self) -> List[Any]:
        return []

    def error_bound(self) -> mpmath.mpf:
        if self.radius == mpmath.inf:
            return mpmath.mpf(0)
        ratio = self.zeta_cut / self.radius
        return ratio ** len(self.borel.coefficients) / (1 - ratio)


class OdeIntegrand:
    """
    Strategy that continues the Borel transform along the ray with a linear ODE.

    Near the origin the Borel series itself is used; from a seed point on, the solution of the
    caller-supplied equation takes over.
    """

    def __init__(self, step_fraction: Any = "1/2"):
        """
        Initialize the ODE integrand.

        Args:
            step_fraction: Largest continuation step relative to the nearest singularity
        """
        self.step_fraction = step_fraction
        self.borel = None
        self.ode: Optional[LinearODE] = None
        self.order: Optional[int] = None
        self.direction = mpmath.mpc(1)
        self.zeta_cut = mpmath.mpf(0)
        self.rho_seed = mpmath.mpf(0)
        self.solution: Optional[ContinuedSolution] = None

    def prepare(
        self,
        borel: Any,
        theta: Any,
        zeta_cut: Any,
        ode: Optional[LinearODE] = None,
        order: Optional[int] = None,
        **options: Any,
    ) -> None:
        """
        Bind the equation to the ray and choose the seed point.

        The continuation itself runs on the first evaluation past the seed, so singular
        directions can be rejected before any stepping happens.

        Args:
            borel: The BorelSeries being summed
            theta: Direction of the ray
            zeta_cut: Radius where the ray is cut off
            ode: Equation satisfied by the Borel transform in zeta
            order: Taylor order used by the continuation
            **options: Ignored

        Raises:
            InputError: If no equation is given
        """
        if ode is None:
            raise InputError("ode mode needs the equation satisfied by the Borel transform")
        self.borel = borel
        self.ode = ode
        self.order = order
        self.direction = mpmath.expjpi(mpmath.mpf(theta) / mpmath.pi)
        self.zeta_cut = mpmath.mpf(zeta_cut)
        self.solution = None
        radius = borel.radius_estimate()
        terms = max(len(borel.coefficients), 1)
        if radius == mpmath.inf:
            self.rho_seed = self.zeta_cut
            return
        # (rho / R)^N stays below the working precision inside the seed disc
        self.rho_seed = min(radius * mpmath.mpf(2) ** (-mpmath.mp.prec / terms), self.zeta_cut / 2)

    def continued(self) -> ContinuedSolution:
        """
        Continue the seeded solution out to the cut-off, once.

        Raises:
            StepTooClose: If the ray runs into a singularity of the equation
        """
        if self.solution is None:
            seed = self.rho_seed * self.direction
            values = [self.borel.derivative(seed, k) for k in range(self.ode.order)]
            self.solution = ode_continue(
                self.ode,
                seed,
                values,
                [self.zeta_cut * self.direction],
                order=self.order,
                step_fraction=self.step_fraction,
            )
        return self.solution

    def __call__(self, rho: Any) -> mpmath.mpc:
        if rho <= self.rho_seed:
            return self.borel.evaluate(rho * self.direction)
        return self.continued()(rho * self.direction)

    def singularities(self) -> List[Any]:
        return self.ode.singularities() if self.ode is not None else []

    def error_bound(self) -> mpmath.mpf:
        seed_error = mpmath.mpf(2) ** (-mpmath.mp.prec)
        if self.solution is None:
            return seed_error
        return seed_error + self.solution.error_bound()


class ClosedFormIntegrand:
    """
    Strategy wrapping a caller-supplied function of zeta.

    Useful as an independent oracle when the Borel transform is known in closed form.
    """

    def __init__(self):
        """Initialize the closed-form integrand."""
        self.function: Optional[Callable[[Any], Any]] = None
        self.direction = mpmath.mpc(1)
        self._singularities: List[Any] = []

    def prepare(
        self,
        borel: Any,
        theta: Any,
        zeta_cut: Any,
        function: Optional[Callable[[Any], Any]] = None,
        singularities: Sequence[Any] = (),
        **options: Any,
    ) -> None:
        """
        Bind the function to the ray.

        Args:
            borel: Ignored apart from bookkeeping
            theta: Direction of the ray
            zeta_cut: Ignored
            function: Callable returning the Borel transform at a complex zeta
            singularities: Singular points of ``function``
            **options: Ignored

        Raises:
            InputError: If no function is given
        """
        if function is None:
            raise InputError("closed_form mode needs a function of zeta")
        self.function = function
        self.direction = mpmath.expjpi(mpmath.mpf(theta) / mpmath.pi)
        self._singularities = [as_mpc(s) for s in singularities]

    def __call__(self, rho: Any) -> mpmath.mpc:
        return mpmath.mpc(self.function(rho * self.direction))

    def singularities(self) -> List[Any]:
        return list(self._singularities)

    def error_bound(self) -> mpmath.mpf:
        return mpmath.mpf(2) ** (-mpmath.mp.prec)

from typing import Any, List, Protocol, runtime_checkable


@runtime_checkable
class IntegrandStrategy(Protocol):
    """Protocol defining how a Laplace integrand is evaluated along a ray."""

    def prepare(self, borel: Any, theta: Any, zeta_cut: Any, **options: Any) -> None:
        """
        Bind the strategy to a Borel transform and an integration ray.

        Args:
            borel: The BorelSeries being summed
            theta: Direction of the ray arg(zeta) = theta
            zeta_cut: Radius where the ray is cut off
            **options: Strategy-specific options
        """
        ...

    def __call__(self, rho: Any) -> Any:
        """
        Evaluate the Borel transform at zeta = rho * exp(i theta).

        Args:
            rho: Distance from the origin along the ray

        Returns:
            The value at the current working precision
        """
        ...

    def singularities(self) -> List[Any]:
        """
        Known singular points of the Borel transform.

        Returns:
            Points in the zeta-plane, possibly empty when none are known
        """
        ...

    def error_bound(self) -> Any:
        """
        Relative error of the integrand values along the prepared ray.

        Returns:
            A non-negative number
        """
        ...

"""Precision manager for running numeric computations at escalating working precision."""

from typing import Any, Callable, Dict, Optional, Type

import mpmath
from pydantic import BaseModel, ConfigDict

from .errors import InputError
from .logging import DefaultLogger, Logger
from .settings import get_settings


class PrecisionOutcome(BaseModel):
    """The accepted result together with how it was obtained."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    result: Any
    bits: int
    difference: Any
    converged: bool
    attempts: int


class PrecisionPolicy:
    """
    Base class for precision policies with default implementation.

    The computation is repeated at doubled precision until two consecutive values agree within
    the sum of their reported errors. Results must expose ``value`` and ``error``.
    """

    def __init__(
        self,
        start_bits: Optional[int] = None,
        max_bits: Optional[int] = None,
        logger: Optional[Logger] = None,
    ):
        """
        Initialize the precision policy.

        Args:
            start_bits: Precision of the first run, defaults to the configured precision
            max_bits: Ceiling for escalation, defaults to the configured maximum
            logger: Optional logger instance
        """
        settings = get_settings()
        self.start_bits = start_bits or settings.precision_bits
        self.max_bits = max_bits or settings.max_precision_bits
        self.logger = logger or DefaultLogger(name="gkzpy.precision")

    def next_precision(self, bits: int) -> Optional[int]:
        """
        Precision of the next run, or None to stop.

        Args:
            bits: Precision of the run that just finished
        """
        return 2 * bits

    def agrees(self, previous: Any, current: Any) -> bool:
        """
        Determine whether two consecutive results are consistent.

        Args:
            previous: Result at the lower precision
            current: Result at the higher precision

        Returns:
            True if the values differ by no more than the sum of the reported errors
        """
        return abs(current.value - previous.value) <= previous.error + current.error

    def run_at(self, bits: int, func: Callable[..., Any], *args: Any, **kwargs: Any) -> Any:
        """Run ``func`` with the mpmath working precision set to ``bits``."""
        with mpmath.workprec(bits):
            return func(*args, **kwargs)

    def execute_with_escalation(
        self, func: Callable[..., Any], *args: Any, **kwargs: Any
    ) -> PrecisionOutcome:
        """
        Execute a computation with precision escalation.

        Args:
            func: The computation, returning an object with ``value`` and ``error``
            *args: Positional arguments to pass to the function
            **kwargs: Keyword arguments to pass to the function

        Returns:
            The outcome holding the highest-precision result
        """
        bits = self.start_bits
        self.logger.debug("Starting precision escalation", bits=bits)
        previous = self.run_at(bits, func, *args, **kwargs)
        attempts = 1

        while True:
            following = self.next_precision(bits)
            if following is None:
                return PrecisionOutcome(
                    result=previous,
                    bits=bits,
                    difference=mpmath.mpf(0),
                    converged=False,
                    attempts=attempts,
                )
            if following > self.max_bits:
                self.logger.warning(
                    "Precision ceiling reached without agreement", bits=bits, ceiling=self.max_bits
                )
                return PrecisionOutcome(
                    result=previous,
                    bits=bits,
                    difference=mpmath.mpf(0),
                    converged=False,
                    attempts=attempts,
                )

            current = self.run_at(following, func, *args, **kwargs)
            attempts += 1
            with mpmath.workprec(following):
                difference = abs(current.value - previous.value)
                if self.agrees(previous, current):
                    self.logger.debug(
                        "Precision escalation converged", bits=following, difference=difference
                    )
                    return PrecisionOutcome(
                        result=current,
                        bits=following,
                        difference=difference,
                        converged=True,
                        attempts=attempts,
                    )
            self.logger.info(
                "Values disagree, raising precision", bits=following, difference=difference
            )
            previous, bits = current, following


class DoublingPrecisionPolicy(PrecisionPolicy):
    """
    Precision policy that multiplies the precision by a fixed factor.
    """

    def __init__(
        self,
        start_bits: Optional[int] = None,
        max_bits: Optional[int] = None,
        factor: int = 2,
        logger: Optional[Logger] = None,
    ):
        """
        Initialize the doubling precision policy.

        Args:
            start_bits: Precision of the first run
            max_bits: Ceiling for escalation
            factor: Factor by which the precision grows
            logger: Optional logger instance
        """
        super().__init__(start_bits, max_bits, logger)
        if factor < 2:
            raise ValueError(f"Escalation factor must be at least 2, got {factor}")
        self.factor = factor

    def next_precision(self, bits: int) -> Optional[int]:
        return self.factor * bits


class FixedPrecisionPolicy(PrecisionPolicy):
    """
    Precision policy that runs once and never escalates.

    The outcome is reported as not converged since nothing was compared.
    """

    def next_precision(self, bits: int) -> Optional[int]:
        return None


class PrecisionManager:
    """
    Named precision policies for numeric commands.

    ``doubling`` is the default and ``fixed`` runs once at the starting precision.
    """

    DEFAULT_POLICY = "doubling"

    def __init__(self, logger: Optional[Logger] = None):
        """
        Initialize the manager with the built-in policies.

        Args:
            logger: Optional logger instance, handed on to the policies it creates
        """
        self.logger = logger or DefaultLogger(name="gkzpy.precision-manager")
        self._policies: Dict[str, Type[PrecisionPolicy]] = {}
        self.register_policy("doubling", DoublingPrecisionPolicy)
        self.register_policy("fixed", FixedPrecisionPolicy)

    def register_policy(self, name: str, policy_cls: Type[PrecisionPolicy]) -> None:
        """
        Register a precision policy.

        Raises:
            TypeError: If policy_cls is not a subclass of PrecisionPolicy
        """
        if not isinstance(policy_cls, type) or not issubclass(policy_cls, PrecisionPolicy):
            raise TypeError(f"Expected a PrecisionPolicy subclass, got {policy_cls}")
        self._policies[name] = policy_cls
        self.logger.debug("Registered precision policy", name=name)

    def get_policy(self, name: Optional[str] = None, **kwargs: Any) -> PrecisionPolicy:
        """
        A policy instance, the default one when ``name`` is None.

        Args:
            name: Registered policy name
            **kwargs: Constructor arguments such as ``start_bits`` and ``max_bits``

        Raises:
            InputError: If the policy is not registered
        """
        name = name or self.DEFAULT_POLICY
        if name not in self._policies:
            known = ", ".join(sorted(self._policies))
            raise InputError(f"Unknown precision policy {name!r}; known: {known}")
        kwargs.setdefault("logger", self.logger)
        return self._policies[name](**kwargs)

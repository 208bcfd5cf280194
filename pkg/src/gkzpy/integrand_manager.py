"""Selection of the integrand a Laplace sum evaluates along its ray."""

from typing import Any, Dict, Mapping, Optional, Sequence, Tuple, Type

from .errors import InputError
from .integrand_protocol import IntegrandStrategy
from .integrand_strategies import ClosedFormIntegrand, OdeIntegrand, SeriesIntegrand
from .logging import Logger, get_default_logger

OPTION_DESCRIPTIONS = {
    "ode": "the equation satisfied by the Borel transform",
    "function": "a function of zeta",
}


class IntegrandMode:
    """A Laplace mode: the strategy class and the options ``laplace_sum`` must be given."""

    def __init__(self, strategy_cls: Type[IntegrandStrategy], requires: Sequence[str] = ()):
        self.strategy_cls = strategy_cls
        self.requires = tuple(requires)

    def missing(self, options: Mapping[str, Any]) -> Tuple[str, ...]:
        return tuple(name for name in self.requires if options.get(name) is None)


class IntegrandManager:
    """
    Registry of Laplace modes.

    The built-in modes are ``series`` (the default), ``ode``, which needs the equation
    satisfied by the Borel transform, and ``closed_form``, which needs the function itself.
    """

    DEFAULT_MODE = "series"

    def __init__(self, logger: Optional[Logger] = None):
        """
        Initialize the manager with the built-in modes.

        Args:
            logger: Optional logger instance for logging events
        """
        self.logger = logger or get_default_logger("gkzpy.integrand")
        self._modes: Dict[str, IntegrandMode] = {}
        self.register_mode("series", SeriesIntegrand)
        self.register_mode("ode", OdeIntegrand, requires=("ode",))
        self.register_mode("closed_form", ClosedFormIntegrand, requires=("function",))

    def register_mode(
        self, mode: str, strategy_cls: Type[IntegrandStrategy], requires: Sequence[str] = ()
    ) -> None:
        """
        Register a strategy class under a Laplace mode.

        Args:
            mode: Name passed as ``laplace_sum(mode=...)``
            strategy_cls: Class implementing IntegrandStrategy
            requires: Options that must be present for the mode to apply

        Raises:
            TypeError: If strategy_cls is not a class implementing IntegrandStrategy
        """
        if not isinstance(strategy_cls, type):
            raise TypeError(f"Expected a class, got {type(strategy_cls)}")
        if not isinstance(strategy_cls(), IntegrandStrategy):
            raise TypeError(
                f"Class {strategy_cls.__name__} does not implement the IntegrandStrategy protocol"
            )
        self._modes[mode] = IntegrandMode(strategy_cls, requires)
        self.logger.debug("Registered Laplace mode", mode=mode, requires=tuple(requires))

    def resolve(
        self, mode: Optional[str], options: Mapping[str, Any]
    ) -> Tuple[str, IntegrandStrategy]:
        """
        The mode name and a fresh strategy for it.

        Args:
            mode: Requested mode, or None for the default
            options: Keyword options of the Laplace sum

        Raises:
            InputError: If the mode is unknown or its required options are missing
        """
        mode = mode or self.DEFAULT_MODE
        entry = self._modes.get(mode)
        if entry is None:
            known = ", ".join(sorted(self._modes))
            raise InputError(f"Unknown Laplace mode {mode!r}; known: {known}")
        missing = entry.missing(options)
        if missing:
            what = ", ".join(OPTION_DESCRIPTIONS.get(name, name) for name in missing)
            raise InputError(f"{mode} mode needs {what}")
        return mode, entry.strategy_cls()

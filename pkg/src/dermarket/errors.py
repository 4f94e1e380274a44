"""Exception hierarchy.

Class names double as the machine-readable error codes emitted by the CLI,
so they are kept short and stable.
"""


class MarketError(Exception):
    """Base class for every error raised by the package."""


class ScenarioInvalid(MarketError):
    """Structural problem with the scenario inputs."""


class EmptyScenario(ScenarioInvalid):
    def __init__(self) -> None:
        super().__init__("scenario has no prosumers")


class CurvatureNotNegative(ScenarioInvalid):
    def __init__(self, index: int, value: float) -> None:
        self.index = index
        super().__init__(f"prosumers[{index}].a = {value!r} must be < 0")


class NonpositiveSlope(ScenarioInvalid):
    def __init__(self, index: int, value: float) -> None:
        self.index = index
        super().__init__(f"prosumers[{index}].b = {value!r} must be > 0")


class NegativeCapacity(ScenarioInvalid):
    def __init__(self, index: int, value: float) -> None:
        self.index = index
        super().__init__(f"prosumers[{index}].capacity = {value!r} must be >= 0")


class InvalidFleet(ScenarioInvalid):
    pass


class NoActiveProsumer(ScenarioInvalid):
    def __init__(self, marginal_cost: float) -> None:
        super().__init__(
            f"no prosumer has 2*a*capacity + b > marginal cost {marginal_cost!r}"
        )


class PriceOutOfRange(MarketError):
    pass


class AssumptionRangeViolated(MarketError):
    pass


class NonpositiveSupply(MarketError):
    pass


class NoConsistentActiveSet(MarketError):
    pass


class AmbiguousActiveSet(MarketError):
    def __init__(self, sizes: list[int]) -> None:
        self.sizes = sizes
        super().__init__(f"several active-set prefixes are self-consistent: {sizes}")


class ModelMismatch(MarketError):
    pass


class RepresentationMismatch(MarketError):
    pass


class BracketFailure(MarketError):
    pass


class NonConvergence(MarketError):
    pass


class ParseError(MarketError):
    pass


class ValidationError(MarketError):
    """Scenario file parsed, but its contents fail model validation."""

    def __init__(self, cause: ScenarioInvalid) -> None:
        self.cause = cause
        super().__init__(f"{type(cause).__name__}: {cause}")

"""Exception types shared across the package."""


class MoplsError(Exception):
    """Base class for all package errors."""


class DimensionError(MoplsError):
    """Vector lengths do not match the expected dimension."""


class UnsupportedDimensionError(MoplsError):
    """Exact hypervolume requested for k > 3; use the Monte Carlo path."""


class DominatedMemberError(MoplsError):
    """A front passed to a contributions routine contains a dominated point."""


class SelectionStarvationError(MoplsError):
    """Every archive point is tabu; no center can be selected."""

    def __init__(self, iteration: int):
        self.iteration = iteration
        super().__init__(f"no selectable (non-tabu) archive point at iteration {iteration}")


class EvaluationError(MoplsError):
    """An expensive evaluation produced a non-finite objective vector."""


class BatchEvaluationError(MoplsError):
    """An evaluator raised while processing a batch; carries the point index."""

    def __init__(self, index: int, cause: BaseException):
        self.index = index
        self.cause = cause
        super().__init__(f"evaluation failed for batch point {index}: {cause!r}")


class MetricUndefinedError(MoplsError):
    """Hypervolume coverage denominator is degenerate."""

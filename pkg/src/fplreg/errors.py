"""Exception hierarchy shared across the package."""


class FplregError(Exception):
    """Base class for all errors raised by fplreg."""


class GridMismatch(FplregError):
    """Two curves (or curve collections) live on different grids."""


class DomainError(FplregError):
    """An argument lies outside the domain an operation requires."""


class DimensionMismatch(FplregError):
    """Sequence lengths or matrix shapes do not agree."""


class DegenerateData(FplregError):
    """The data admit no meaningful answer (e.g. all curves identical)."""


class EmptyNeighborhood(FplregError):
    """No training curve falls within bandwidth of the query point.

    Carries the distance to the nearest training curve so callers can
    retry with a larger bandwidth.
    """

    def __init__(self, nearest_distance):
        self.nearest_distance = float(nearest_distance)
        super().__init__(
            f"no training curve within bandwidth; nearest is at distance "
            f"{self.nearest_distance:.6g}"
        )


class RankDeficient(FplregError):
    """Fewer usable principal components than requested.

    Carries the achievable rank (number of eigenvalues above the floor).
    """

    def __init__(self, achievable_rank, requested=None):
        self.achievable_rank = int(achievable_rank)
        self.requested = requested
        msg = f"achievable rank is {self.achievable_rank}"
        if requested is not None:
            msg += f", but {requested} components were requested"
        super().__init__(msg)


class InvalidConfig(FplregError):
    """A configuration object or flag combination is inconsistent."""

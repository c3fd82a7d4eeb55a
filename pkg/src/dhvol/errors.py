"""Exception hierarchy shared by all modules."""


class DHVolError(Exception):
    """Base class for library errors."""


class DimensionMismatch(DHVolError, ValueError):
    pass


class PointAtInfinity(DHVolError, ValueError):
    """A model map was asked to send a point to infinity."""


class PointAtInfinityInPolytope(DHVolError, ValueError):
    """The half-space model region is unbounded."""


class SingularDensity(DHVolError, ValueError):
    pass


class NonIntersecting(DHVolError, ValueError):
    """Two half-space boundaries do not cross inside the space."""


class NonConverged(DHVolError, RuntimeError):
    """Quadrature or extrapolation failed to reach the requested tolerance.

    The best available estimate is kept on ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class IdealVertexOnPath(DHVolError, ValueError):
    pass


class CombinatorialChange(DHVolError, ValueError):
    """Face structure differs between the two sides of a finite difference."""


class TangentSlice(DHVolError, ValueError):
    pass


class IllConditioned(DHVolError, RuntimeError):
    pass


class OnBoundary(DHVolError, ValueError):
    pass


class Unsupported(DHVolError, ValueError):
    pass

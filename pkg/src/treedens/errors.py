"""Exception types raised across the package.

Every error is a subclass of :class:`TreedensError` so callers can catch the
package's failures with one except clause; most also subclass the matching
builtin (``ValueError`` and friends) so generic handling keeps working.
"""


class TreedensError(Exception):
    """Base class for all errors raised by treedens."""


class NegativeMass(TreedensError, ValueError):
    """A mass vector contains a negative entry."""


class NotNormalized(TreedensError, ValueError):
    """A mass vector does not sum to 1 within tolerance."""


class BadParam(TreedensError, ValueError):
    """A parameter is outside its documented range."""


class BadParams(BadParam):
    """Several parameters are jointly invalid."""


class OutOfRange(TreedensError, IndexError):
    """An atom or interval lies outside {1, ..., k}."""


class DomainMismatch(TreedensError, ValueError):
    """Two objects that must share a support domain do not."""


class NotMonotone(TreedensError, ValueError):
    """A density required to be non-increasing is not."""


class NotConvex(TreedensError, ValueError):
    """A density required to be convex non-increasing is not."""


class NotPiecewiseConstant(TreedensError, ValueError):
    """An estimate required to be piecewise constant has linear pieces."""


class TooLarge(TreedensError, ValueError):
    """An input exceeds the documented brute-force feasibility cap."""


class InfeasibleSpec(TreedensError, ValueError):
    """A hypercube specification cannot be realized on {1, ..., k}."""


class OutOfRegime(TreedensError, ValueError):
    """(n, k) lies outside the validity range of the requested regime."""


class EmptyCandidates(TreedensError, ValueError):
    """A candidate set has no members."""


class UnknownEstimator(TreedensError, KeyError):
    """An estimator name is not in the registry."""


class EmptyFamily(TreedensError, ValueError):
    """A worst-case sweep was asked to run over no densities."""


class DegenerateGrid(TreedensError, ValueError):
    """A sample-size grid is too short or not strictly increasing."""

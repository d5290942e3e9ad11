"""Exception hierarchy shared by every solver in the package."""

import numpy as np

__all__ = [
    "TNareError", "NumericallySingular", "SingularPencil", "NotAGraphSubspace",
    "ZeroReference", "ReciprocalSpectrum", "SharedSpectrum",
    "SelectionNotReciprocalFree", "CriticalEigenvalue", "Breakdown",
    "InitBreakdown", "NoConvergence", "KernelDimensionMismatch", "NodeSingular",
    "RankAmbiguous", "GenerationFailed",
]


class TNareError(np.linalg.LinAlgError):
    """Base class for all numerical failures raised by :mod:`tnare`."""


class NumericallySingular(TNareError):
    """A linear system failed the reciprocal-condition test."""


class SingularPencil(TNareError):
    """The matrix pencil is (numerically) singular."""


class NotAGraphSubspace(TNareError):
    """The leading n x n block of a subspace basis is singular."""


class ZeroReference(TNareError, ValueError):
    pass


class ReciprocalSpectrum(TNareError):
    """T-Sylvester operator singular: spectrum not reciprocal-free."""


class SharedSpectrum(TNareError):
    """Coupled Sylvester operator singular: the two pencils share an eigenvalue."""


class SelectionNotReciprocalFree(TNareError):
    pass


class CriticalEigenvalue(TNareError):
    """An eigenvalue sits (numerically) on the unit circle."""


class Breakdown(TNareError):
    """An iteration hit a singular pivot matrix."""


class InitBreakdown(Breakdown):
    pass


class NoConvergence(TNareError):
    pass


class KernelDimensionMismatch(TNareError):
    pass


class NodeSingular(TNareError):
    """The pencil is singular at one of the quadrature nodes."""


class RankAmbiguous(TNareError):
    pass


class GenerationFailed(TNareError):
    pass

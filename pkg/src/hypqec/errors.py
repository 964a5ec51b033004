"""Exception types shared across the package."""


class HypqecError(Exception):
    """Base class for all package-specific errors."""


# -- group engine -------------------------------------------------------------

class CosetLimitExceeded(HypqecError):
    """Coset enumeration did not close within the allowed number of cosets."""


class SearchBudgetExceeded(HypqecError):
    """Normal-subgroup search exhausted its node budget before finishing."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []


# -- tessellation -------------------------------------------------------------

class NotTorsionFree(HypqecError):
    """Quotient has an element of unexpected finite order."""


class InconsistentIncidence(HypqecError):
    """Orbit gluing produced an invalid surface complex."""


class NotHyperbolic(HypqecError):
    """(p-2)(q-2) <= 4, outside the hyperbolic regime."""


class NonIntegral(HypqecError):
    """Combinatorial formula produced a non-integer count."""


class OddEuler(HypqecError):
    """Euler characteristic is odd (non-orientable or corrupted complex)."""


class NotThreeColorable(HypqecError):
    """Face-adjacency graph admits no proper 3-coloring."""


class ImproperFaceColoring(HypqecError):
    """Two faces sharing an edge carry the same color."""


# -- geometry -----------------------------------------------------------------

class OutOfDisk(HypqecError):
    """Point lies outside the open unit disk."""


class DegenerateTriangle(HypqecError):
    """Two triangle corners coincide."""


# -- CSS codes ----------------------------------------------------------------

class CssViolation(HypqecError):
    """H_X . H_Z^T != 0 over GF(2)."""


class RankDefect(HypqecError):
    """Logical quotient space has unexpected dimension."""


class Disconnected(HypqecError):
    """Complex graph is disconnected; distance undefined."""


# -- fine-graining ------------------------------------------------------------

class NotTriangulableDual(HypqecError):
    """Dual of the complex is not a triangulation (vertex degree != 3)."""


class InvalidF(HypqecError):
    """Subdivision factor below 1."""


class PostconditionFailed(HypqecError):
    """A hard structural assertion (n' = f^2 n, k' = k, ...) failed."""


# -- circuits and decoding ----------------------------------------------------

class ScheduleConflict(HypqecError):
    """Layer packing placed a qubit twice in one layer."""


class Hyperedge(HypqecError):
    """Decomposed error mechanism flips three or more detectors in one graph."""


class Unmatchable(HypqecError):
    """A defect cannot be paired with any other defect or boundary."""


class UnmatchableErasure(Unmatchable):
    """Defects cannot be paired inside the erased subgraph."""


# -- harness ------------------------------------------------------------------

class ConfigError(HypqecError):
    """Invalid experiment configuration."""


class IoError(HypqecError):
    """File-level failure with the offending path attached."""


class InsufficientData(HypqecError):
    """Fewer than two sweep points supplied."""


class NoCrossings(HypqecError):
    """No curve crossings found for a family threshold."""

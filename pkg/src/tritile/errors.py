"""Exception types shared across the toolkit.

Procedure errors (StarvedStep, DivisibilityViolation, ...) signal that a
finite instance fails the hypotheses a construction needs; they carry enough
context to locate the failing step.
"""


class TritileError(Exception):
    """Base class for all toolkit errors."""


class EmptyGraph(TritileError):
    """Operation undefined on the 0-vertex graph."""


class SameVertex(TritileError):
    """Two distinct vertices were required."""


class ParseError(TritileError):
    """Malformed input file; carries a 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class StarvedStep(TritileError):
    """A greedy tiling procedure found no admissible triangle.

    Signals that the instance lacks the density/independence properties the
    procedure's hypotheses assume.
    """

    def __init__(self, side: str, step: int, detail: str = ""):
        self.side = side
        self.step = step
        msg = f"no admissible triangle at step {step} (side {side})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class DivisibilityViolation(TritileError):
    """A required mod-3 congruence fails."""


class NotAPartition(TritileError):
    """The given sets do not partition the vertex set."""


class NotAMatching(TritileError):
    """The given edge set is not a matching."""


class SideMismatch(TritileError):
    """Bipartite side sizes violate a required inequality."""


class UnknownEdge(TritileError):
    """A weight was keyed by a non-edge."""


class RangeError(TritileError):
    """Numeric argument outside its documented range."""


class TooLarge(TritileError):
    """Instance exceeds the hard cap of an exhaustive routine."""


class PreconditionViolated(TritileError):
    """A stated precondition of a criterion fails."""


class ThresholdInfeasible(TritileError):
    """A randomized construction failed verification after all retries."""


class PartTooSmall(TritileError):
    """A construction part is too small to host its sub-construction."""


class SizeBudget(TritileError):
    """Requested slice sizes exceed the available vertices."""


class Disconnected(TritileError):
    """A connected graph was required."""


class SolverBudget(TritileError):
    """The exact solver exhausted its budget before proving optimality."""


class MatchingInfeasible(TritileError):
    """No perfect weighted fractional matching exists; carries the certificate."""

    def __init__(self, certificate):
        self.certificate = certificate
        super().__init__("perfect weighted fractional matching is infeasible")


class DenominatorOverflow(TritileError):
    """Matching weights need a common denominator beyond the configured cap."""


class TraceMismatch(TritileError):
    """Replaying a recorded run did not reproduce the artifact."""


class PartitionDegenerate(TritileError):
    """The heuristic partition could not produce usable clusters."""


class CoreUnsolved(TritileError):
    """The pipeline's core-finish stage failed to tile the core."""

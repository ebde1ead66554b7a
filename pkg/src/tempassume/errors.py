class SimulationError(Exception):
    """Raised when an operation's precondition is violated."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class SizeBound(SimulationError):
    """Player count outside the supported range (n <= 16)."""


class NotMaximal(SimulationError):
    """A set passed as a maximal set of a structure is not maximal in it."""


class DegenerateAccess(SimulationError):
    """The empty set is qualified, so there is nothing to share."""


class NotQualified(SimulationError):
    """A coalition lacks at least one replica tag."""

    def __init__(self, message: str, missing_tag: int):
        super().__init__(message)
        self.missing_tag = missing_tag


class Inconsistent(SimulationError):
    """Two copies of the same replica disagree within one coalition."""

    def __init__(self, message: str, tag: int):
        super().__init__(message)
        self.tag = tag


class Mismatch(SimulationError):
    """Bundles combined with differing access structures, lengths or tags."""


class InadmissibleStructure(SimulationError):
    """An adversary structure violates the cover condition a protocol needs."""

    def __init__(self, message: str, condition: str):
        super().__init__(message)
        self.condition = condition


class InadmissibleStrategy(SimulationError):
    """The cheating players of a strategy profile are not one structure member."""


class NotSameReduction(SimulationError):
    """Two purifications have different remote reduced states."""

    def __init__(self, message: str, distance: float):
        super().__init__(message)
        self.distance = distance


class ScaleBound(SimulationError):
    """Exhaustive enumeration requested beyond the feasible scale."""


class CircuitInvalid(SimulationError):
    """A boolean circuit uses an undefined wire or an unknown gate."""


class OtAborted(SimulationError):
    """A backing oblivious transfer aborted."""

    def __init__(self, message: str, reason: str):
        super().__init__(message)
        self.reason = reason


class ParseError(SimulationError):
    """Malformed scenario, structure literal or circuit text."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class AttackInconclusive(SimulationError):
    """A toy commitment certified neither distinguishability nor a flip."""

from typing import List, Optional


class CactazError(Exception):
    """Base class for every error raised by the library."""


class UsageProblem(CactazError):
    """Bad input or a request outside the supported domain (CLI exit code 2)."""


class InvalidEdge(UsageProblem):
    pass


class NotConnected(UsageProblem):
    pass


class ParseError(UsageProblem):
    pass


class DegenerateEdge(UsageProblem):
    pass


class UnsupportedGraph(UsageProblem):
    pass


class OutOfDomain(UsageProblem):
    pass


class InvalidSpec(UsageProblem):
    pass


class NotATree(UsageProblem):
    pass


class EmptyDomain(UsageProblem):
    pass


class RefusedTooLarge(UsageProblem):
    pass


class RefusedOutOfHypothesis(UsageProblem):
    pass


class PatternMismatch(UsageProblem):
    pass


class DegenerateResult(UsageProblem):
    pass


class VerificationViolation(CactazError):
    """
    A checked claim failed. Carries every check row of the run and the
    graph6 witnesses of the failing rows (CLI exit code 1).
    """

    def __init__(self, message: str, results: Optional[list] = None, witnesses: Optional[List[str]] = None):
        super().__init__(message)
        self.results = list(results or [])
        self.witnesses = list(witnesses or [])


class TheoremViolation(VerificationViolation):
    pass


class ClaimViolation(VerificationViolation):
    pass


class FormatMismatch(UsageProblem):
    """The requested output format does not fit the report kind."""

"""Error types shared across the solver.

Every exception carries a stable ``code`` string so the CLI and the HTTP
service can report machine-readable failures.
"""


class SolverError(Exception):
    code = "SOLVER_ERROR"

    def __init__(self, message=""):
        super().__init__(message or self.code)


class CardinalityMismatch(SolverError):
    code = "CARDINALITY_MISMATCH"


class VarNotInScope(SolverError):
    code = "VAR_NOT_IN_SCOPE"


class IndexOutOfRange(SolverError):
    code = "INDEX_OUT_OF_RANGE"


class UnknownVariable(SolverError):
    code = "UNKNOWN_VARIABLE"


class NotADecision(SolverError):
    code = "NOT_A_DECISION"


class DegenerateValue(SolverError):
    """All value entries equal: there is no real decision problem."""

    code = "DEGENERATE_VALUE"

    def __init__(self, value, message=""):
        super().__init__(message or f"constant value function ({value})")
        self.value = value


class ZeroEvidenceProbability(SolverError):
    code = "ZERO_EVIDENCE_PROBABILITY"


class NegativeFactor(SolverError):
    code = "NEGATIVE_FACTOR"


class NegativeEntry(SolverError):
    code = "NEGATIVE_ENTRY"


class NegativeWeight(SolverError):
    code = "NEGATIVE_WEIGHT"


class PolicySpaceTooLarge(SolverError):
    code = "POLICY_SPACE_TOO_LARGE"


class OneDirectionalCheckFailed(SolverError):
    code = "ONE_DIRECTIONAL_CHECK_FAILED"


class UncoveredTable(SolverError):
    code = "UNCOVERED_TABLE"


class InvalidDiagram(SolverError):
    """Raised by solvers handed a diagram whose validation report has errors."""

    code = "INVALID_DIAGRAM"

    def __init__(self, report):
        codes = ", ".join(sorted({code for code, _, _ in report.errors}))
        super().__init__(f"diagram failed validation: {codes}")
        self.report = report

"""Exception hierarchy.

Errors are grouped by how the command line maps them to exit codes:
input problems (2), budget/size limits (3) and falsified checks (1).
"""


class MoufangError(Exception):
    """Base class for all library errors."""


class InputError(MoufangError):
    """Malformed input table or file."""


class NotLatinSquare(InputError):
    def __init__(self, kind, index, value):
        self.kind = kind
        self.index = index
        self.value = value
        super().__init__(f"{kind} {index} repeats or misses symbol {value}: not a Latin square")


class NoIdentity(InputError):
    def __init__(self):
        super().__init__("table has no two-sided identity element")


class BudgetError(MoufangError):
    """A computation exceeds a configured size or work budget."""


class SizeOverflow(BudgetError):
    pass


class TooLarge(BudgetError):
    def __init__(self, order, limit):
        self.order = order
        self.limit = limit
        super().__init__(f"group order {order} exceeds enumeration threshold {limit}")


class BudgetExceeded(BudgetError):
    pass


class NotCML(MoufangError):
    """The loop is not a commutative Moufang loop."""

    def __init__(self, report=None):
        self.report = report
        msg = "loop is not a commutative Moufang loop"
        if report is not None and report.counterexample is not None:
            msg += f" ({report.name} fails at {report.counterexample})"
        super().__init__(msg)


class NotNormal(MoufangError):
    pass


class NotCentrallyNilpotent(MoufangError):
    pass


class NotNilpotent(MoufangError):
    pass


class HypothesisFailed(MoufangError):
    """A check's precondition does not hold on this instance (not a bug)."""


class CheckViolation(MoufangError):
    """A cited structural fact failed on a concrete instance."""

    def __init__(self, message, witness):
        self.witness = witness
        super().__init__(f"{message}; witness {witness}")


class ClosureViolation(CheckViolation):
    pass


class NormalityViolation(CheckViolation):
    pass


class DegreeMismatch(ValueError):
    pass

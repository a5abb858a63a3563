"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each error class carries the code it
should produce when it escapes a subcommand.
"""


class RauzyError(Exception):
    exit_code = 1


class PermutationError(RauzyError, ValueError):
    """Malformed permutation text or a table that breaks the two-occurrence rule."""

    exit_code = 2


class MoveUndefined(RauzyError):
    pass


class Reducible(RauzyError):
    exit_code = 3


class NotRegular(RauzyError):
    pass


class InfeasibleConstraints(RauzyError):
    pass


class MissingSymbol(RauzyError, ValueError):
    pass


class NotEmbedded(RauzyError):
    pass


class TieBreak(RauzyError):
    pass


class ConditionsBroken(RauzyError):
    pass


class AngleResolutionFailure(RauzyError):
    pass


class InconsistentSignature(RauzyError, ValueError):
    pass


class CorruptCache(RauzyError):
    pass


class CaseUnavailable(RauzyError):
    pass


class BudgetExceeded(RauzyError):
    exit_code = 4


class EmbeddingBudgetExceeded(BudgetExceeded):
    pass


class NodeBudgetExceeded(BudgetExceeded):
    pass


class RepresentativeNotFound(BudgetExceeded):
    pass


class VerificationFailure(RauzyError):
    """A certificate produced by this package failed independent replay."""

    exit_code = 5

"""Exception hierarchy shared by all modules."""


class HeunError(Exception):
    """Base class for all errors raised by this package."""


# -- scalar kernel ----------------------------------------------------------

class DivisionByZero(HeunError, ZeroDivisionError):
    pass


# -- rational function algebra ----------------------------------------------

class ZeroDenominator(HeunError):
    pass


class ZeroScale(HeunError):
    pass


class PoleAtPoint(HeunError):
    pass


class NotAPole(HeunError):
    pass


class HigherOrderPole(HeunError):
    def __init__(self, msg, node=None):
        super().__init__(msg)
        self.node = node


# -- grids and partial fractions ----------------------------------------------

class DegenerateGrid(HeunError):
    pass


class NotSymmetric(HeunError):
    pass


class UnexpectedPole(HeunError):
    def __init__(self, msg, scan=None):
        super().__init__(msg)
        self.scan = scan or []


class BoundaryPole(HeunError):
    pass


# -- operator construction -----------------------------------------------------

class InvariantViolation(HeunError):
    pass


class InternalCheckFailed(HeunError):
    def __init__(self, msg, operator=None):
        super().__init__(msg)
        self.operator = operator


class ShapeMismatch(HeunError):
    pass


class BasisSolveFailed(HeunError):
    pass


class RaisingViolation(HeunError):
    def __init__(self, msg, pole=None, residue=None):
        super().__init__(msg)
        self.pole = pole
        self.residue = residue


class DegenerateDenominator(HeunError):
    pass


class IndexOutOfRange(HeunError):
    pass


# -- gauge transformations ------------------------------------------------------

class ZeroGauge(HeunError):
    pass


class CoincidenceFailed(HeunError):
    def __init__(self, msg, diffs=None):
        super().__init__(msg)
        self.diffs = diffs or {}


class RelationFailed(HeunError):
    def __init__(self, msg, diffs=None):
        super().__init__(msg)
        self.diffs = diffs or {}


# -- elliptic numerics ------------------------------------------------------------

class ZeroArgument(HeunError):
    pass


class NearPole(HeunError):
    pass


class NoConvergence(HeunError):
    pass


class NotConstant(HeunError):
    pass


# -- CLI / config -------------------------------------------------------------------

class ParseError(HeunError):
    pass


class InvalidParameters(HeunError):
    pass

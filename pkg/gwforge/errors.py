# -*- coding: utf-8 -*-
"""Named exceptions raised by gwforge.

Messages follow the "Input error: ..." convention for violated preconditions.
"""


class GWForgeError(Exception):
    """Base class of every gwforge error."""
    pass


# %% tree_core
class MalformedSequence(GWForgeError):
    """Child-count sequence is not a valid preorder walk."""
    pass


class NotALeaf(GWForgeError):
    """Grafting node is not a leaf of the tree."""
    pass


class CannotRestrict(GWForgeError):
    """Plain restriction through an infinite node."""
    pass


class InsufficientMaterialization(GWForgeError):
    """Extended tree was not materialized up to the requested level."""
    pass


# %% offspring_lab
class OutOfDomain(GWForgeError):
    pass


class DegenerateDistribution(GWForgeError):
    """Offspring law violates 0<p(0)<1, p(0)+p(1)<1; numQ holds the exact answer."""

    def __init__(self, strMsg, numQ=None):
        super().__init__(strMsg)
        self.numQ = numQ


class NotSuperCritical(GWForgeError):
    pass


class NotSubCritical(GWForgeError):
    pass


class NotCritical(GWForgeError):
    pass


class ZeroOrInfiniteMean(GWForgeError):
    pass


class ThetaOutsideInterval(GWForgeError):
    pass


class EmptyIntersection(GWForgeError):
    pass


# %% enum_oracle
class SupportTooLarge(GWForgeError):
    pass


class WindowUnreachable(GWForgeError):
    """Conditioning window has zero probability (e.g. wrong residue class)."""
    pass


class PropertyMismatch(GWForgeError):
    pass


class PeriodicDistribution(GWForgeError):
    pass


# %% limit_lab
class NotNonGeneric(GWForgeError):
    pass


# %% budgets
class BudgetError(GWForgeError):
    """A sampling budget ran out."""
    pass


class Truncated(BudgetError):
    """strReason is 'max_nodes' or 'max_height'; dPartial holds what was generated."""

    def __init__(self, strMsg, strReason=None, dPartial=None):
        super().__init__(strMsg)
        self.strReason = strReason
        self.dPartial = dPartial


class Exhausted(BudgetError):
    def __init__(self, strMsg, intRejections=None):
        super().__init__(strMsg)
        self.intRejections = intRejections

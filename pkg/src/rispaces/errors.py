"""Exception types shared by all modules."""


class RispacesError(Exception):
    """Base class for every error raised by this package."""


class NonFiniteInput(RispacesError):
    """An input value or weight is nan/inf."""


class BadWeights(RispacesError):
    """Sample weights do not sum to one."""


class BadModel(RispacesError):
    """Function-model parameters violate their constraints."""


class BadInterval(RispacesError):
    """Integration bounds are reversed or leave [0, 1]."""


class BadPoint(RispacesError):
    """Evaluation point lies outside (0, 1]."""


class BadExponent(RispacesError):
    """Exponent parameters violate the preconditions of a check."""


class NoConvergence(RispacesError):
    """Adaptive quadrature exhausted its depth before reaching tolerance."""


class NonFiniteValue(RispacesError):
    """A probed objective returned nan/inf during a supremum search."""


class OutOfRange(RispacesError):
    """Target value lies outside the range of a monotone map."""


class ConditionC2Failed(RispacesError):
    """The integrated inner weight is not in the outer weighted Lebesgue space."""


class ConditionCheckFailed(RispacesError):
    """Empirical verification of the coupling conditions failed."""


class InfiniteNorm(RispacesError):
    """No trial decomposition has both component norms finite."""


class Divergent(RispacesError):
    """A quadrature grows without bound under refinement."""


class NotMonotone(RispacesError):
    """A step function required to be nonincreasing is not."""


class HypothesisViolation(RispacesError):
    """Experiment parameters violate the hypotheses of the identity under test."""

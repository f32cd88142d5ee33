"""Exception types shared across the package."""


class InvalidModulusError(ValueError):
    """Modulus N of the clock model is not an integer >= 2."""


class InvalidAngleError(ValueError):
    """Angle outside the admissible open interval."""


class InconsistentWeightsError(ValueError):
    """Weight coefficients violate normalisation or reflection symmetry."""


class SingularWeightError(ArithmeticError):
    """An edge weight vanishes where a ratio of weights is required."""


class NotFlippableError(ValueError):
    """The selected faces do not tile a hexagon with a flippable centre."""


class TriplePointError(ValueError):
    """Three grid lines meet at a point; perturb the offsets."""


class LatticeFormatError(ValueError):
    """Lattice description violates the JSON schema or its invariants."""


class BudgetExceededError(RuntimeError):
    """Enumeration would exceed the configuration budget."""


class StringRoutingError(ValueError):
    """A disorder string cannot be routed as requested."""

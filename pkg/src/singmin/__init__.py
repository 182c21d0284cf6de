"""Singular minimizer construction and verification toolkit.

Builds the degree-one homogeneous map u = (u1, u2) from R^3 to R^2 together
with a smooth uniformly convex integrand F whose Euler-Lagrange system
div(grad F(Du)) = 0 is satisfied by u, and verifies every inequality and
extension step of the construction numerically at desk scale.
"""

__version__ = "0.1.0"


class DomainError(ValueError):
    """Query outside the domain where an evaluator is defined."""


class SingularityError(ValueError):
    """Evaluation requested at a point where the quantity blows up."""


class ConfigurationError(ValueError):
    """Parameters violate a documented precondition."""


class DegenerateWeightError(ValueError):
    """Weight function vanishes where the averaged ratio needs it positive."""


class DegenerateError(ValueError):
    """Geometric construction degenerates (parallel planes, zero direction)."""


class OrderingError(RuntimeError):
    """Pipeline stage invoked before the stages it depends on."""

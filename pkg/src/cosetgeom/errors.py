"""Exception types shared across the package."""

from __future__ import annotations


class CosetGeomError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(CosetGeomError):
    """Malformed scenario text (group string, word, schedule, config file)."""


class SubgroupModeError(CosetGeomError):
    """Operation requires the other subgroup mode."""


class BallOverflowError(CosetGeomError):
    """Ball construction exceeded the vertex budget."""

    def __init__(self, radius_reached: int, count: int, budget: int):
        self.radius_reached = radius_reached
        self.count = count
        self.budget = budget
        super().__init__(
            f"ball exceeded budget of {budget} vertices at radius "
            f"{radius_reached} (count {count})"
        )


class ScheduleExceedsBallError(CosetGeomError):
    """An ends schedule asks for annuli outside the reliable region."""


class EmptyCosetInBallError(CosetGeomError):
    """The translated coset has no representative inside the ball."""


class NotStabilizedError(CosetGeomError):
    """A constant did not stabilize across the top radii."""

    def __init__(self, name: str, values):
        self.name = name
        self.values = tuple(values)
        super().__init__(f"{name} did not stabilize: {self.values}")


class InsufficientRadiusError(CosetGeomError):
    """A requested in-ball construction does not fit inside the ball."""


class NoTransferVertexError(CosetGeomError):
    """No transfer vertex within the promised search depth."""


class NoRouteWithinBallError(CosetGeomError):
    """No escape route exists inside the ball; retry with a larger one."""

    def __init__(self, message: str, required_radius: int):
        self.required_radius = required_radius
        super().__init__(f"{message} (suggest radius >= {required_radius})")


class EscapeBlockedError(CosetGeomError):
    """The start vertex sits inside the blocked closure of the obstacle."""


class ConstantViolationError(CosetGeomError):
    """A certified bound (F or M) failed during construction."""

"""Numerical tolerances shared by every module.

All computations run in IEEE double precision; none of the tolerances
below can meaningfully go under ~1e-15 relative.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    residual: float = 1e-12
    newton_step: float = 1e-12
    basin: float = 1e-9
    cycle_convergence: float = 1e-9
    circle: float = 1e-6
    parabolic: float = 1e-6
    zero_capture: float = 1e-6
    type_match: float = 1e-6
    escape_lambda: float = 2.0
    max_iters: int = 100_000
    max_period: int = 64

    def __post_init__(self):
        for name in ("residual", "newton_step", "basin", "cycle_convergence",
                     "circle", "parabolic", "zero_capture", "type_match"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name!r} must be positive")
        if not self.escape_lambda > 1:
            raise ValueError("escape_lambda must exceed 1")
        if self.max_iters < 1 or self.max_period < 1:
            raise ValueError("max_iters and max_period must be positive")

    def with_overrides(self, **kwargs) -> "Tolerances":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


DEFAULT = Tolerances()

from __future__ import annotations

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    frame: float = 1e-10
    identity: float = 1e-8
    exact: float = 1e-12
    opt: float = 1e-6

    def updated(self, **overrides: float) -> "Tolerances":
        unknown = set(overrides) - set(asdict(self))
        if unknown:
            raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


DEFAULT = Tolerances()

TOL_FRAME = DEFAULT.frame
TOL_IDENTITY = DEFAULT.identity
TOL_EXACT = DEFAULT.exact
TOL_OPT = DEFAULT.opt

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from crwarplab.ambient import AmbientModel
from crwarplab.dsl import Expr
from crwarplab.errors import ConfigError, DomainError, NotImmersed
from crwarplab.numeric.taylor import Taylor2

MIN_SINGULAR = 1e-8


@dataclass
class ImmersionChart:
    """Coordinate parametrization of a warped product into flat C^m.

    Coordinates are ordered base first (``base_dim`` of them), fiber after.
    ``components`` are the ``2m`` real coordinates of the image in the
    interleaved order ``(x_1, y_1, ..., x_m, y_m)``.
    """

    coords: tuple[str, ...]
    components: tuple[Expr, ...]
    base_dim: int
    fiber_dim: int
    warp: Expr | float | None = None
    domain: Mapping[str, tuple[float, float]] = field(default_factory=dict)
    key: str | None = None
    # closed-form intrinsic curvature of the factors, when known
    base_curvature: float | None = None
    fiber_curvature: float | None = None

    def __post_init__(self):
        if len(self.coords) != self.base_dim + self.fiber_dim:
            raise ConfigError("chart.coords", f"{len(self.coords)} coordinates for dims "
                                              f"{self.base_dim}+{self.fiber_dim}")
        if len(self.components) % 2:
            raise ConfigError("chart.components", "need an even number (2m) of real components")
        if len(self.components) < len(self.coords):
            raise ConfigError("chart.components", "target dimension smaller than source dimension")

    @classmethod
    def from_strings(cls, coords: Sequence[str], components: Sequence[str], base_dim: int,
                     fiber_dim: int, warp: str | float | None = None, **kw) -> "ImmersionChart":
        coords = tuple(coords)
        comps = tuple(Expr(str(s), coords) for s in components)
        if isinstance(warp, str):
            warp = Expr(warp, coords[:base_dim])
        return cls(coords, comps, base_dim, fiber_dim, warp, **kw)

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def m(self) -> int:
        return len(self.components) // 2

    @property
    def ambient(self) -> AmbientModel:
        return AmbientModel(0.0, self.m)

    def check_domain(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=float)
        if p.shape != (self.n,):
            raise DomainError(f"point has {p.shape} coordinates, chart needs {self.n}")
        for name, x in zip(self.coords, p):
            if name in self.domain:
                lo, hi = self.domain[name]
                if not lo <= x <= hi:
                    raise DomainError(f"{name}={x} outside [{lo}, {hi}]")
        return p


@dataclass(frozen=True)
class Jet:
    position: np.ndarray   # (2m,)
    jacobian: np.ndarray   # (2m, n)
    hessians: np.ndarray   # (2m, n, n)


def jet_evaluate(chart: ImmersionChart, point, check_rank: bool = True) -> Jet:
    p = chart.check_domain(point)
    seeds = Taylor2.seed(p)
    pos, jac, hes = [], [], []
    for comp in chart.components:
        t = comp(*seeds)
        if not isinstance(t, Taylor2):
            t = Taylor2.constant(t, chart.n)
        pos.append(t.value)
        jac.append(t.grad)
        hes.append(t.hess)
    jet = Jet(np.array(pos), np.array(jac), np.array(hes))
    if check_rank:
        s = np.linalg.svd(jet.jacobian, compute_uv=False)
        if s[-1] <= MIN_SINGULAR:
            raise NotImmersed(f"Jacobian rank deficient at {p.tolist()} (sigma_min={s[-1]:.3e})")
    return jet

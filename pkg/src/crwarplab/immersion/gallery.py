"""Built-in immersions into flat C^m with closed-form reference values.

Keys are stable: ``chen_c2``, ``chen_c3``, ``product``, ``cone``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

from crwarplab.errors import ConfigError
from crwarplab.immersion.chart import ImmersionChart

_POS = (1e-9, math.inf)


@dataclass(frozen=True)
class GalleryEntry:
    key: str
    description: str
    chart: ImmersionChart
    defaults: Mapping[str, float]
    to_coords: Callable[[Mapping[str, float]], tuple[float, ...]]
    default_grid: Mapping[str, tuple[float, ...]]
    expected: Callable[[Mapping[str, float]], dict]
    cr_warped: bool = True
    notes: tuple[str, ...] = field(default=())

    def params(self, **given: float) -> dict[str, float]:
        unknown = set(given) - set(self.defaults)
        if unknown:
            raise ConfigError(f"gallery.{self.key}", f"unknown parameter(s) {sorted(unknown)}; "
                                                     f"expected {sorted(self.defaults)}")
        p = dict(self.defaults)
        p.update({k: float(v) for k, v in given.items()})
        return p

    def point(self, **given: float) -> tuple[float, ...]:
        return self.to_coords(self.params(**given))


def _polar_base(p):
    return p["r"] * math.cos(p["theta"]), p["r"] * math.sin(p["theta"])


def _chen_c2() -> GalleryEntry:
    chart = ImmersionChart.from_strings(
        ("x", "y", "t"),
        ("x*cos(t)", "y*cos(t)", "x*sin(t)", "y*sin(t)"),
        base_dim=2, fiber_dim=1, warp="sqrt(x^2 + y^2)",
        key="chen_c2", base_curvature=0.0,
    )

    def expected(p):
        r = p["r"]
        return {
            "f": r, "grad_norm_sq": 1.0, "laplacian_over_f": -1.0 / r ** 2,
            "warp_term": -1.0 / r ** 2, "H_norm_sq": 0.0, "h_norm_sq": 2.0 / r ** 2,
            "tau_M": -1.0 / r ** 2, "mixed_sum": -1.0 / r ** 2,
            "delta_hat_NT": 0.0, "delta_NT": 0.0, "rhs_i": 1.0 / r ** 2,
            "corollary_i_sum": -1.0 / r ** 2,
        }

    return GalleryEntry(
        "chen_c2", "F(z, t) = (z cos t, z sin t) into C^2; metric |dz|^2 + |z|^2 dt^2, f = |z|",
        chart, {"r": 1.0, "theta": math.pi / 3, "t": 0.0},
        lambda p: (*_polar_base(p), p["t"]),
        {"r": (0.5, 1.0, 2.0), "t": (0.0, math.pi / 8, math.pi / 4, 3 * math.pi / 8)},
        expected,
    )


def _chen_c3() -> GalleryEntry:
    chart = ImmersionChart.from_strings(
        ("x", "y", "p", "q"),
        ("x*sin(p)*cos(q)", "y*sin(p)*cos(q)", "x*sin(p)*sin(q)", "y*sin(p)*sin(q)",
         "x*cos(p)", "y*cos(p)"),
        base_dim=2, fiber_dim=2, warp="sqrt(x^2 + y^2)",
        domain={"p": (1e-6, math.pi - 1e-6)},
        key="chen_c3", base_curvature=0.0, fiber_curvature=1.0,
    )

    def expected(p):
        r = p["r"]
        return {
            "f": r, "grad_norm_sq": 1.0, "laplacian_over_f": -1.0 / r ** 2,
            "warp_term": -2.0 / r ** 2, "H_norm_sq": 0.0, "h_norm_sq": 4.0 / r ** 2,
            "tau_M": -2.0 / r ** 2, "mixed_sum": -2.0 / r ** 2, "fiber_plane_K": 0.0,
            "delta_hat_NT": 0.0, "delta_hat_Nperp": 0.0, "delta_Nperp": 0.0,
            "rhs_i": 2.0 / r ** 2, "rhs_ii": 2.0 / r ** 2,
            "corollary_i_sum": -2.0 / r ** 2, "corollary_ii_sum": -2.0 / r ** 2,
        }

    return GalleryEntry(
        "chen_c3", "F(z, u) = z u for u on the unit sphere S^2 in R^3, into C^3; f = |z|",
        chart, {"r": 1.0, "theta": math.pi / 3, "polar": math.pi / 2, "azim": math.pi / 5},
        lambda p: (*_polar_base(p), p["polar"], p["azim"]),
        {"r": (0.5, 1.0, 2.0), "polar": (math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3)},
        expected,
    )


def _product() -> GalleryEntry:
    chart = ImmersionChart.from_strings(
        ("x", "y", "s", "u"),
        ("x", "y", "s", "0", "u", "0"),
        base_dim=2, fiber_dim=2, warp=1.0,
        key="product", base_curvature=0.0, fiber_curvature=0.0,
    )

    def expected(p):
        zero = {k: 0.0 for k in ("grad_norm_sq", "laplacian_over_f", "warp_term", "H_norm_sq",
                                 "h_norm_sq", "tau_M", "mixed_sum", "fiber_plane_K",
                                 "delta_hat_NT", "delta_hat_Nperp", "delta_Nperp", "rhs_i",
                                 "rhs_ii", "corollary_i_sum", "corollary_ii_sum")}
        return {"f": 1.0, **zero}

    return GalleryEntry(
        "product", "totally geodesic C x R^2 inside C^3 (trivial warp f = 1)",
        chart, {"x": 0.0, "y": 0.0, "s": 0.0, "u": 0.0},
        lambda p: (p["x"], p["y"], p["s"], p["u"]),
        {"x": (0.0, 1.0), "s": (-1.0, 2.0)},
        expected,
    )


def _cone() -> GalleryEntry:
    chart = ImmersionChart.from_strings(
        ("r", "p", "q"),
        ("r*sin(p)*cos(q)", "0", "r*sin(p)*sin(q)", "0", "r*cos(p)", "0"),
        base_dim=1, fiber_dim=2, warp="r",
        domain={"r": _POS, "p": (1e-6, math.pi - 1e-6)},
        key="cone", base_curvature=0.0, fiber_curvature=1.0,
    )

    def expected(p):
        r = p["r"]
        return {"f": r, "grad_norm_sq": 1.0, "laplacian_over_f": 0.0, "warp_term": 0.0,
                "H_norm_sq": 0.0, "h_norm_sq": 0.0, "tau_M": 0.0, "mixed_sum": 0.0,
                "fiber_plane_K": 0.0}

    return GalleryEntry(
        "cone", "flat cone R+ x_r S^2 = R^3 minus the origin, in the real slice of C^3 (not CR-warped)",
        chart, {"r": 1.0, "polar": math.pi / 2, "azim": 0.0},
        lambda p: (p["r"], p["polar"], p["azim"]),
        {"r": (0.5, 1.0, 2.0), "polar": (math.pi / 4, math.pi / 2)},
        expected, cr_warped=False,
        notes=("totally real: the warped base is not a holomorphic factor",),
    )


_BUILDERS = {"chen_c2": _chen_c2, "chen_c3": _chen_c3, "product": _product, "cone": _cone}
KEYS = tuple(_BUILDERS)


def get(key: str) -> GalleryEntry:
    try:
        return _BUILDERS[key]()
    except KeyError:
        raise ConfigError("gallery", f"unknown gallery key {key!r}; available: {', '.join(KEYS)}") from None

"""Scenario files: parsing, validation and batch evaluation.

A scenario is a YAML mapping::

    mode: immersion            # immersion | synthetic | lemmas
    seed: 7
    chart:
      gallery: chen_c2         # or an explicit chart (coords, components, ...)
    points:
      grid: {r: [0.5, 1, 2], t: {lo: 0, hi: pi/4, count: 2}}
    tolerances: {identity: 1.0e-8}
    budget: {samples: 4096}

Numbers may be written as constant expressions (``pi/4``).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import yaml

from crwarplab import SCHEMA
from crwarplab.chen.algebra import (
    lemma1_beta,
    lemma1_check,
    lemma_identity_residual,
    theta,
)
from crwarplab.chen.report import SyntheticScenario, evaluate_chart, evaluate_synthetic
from crwarplab.dsl import Expr
from crwarplab.errors import ConfigError, CRWarpError
from crwarplab.immersion import gallery
from crwarplab.immersion.chart import ImmersionChart
from crwarplab.numeric import PlaneBudget
from crwarplab.tolerances import DEFAULT, Tolerances
from crwarplab.warped import WarpData

MODES = ("immersion", "synthetic", "lemmas")
MAX_POINTS = 100_000
LEMMA_PROFILES = ((2, 1), (2, 2), (4, 2), (4, 3))


@dataclass
class Scenario:
    mode: str
    seed: int | None = None
    name: str = "scenario"
    tolerances: Tolerances = DEFAULT
    budget: PlaneBudget = field(default_factory=PlaneBudget)
    chart: ImmersionChart | None = None
    entry: gallery.GalleryEntry | None = None
    points: list[dict[str, float]] = field(default_factory=list)
    cases: list[SyntheticScenario] = field(default_factory=list)
    lemma_count: int = 1000
    cr_warped: bool = True


# ------------------------------------------------------------------ parsing

def number(value, path: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(path, "expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Expr(value, ()).value(()))
        except CRWarpError as exc:
            raise ConfigError(path, f"not a constant expression: {exc}") from None
    raise ConfigError(path, f"expected a number, got {type(value).__name__}")


def _mapping(value, path: str) -> Mapping:
    if not isinstance(value, Mapping):
        raise ConfigError(path, "expected a mapping")
    return value


def _int(value, path: str, lo: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, "expected an integer")
    if lo is not None and value < lo:
        raise ConfigError(path, f"must be >= {lo}")
    return value


def axis_values(spec, path: str) -> list[float]:
    """A grid axis: a list, a single value, ``{lo, hi, count}`` or ``"lo:hi:count"``."""
    if isinstance(spec, Mapping):
        missing = {"lo", "hi", "count"} - set(spec)
        if missing:
            raise ConfigError(path, f"range needs lo, hi, count (missing {sorted(missing)})")
        lo, hi = number(spec["lo"], f"{path}.lo"), number(spec["hi"], f"{path}.hi")
        count = _int(spec["count"], f"{path}.count", 1)
        return np.linspace(lo, hi, count).tolist()
    if isinstance(spec, str) and spec.count(":") == 2:
        lo, hi, count = spec.split(":")
        try:
            cnt = int(count)
        except ValueError:
            raise ConfigError(f"{path}.count", f"not an integer: {count!r}") from None
        return axis_values({"lo": lo, "hi": hi, "count": cnt}, path)
    if isinstance(spec, (list, tuple)):
        if not spec:
            raise ConfigError(path, "empty value list")
        return [number(v, f"{path}[{i}]") for i, v in enumerate(spec)]
    return [number(spec, path)]


def grid_points(grid: Mapping, names, path: str) -> list[dict[str, float]]:
    axes = {}
    for k, v in grid.items():
        if k not in names:
            raise ConfigError(f"{path}.{k}", f"unknown coordinate; expected one of {sorted(names)}")
        axes[k] = axis_values(v, f"{path}.{k}")
    size = math.prod(len(v) for v in axes.values())
    if size > MAX_POINTS:
        raise ConfigError(path, f"grid has {size} points, limit is {MAX_POINTS}")
    keys = list(axes)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(axes[k] for k in keys))]


def _points(raw, names, path: str, default_grid=None) -> list[dict[str, float]]:
    if raw is None:
        if default_grid is None:
            raise ConfigError(path, "points required")
        return grid_points(default_grid, names, path)
    if isinstance(raw, list):
        raw = {"list": raw}
    raw = _mapping(raw, path)
    pts: list[dict[str, float]] = []
    for i, p in enumerate(raw.get("list", []) or []):
        if isinstance(p, Mapping):
            unknown = set(p) - set(names)
            if unknown:
                raise ConfigError(f"{path}.list[{i}]", f"unknown names {sorted(unknown)}")
            pts.append({k: number(v, f"{path}.list[{i}].{k}") for k, v in p.items()})
        elif isinstance(p, list):
            if len(p) != len(names):
                raise ConfigError(f"{path}.list[{i}]", f"expected {len(names)} values {list(names)}")
            pts.append({k: number(v, f"{path}.list[{i}][{j}]") for j, (k, v) in enumerate(zip(names, p))})
        else:
            raise ConfigError(f"{path}.list[{i}]", "expected a list or mapping")
    if "grid" in raw:
        pts.extend(grid_points(_mapping(raw["grid"], f"{path}.grid"), names, f"{path}.grid"))
    unknown = set(raw) - {"list", "grid"}
    if unknown:
        raise ConfigError(path, f"unknown keys {sorted(unknown)}")
    if not pts:
        raise ConfigError(path, "no points given")
    if len(pts) > MAX_POINTS:
        raise ConfigError(path, f"{len(pts)} points, limit is {MAX_POINTS}")
    return pts


def _chart(raw, path: str) -> ImmersionChart:
    raw = _mapping(raw, path)
    for key in ("coords", "components", "base_dim", "fiber_dim"):
        if key not in raw:
            raise ConfigError(f"{path}.{key}", "required")
    coords = [str(c) for c in raw["coords"]]
    domain = {}
    for k, v in (raw.get("domain") or {}).items():
        if not isinstance(v, list) or len(v) != 2:
            raise ConfigError(f"{path}.domain.{k}", "expected [lo, hi]")
        domain[k] = (number(v[0], f"{path}.domain.{k}[0]"), number(v[1], f"{path}.domain.{k}[1]"))
    warp = raw.get("warp")
    if isinstance(warp, (int, float)) and not isinstance(warp, bool):
        warp = float(warp)
    try:
        return ImmersionChart.from_strings(
            coords, [str(s) for s in raw["components"]],
            _int(raw["base_dim"], f"{path}.base_dim", 0), _int(raw["fiber_dim"], f"{path}.fiber_dim", 1),
            warp=warp, domain=domain, key=raw.get("key"),
            base_curvature=raw.get("base_curvature"), fiber_curvature=raw.get("fiber_curvature"),
        )
    except ConfigError:
        raise
    except CRWarpError as exc:
        raise ConfigError(path, str(exc)) from None


def _synthetic(raw, path: str) -> SyntheticScenario:
    raw = _mapping(raw, path)
    for key in ("n1", "n2", "c", "h"):
        if key not in raw:
            raise ConfigError(f"{path}.{key}", "required")
    n1 = _int(raw["n1"], f"{path}.n1", 0)
    n2 = _int(raw["n2"], f"{path}.n2", 0)
    c = number(raw["c"], f"{path}.c")
    try:
        h = np.array(raw["h"], dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{path}.h", "expected a nested numeric array") from None
    warp = None
    if raw.get("warp") is not None:
        w = _mapping(raw["warp"], f"{path}.warp")
        try:
            warp = WarpData(number(w.get("f"), f"{path}.warp.f"),
                            number(w.get("grad_norm_sq", 0.0), f"{path}.warp.grad_norm_sq"),
                            number(w.get("laplacian_f", 0.0), f"{path}.warp.laplacian_f"))
        except CRWarpError as exc:
            raise ConfigError(f"{path}.warp", str(exc)) from None
    opt = {k: number(raw[k], f"{path}.{k}") for k in ("delta_NT", "delta_Nperp", "fiber_curvature")
           if raw.get(k) is not None}
    try:
        return SyntheticScenario(n1, n2, c, h, warp, **opt)
    except CRWarpError as exc:
        raise ConfigError(path, str(exc)) from None


def parse_scenario(doc: Any, name: str = "scenario") -> Scenario:
    doc = _mapping(doc, "<root>")
    mode = doc.get("mode")
    if mode not in MODES:
        raise ConfigError("mode", f"expected one of {MODES}, got {mode!r}")
    seed = doc.get("seed")
    if seed is not None:
        seed = _int(seed, "seed", 0)
    try:
        tol = DEFAULT.updated(**{k: number(v, f"tolerances.{k}")
                                 for k, v in _mapping(doc.get("tolerances") or {}, "tolerances").items()})
    except (TypeError, KeyError) as exc:
        raise ConfigError("tolerances", str(exc.args[0])) from None
    try:
        budget = PlaneBudget(**_mapping(doc.get("budget") or {}, "budget"))
    except TypeError as exc:
        raise ConfigError("budget", str(exc)) from None
    sc = Scenario(mode, seed, str(doc.get("name", name)), tol, budget)
    if mode == "immersion":
        raw = doc.get("chart")
        if raw is None:
            raise ConfigError("chart", "required in immersion mode")
        raw = _mapping(raw, "chart")
        if "gallery" in raw:
            sc.entry = gallery.get(str(raw["gallery"]))
            sc.chart = sc.entry.chart
            sc.cr_warped = sc.entry.cr_warped
            sc.points = _points(doc.get("points"), list(sc.entry.defaults), "points",
                                sc.entry.default_grid)
        else:
            sc.chart = _chart(raw, "chart")
            sc.cr_warped = bool(raw.get("cr_warped", True))
            sc.points = _points(doc.get("points"), list(sc.chart.coords), "points")
        amb = doc.get("ambient")
        if amb is not None:
            amb = _mapping(amb, "ambient")
            if number(amb.get("c", 0.0), "ambient.c") != 0.0:
                raise ConfigError("ambient.c", "immersion mode supports the flat ambient (c = 0) only")
            if "m" in amb and _int(amb["m"], "ambient.m", 1) != sc.chart.m:
                raise ConfigError("ambient.m", f"chart maps into C^{sc.chart.m}")
        if seed is None and max(sc.chart.base_dim, sc.chart.fiber_dim) >= 3:
            raise ConfigError("seed", "required: a factor of dimension >= 3 needs sampled minimization")
    elif mode == "synthetic":
        raw = doc.get("synthetic")
        if raw is None:
            raise ConfigError("synthetic", "required in synthetic mode")
        if isinstance(raw, Mapping) and "cases" in raw:
            sc.cases = [_synthetic(c, f"synthetic.cases[{i}]") for i, c in enumerate(raw["cases"])]
        else:
            sc.cases = [_synthetic(raw, "synthetic")]
        if seed is None and any(max(c.n1, c.n2) >= 3 for c in sc.cases):
            raise ConfigError("seed", "required: a block of dimension >= 3 needs sampled minimization")
    else:
        lem = _mapping(doc.get("lemmas") or {}, "lemmas")
        sc.lemma_count = _int(lem.get("count", 1000), "lemmas.count", 1)
        if seed is None:
            raise ConfigError("seed", "required in lemmas mode")
    return sc


def load_scenario(path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read: {exc.strerror}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"invalid YAML: {exc}") from None
    return parse_scenario(doc, p.stem)


# ---------------------------------------------------------------- execution

def _record(index: int, label: dict, fn, tol: Tolerances) -> dict:
    rec = {"index": index, "input": label, "tolerances": tol.as_dict()}
    try:
        rep = fn()
    except CRWarpError as exc:
        rec.update({"status": "error", "error": {"type": type(exc).__name__, "message": str(exc)}})
        return rec
    rec.update(rep.as_dict())
    return rec


def run_scenario(sc: Scenario | str | Path) -> dict:
    if not isinstance(sc, Scenario):
        sc = load_scenario(sc)
    if sc.mode == "lemmas":
        summary = run_lemma_suite(sc.seed, sc.lemma_count, sc.tolerances)
        return _document(sc, [], lemma_summary=summary)
    seed = sc.seed or 0
    records = []
    if sc.mode == "immersion":
        for i, p in enumerate(sc.points):
            if sc.entry is not None:
                coords = sc.entry.point(**p)
                label = {"params": sc.entry.params(**p), "coords": list(coords)}
            else:
                coords = tuple(p[k] for k in sc.chart.coords)
                label = {"coords": list(coords)}
            records.append(_record(
                i, label,
                lambda coords=coords: evaluate_chart(sc.chart, coords, sc.budget, seed,
                                                     sc.tolerances, sc.cr_warped),
                sc.tolerances))
    else:
        for i, case in enumerate(sc.cases):
            label = {"n1": case.n1, "n2": case.n2, "c": case.c}
            records.append(_record(i, label,
                                   lambda case=case: evaluate_synthetic(case, sc.budget, seed, sc.tolerances),
                                   sc.tolerances))
    return _document(sc, records)


def _document(sc: Scenario, records: list[dict], lemma_summary: dict | None = None) -> dict:
    counts = {k: 0 for k in ("pass", "boundary", "fail", "error", "n/a")}
    for r in records:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    failed = counts["fail"] + counts["error"]
    if lemma_summary is not None:
        failed += 0 if lemma_summary["ok"] else 1
    doc = {
        "schema": SCHEMA,
        "scenario": sc.name,
        "mode": sc.mode,
        "seed": sc.seed,
        "tolerances": sc.tolerances.as_dict(),
        "budget": asdict(sc.budget),
        "records": records,
        "summary": {"points": len(records), **counts, "ok": failed == 0},
    }
    if sc.chart is not None:
        doc["chart"] = sc.chart.key or "custom"
    if lemma_summary is not None:
        doc["lemmas"] = lemma_summary
    return doc


def exit_status(doc: Mapping) -> int:
    return 0 if doc["summary"]["ok"] else 1


# ------------------------------------------------------------- lemma suite

def lemma1_instances(rng: np.random.Generator, count: int, equality: bool = False):
    for _ in range(count):
        n = int(rng.integers(3, 9))
        scale = 10.0 ** rng.uniform(-2, 2)
        if equality:
            s = rng.normal() * scale
            a1 = rng.normal() * scale
            alphas = np.concatenate([[a1, s - a1], np.full(n - 2, s)])
        else:
            alphas = rng.normal(size=n) * scale
        yield alphas, lemma1_beta(alphas)


def random_h(rng: np.random.Generator, n: int, normals: int, batch: int | None = None) -> np.ndarray:
    shape = (normals, n, n) if batch is None else (batch, normals, n, n)
    h = rng.normal(size=shape)
    return 0.5 * (h + np.swapaxes(h, -1, -2))


def run_lemma_suite(seed: int, count: int, tol: Tolerances = DEFAULT) -> dict:
    """Randomized checks of the three algebraic lemmas and of Theta >= 0."""
    if count < 1:
        raise ConfigError("count", "must be >= 1")
    rng = np.random.default_rng(seed)
    min_slack = math.inf
    max_constraint = 0.0
    false_equal = 0
    for alphas, beta in lemma1_instances(rng, count):
        r = lemma1_check(alphas, beta)
        scale = max(1.0, float(np.max(np.abs(alphas)))) ** 2
        min_slack = min(min_slack, r.slack / scale)
        max_constraint = max(max_constraint, r.constraint_residual / scale)
        false_equal += r.equality
    eq_found = 0
    eq_min_abs = 0.0
    for alphas, beta in lemma1_instances(rng, count, equality=True):
        r = lemma1_check(alphas, beta)
        eq_found += r.equality
        scale = max(1.0, float(np.max(np.abs(alphas)))) ** 2
        eq_min_abs = max(eq_min_abs, abs(r.slack) / scale)
    profiles = {}
    theta_min = math.inf
    for n1, n2 in LEMMA_PROFILES:
        n = n1 + n2
        worst2 = worst3 = 0.0
        # batches per codimension; the split keeps the total at `count`
        sizes = np.bincount(rng.integers(1, 5, size=count), minlength=5)
        for normals, size in enumerate(sizes):
            if size == 0:
                continue
            h = random_h(rng, n, normals, size)
            worst2 = max(worst2, float(np.max(lemma_identity_residual("lemma2", h))))
            worst3 = max(worst3, float(np.max(lemma_identity_residual("lemma3", h, n1))))
            theta_min = min(theta_min, min(theta(x, n1) for x in h[: min(size, 100)]))
        profiles[f"{n1},{n2}"] = {"lemma2_max_residual": worst2, "lemma3_max_residual": worst3}
    max_res = max(max(v.values()) for v in profiles.values())
    ok = (min_slack >= -tol.exact and max_res < tol.exact and eq_found == count
          and false_equal == 0 and theta_min >= -tol.exact)
    return {
        "seed": seed, "count": count,
        "lemma1": {"min_slack": min_slack, "max_constraint_residual": max_constraint,
                   "random_flagged_equal": false_equal,
                   "equality_family_detected": eq_found, "equality_family_max_abs_slack": eq_min_abs},
        "lemma2_3": profiles,
        "max_identity_residual": max_res,
        "theta_min": theta_min,
        "ok": ok,
    }

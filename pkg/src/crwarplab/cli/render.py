"""JSON and aligned-table renderings of report documents."""
from __future__ import annotations

import json
from typing import Mapping


def to_json(doc: Mapping) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    if isinstance(v, dict):
        return " ".join(f"{k}={_fmt(x)}" for k, x in v.items())
    return str(v)


COLUMNS = (
    ("#", lambda r: r["index"]),
    ("input", lambda r: r["input"].get("params", r["input"].get("coords", r["input"]))),
    ("status", lambda r: r["status"]),
    ("lhs_i", lambda r: r.get("lhs_i")),
    ("rhs_i", lambda r: r.get("rhs_i")),
    ("slack_i", lambda r: r.get("slack_i")),
    ("slack_ii", lambda r: r.get("slack_ii")),
    ("theta", lambda r: r.get("theta")),
    ("fund_res", lambda r: r.get("fundamental_residual")),
    ("warp_res", lambda r: r.get("warp_identity_residual")),
    ("eq_i", lambda r: r.get("equality_i")),
    ("eq_ii", lambda r: r.get("equality_ii")),
)


def table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    out = [line(header), line(["-" * w for w in widths])]
    out.extend(line(r) for r in rows)
    return "\n".join(out)


def to_table(doc: Mapping) -> str:
    parts = [f"schema {doc['schema']}  scenario {doc['scenario']}  mode {doc['mode']}  seed {_fmt(doc['seed'])}"]
    if doc.get("records"):
        rows = []
        for r in doc["records"]:
            if r["status"] == "error":
                rows.append([_fmt(r["index"]), _fmt(r["input"]), "error",
                             r["error"]["type"] + ": " + r["error"]["message"]]
                            + [""] * (len(COLUMNS) - 4))
            else:
                rows.append([_fmt(get(r)) for _, get in COLUMNS])
        parts.append(table(rows, [h for h, _ in COLUMNS]))
        for r in doc["records"]:
            fails = r.get("failures")
            if fails:
                parts.append(f"record {r['index']}: failed {', '.join(fails)}")
    lem = doc.get("lemmas")
    if lem:
        rows = [["lemma1 min slack", _fmt(lem["lemma1"]["min_slack"])],
                ["lemma1 max constraint residual", _fmt(lem["lemma1"]["max_constraint_residual"])],
                ["lemma1 random flagged equal", _fmt(lem["lemma1"]["random_flagged_equal"])],
                ["lemma1 equality family detected", f"{lem['lemma1']['equality_family_detected']}/{lem['count']}"]]
        for prof, v in lem["lemma2_3"].items():
            rows.append([f"lemma2 residual ({prof})", _fmt(v["lemma2_max_residual"])])
            rows.append([f"lemma3 residual ({prof})", _fmt(v["lemma3_max_residual"])])
        rows.append(["theta min", _fmt(lem["theta_min"])])
        parts.append(table(rows, ["check", "value"]))
    s = doc["summary"]
    parts.append("summary: " + ", ".join(f"{k} {s[k]}" for k in ("points", "pass", "boundary", "fail", "error", "n/a"))
                 + ("  OK" if s["ok"] else "  FAILED"))
    return "\n".join(parts) + "\n"

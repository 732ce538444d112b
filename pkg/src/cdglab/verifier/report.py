"""Report assembly and the JSON wire format (schema version 1)."""
from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor

from .scenarios import Context, Expectation, Scenario

SCHEMA_VERSION = 1
TIMING_KEYS = ("seconds",)


def _plain(x):
    """Make a witness JSON-native (tuples become lists, scalars become strings)."""
    return json.loads(json.dumps(x, default=str))


def run_scenario(sc: Scenario, ctx: Context) -> dict:
    t0 = time.perf_counter()
    try:
        exps = sc.run(ctx)
        error = None
    except Exception as e:  # a crashing scenario is a failed scenario, not a crashed run
        exps = [Expectation("scenario ran to completion", "trivial", False, f"{type(e).__name__}: {e}")]
        error = f"{type(e).__name__}: {e}"
    secs = time.perf_counter() - t0
    entry = {
        "name": sc.name,
        "summary": sc.summary,
        "ok": all(x.ok for x in exps),
        "expectations": [x.to_json() for x in exps],
        "seconds": round(secs, 4),
    }
    if error:
        entry["error"] = error
    return _plain(entry)


def run(scenarios: list[Scenario], ctx: Context, workers: int = 1) -> dict:
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            entries = list(ex.map(lambda s: run_scenario(s, ctx), scenarios))
    else:
        entries = [run_scenario(s, ctx) for s in scenarios]
    entries.sort(key=lambda e: e["name"])
    return {
        "schema_version": SCHEMA_VERSION,
        "field": ctx.field.to_string(),
        "window": list(ctx.window),
        "seed": ctx.seed,
        "bar_convention": ctx.bar_convention,
        "ok": all(e["ok"] for e in entries),
        "scenarios": entries,
    }


def emit(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse(text: str) -> dict:
    data = json.loads(text)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema {data.get('schema_version')!r}")
    return data


def strip_timing(report: dict) -> dict:
    """The report with timing fields removed, for determinism comparisons."""
    out = dict(report)
    out["scenarios"] = [{k: v for k, v in e.items() if k not in TIMING_KEYS} for e in report["scenarios"]]
    return out

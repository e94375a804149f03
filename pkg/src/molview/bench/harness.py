"""Benchmark harness: stability and frame-time grading per system.

Every system runs in a child process so a crash marks that row as failed
without taking down the harness. Fluidity grades map median frame time onto
fixed thresholds; the mapping stands in for interactive judgment and is a
reproducibility device, not a claim of equivalence.
"""

from __future__ import annotations

import json
import subprocess
import sys
from dataclasses import asdict, dataclass, field

GRADE_HIGH_MS = 33.0
GRADE_MODERATE_MS = 100.0
GRADE_LOW_MS = 1000.0
DEFAULT_TIMEOUT_S = 300.0
BENCH_WIDTH = 1280
BENCH_HEIGHT = 720
DEFAULT_FRAMES = 30


@dataclass
class BenchRow:
    name: str
    atom_count: int = 0
    parse_time_s: float = 0.0
    build_time_s: float = 0.0
    median_frame_ms: float = float("inf")
    peak_memory_bytes: int = 0
    stable: bool = False
    grade: str = "Frozen"
    error: str = ""


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({"rows": [asdict(r) for r in self.rows]}, indent=1,
                          sort_keys=True)

    def to_table(self) -> str:
        header = (
            f"{'System':<28} {'Atoms':>12} {'Parse(s)':>9} {'Build(s)':>9} "
            f"{'Frame(ms)':>10} {'Stability':>10} {'Fluidity':>9}"
        )
        lines = [header, "-" * len(header)]
        for r in self.rows:
            frame = "-" if r.median_frame_ms == float("inf") else f"{r.median_frame_ms:.1f}"
            lines.append(
                f"{r.name:<28} {r.atom_count:>12} {r.parse_time_s:>9.2f} "
                f"{r.build_time_s:>9.2f} {frame:>10} "
                f"{'ok' if r.stable else 'FAILED':>10} {r.grade:>9}"
            )
        return "\n".join(lines)


def grade_frame_time(median_ms: float) -> str:
    """[0,33) High, [33,100) Moderate, [100,1000) Low, beyond (or crash) Frozen."""
    if median_ms < GRADE_HIGH_MS:
        return "High"
    if median_ms < GRADE_MODERATE_MS:
        return "Moderate"
    if median_ms < GRADE_LOW_MS:
        return "Low"
    return "Frozen"


def parse_manifest(text: str) -> list[dict]:
    """One source per line: a file path or synthetic:<n>[:style]; '#' comments.

    A line may append key=value options (frames=N, seed=N).
    """
    sources = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        spec = parts[0]
        opts = {}
        for p in parts[1:]:
            if "=" in p:
                key, val = p.split("=", 1)
                opts[key] = val
        entry = {"frames": int(opts.get("frames", DEFAULT_FRAMES)),
                 "seed": int(opts.get("seed", 42))}
        if spec.startswith("synthetic:"):
            bits = spec.split(":")
            entry["kind"] = "synthetic"
            entry["n_atoms"] = int(bits[1])
            entry["style"] = bits[2] if len(bits) > 2 else "globular"
            entry["name"] = f"synthetic-{entry['style']}-{entry['n_atoms']}"
        else:
            entry["kind"] = "file"
            entry["path"] = spec
            entry["name"] = spec.rsplit("/", 1)[-1]
        sources.append(entry)
    return sources


def run_benchmark(sources: list[dict], timeout_s: float = DEFAULT_TIMEOUT_S,
                  threads: int = 0) -> BenchReport:
    """Each source measured in an isolated child process."""
    report = BenchReport()
    for entry in sources:
        row = BenchRow(name=entry["name"])
        payload = json.dumps({**entry, "threads": threads,
                              "width": BENCH_WIDTH, "height": BENCH_HEIGHT})
        try:
            proc = subprocess.run(
                [sys.executable, "-m", "molview.bench.worker"],
                input=payload.encode(), capture_output=True, timeout=timeout_s,
            )
        except subprocess.TimeoutExpired:
            row.error = f"timed out after {timeout_s:.0f}s"
            report.rows.append(row)
            continue
        if proc.returncode != 0:
            tail = proc.stderr.decode(errors="replace").strip().splitlines()
            row.error = tail[-1] if tail else f"exit code {proc.returncode}"
            report.rows.append(row)
            continue
        try:
            measured = json.loads(proc.stdout.decode())
        except json.JSONDecodeError:
            row.error = "worker produced unreadable output"
            report.rows.append(row)
            continue
        row.atom_count = measured["atom_count"]
        row.parse_time_s = measured["parse_time_s"]
        row.build_time_s = measured["build_time_s"]
        row.median_frame_ms = measured["median_frame_ms"]
        row.peak_memory_bytes = measured["peak_memory_bytes"]
        row.stable = True
        row.grade = grade_frame_time(row.median_frame_ms)
        report.rows.append(row)
    return report

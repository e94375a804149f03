"""Child-process measurement: parse/build/render one system, JSON on stdout."""

from __future__ import annotations

import json
import resource
import sys
import time

import numpy as np


def measure(entry: dict) -> dict:
    from ..geom import build_vdw_batch
    from ..model.scene import RepresentationSpec
    from ..render import CameraState, PostFxParams, frame_scene, rasterize
    from ..render.shading import post_process, shade

    t0 = time.perf_counter()
    if entry["kind"] == "synthetic":
        from .synthetic import generate_synthetic
        mol = generate_synthetic(entry["n_atoms"], entry.get("style", "globular"),
                                 seed=entry.get("seed", 42))
    else:
        from ..molio import load_file
        mol = load_file(entry["path"])
    parse_time = time.perf_counter() - t0

    threads = entry.get("threads", 0) or 1
    t0 = time.perf_counter()
    batch = build_vdw_batch(mol, np.arange(mol.n_atoms), RepresentationSpec())
    build_time = time.perf_counter() - t0

    cam = frame_scene(CameraState(), *mol.bounds())
    params = PostFxParams(shading="matte", ssao_enabled=False)
    width, height = entry.get("width", 1280), entry.get("height", 720)
    times = []
    for _ in range(entry.get("frames", 30)):
        t0 = time.perf_counter()
        g = rasterize([batch], cam, width, height, threads=threads)
        img = shade(g, params)
        post_process(img, g, params)
        times.append((time.perf_counter() - t0) * 1000.0)

    peak_kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    return {
        "atom_count": mol.n_atoms,
        "parse_time_s": parse_time,
        "build_time_s": build_time,
        "median_frame_ms": float(np.median(times)) if times else float("inf"),
        "peak_memory_bytes": int(peak_kb) * 1024,
    }


def main():
    entry = json.loads(sys.stdin.read())
    print(json.dumps(measure(entry)))


if __name__ == "__main__":
    main()

"""Small shared utilities: grid parsing, CSV formatting, thread capping."""
from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def parse_grid(spec):
    """Parse a scalar, comma list, or "lo:hi:step" grid spec into a 1-D
    float array.

    The grid includes lo and every lo + k*step up to hi (hi itself when the
    step lands on it within 1e-12).
    """
    text = str(spec).strip()
    if "," in text:
        return np.array([float(p) for p in text.split(",") if p.strip()])
    if ":" not in text:
        return np.array([float(text)])
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid spec must be lo:hi:step, got {spec!r}")
    lo, hi, step = (float(p) for p in parts)
    if not np.isfinite([lo, hi, step]).all():
        raise ValueError(f"grid spec must be finite, got {spec!r}")
    if hi < lo:
        raise ValueError(f"grid spec needs lo <= hi, got {spec!r}")
    if step <= 0:
        raise ValueError(f"grid spec needs step > 0, got {spec!r}")
    return np.arange(lo, hi + step * 1e-12 + 1e-15, step)


def fmt12(x) -> str:
    """Format a float with 12 significant digits, locale independent."""
    return f"{float(x):.12g}"


def write_csv(path, header, rows):
    """Write rows of numbers as CSV with 12-significant-digit floats."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt12(x) for x in row])


def thread_cap() -> int:
    """Worker cap from the GWC_THREADS environment variable (>= 1)."""
    raw = os.environ.get("GWC_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        cap = os.cpu_count() or 1
    return cap


def parallel_map(fn, items):
    """Map fn over items with a capped thread pool, preserving order.

    Falls back to a plain loop when the cap is 1 so single-threaded runs
    stay easy to profile.
    """
    items = list(items)
    workers = min(thread_cap(), max(1, len(items)))
    if workers == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))

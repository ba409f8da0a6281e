"""CSV and OBJ writers for sampled curvature loci."""
from __future__ import annotations

import io

import numpy as np

from .loci import LocusSample


def _fmt(x: float) -> str:
    return repr(float(x) + 0.0)


def locus_csv(sample: LocusSample) -> str:
    k = sample.points.shape[1]
    out = io.StringIO()
    out.write(",".join(["theta", "phi_or_c"] + [f"n{i + 1}" for i in range(k)]) + "\n")
    for par, pt in zip(sample.params, sample.points):
        out.write(",".join(_fmt(v) for v in (*par, *pt)) + "\n")
    return out.getvalue()


def locus_obj(sample: LocusSample) -> str:
    """Point cloud with quad faces over the parameter grid; needs a 3-dimensional normal space."""
    k = sample.points.shape[1]
    if k != 3:
        raise ValueError(f"OBJ export needs a 3-dimensional normal space, this locus lives in R^{k}")
    out = io.StringIO()
    out.write(f"# curvature locus, {sample.manifold_class}, grid {sample.shape[0]}x{sample.shape[1]}\n")
    for p in sample.points:
        out.write("v " + " ".join(_fmt(v) for v in p) + "\n")
    rows, cols = sample.shape
    if rows > 1 and cols > 1:
        idx = np.arange(rows * cols).reshape(rows, cols) + 1
        last = rows if sample.periodic_theta and rows > 2 else rows - 1
        for i in range(last):
            i2 = (i + 1) % rows
            for j in range(cols - 1):
                out.write(f"f {idx[i, j]} {idx[i2, j]} {idx[i2, j + 1]} {idx[i, j + 1]}\n")
    return out.getvalue()


def write_locus(sample: LocusSample, path, fmt: str = "csv") -> None:
    text = locus_csv(sample) if fmt == "csv" else locus_obj(sample)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)

"""On-disk formats.

TorusField: one JSON header line {K, n, real} followed by little-endian
float64 (re, im) pairs in lexicographic frequency order. TorusSinogram: a
directory with meta.json, mean.txt, and one field file per subspace named
by its serialized basis. Images: 16-bit P5 PGM with the linear scaling
recorded in the header comment. All writers are pure functions of their
inputs, so identical runs produce identical bytes.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .fields import TorusField
from .lattice import RationalSubspace
from .sinogram import TorusSinogram


def write_field(f: TorusField, path) -> None:
    header = json.dumps({"K": f.K, "n": f.n, "real": bool(f.real)}, sort_keys=True)
    flat = np.ascontiguousarray(f.coeffs.ravel(), dtype="<c16")
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii") + b"\n")
        fh.write(flat.tobytes())


def read_field(path) -> TorusField:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode("ascii"))
        raw = fh.read()
    n, K = int(header["n"]), int(header["K"])
    arr = np.frombuffer(raw, dtype="<c16").astype(np.complex128)
    return TorusField(n, K, arr.reshape((2 * K + 1,) * n), real=bool(header["real"]))


def _slice_filename(A: RationalSubspace) -> str:
    rows = "__".join("_".join(str(x) for x in r) for r in A.basis)
    return f"slice_{rows}.tfield"


def write_sinogram(g: TorusSinogram, directory) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    meta = {
        "n": g.n,
        "d": g.d,
        "K": g.K,
        "subspaces": [A.serialize() for A in g.subspaces],
    }
    (d / "meta.json").write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    (d / "mean.txt").write_text(f"{g.mean.real:.17g} {g.mean.imag:.17g}\n")
    for A in g.subspaces:
        write_field(g.slices[A], d / _slice_filename(A))


def read_sinogram(directory) -> TorusSinogram:
    d = Path(directory)
    meta = json.loads((d / "meta.json").read_text())
    re, im = (d / "mean.txt").read_text().split()
    mean = complex(float(re), float(im))
    slices = {}
    for text in meta["subspaces"]:
        A = RationalSubspace.parse(text)
        slices[A] = read_field(d / _slice_filename(A))
    return TorusSinogram(int(meta["n"]), int(meta["d"]), int(meta["K"]), mean, slices)


def write_pgm(image: np.ndarray, path) -> None:
    """16-bit grayscale P5 with linear min-max scaling noted in the comment."""
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError("image must be two-dimensional")
    lo, hi = float(img.min()), float(img.max())
    if hi > lo:
        scaled = np.round((img - lo) / (hi - lo) * 65535.0)
    else:
        scaled = np.zeros_like(img)
    data = scaled.astype(">u2").tobytes()
    header = (f"P5\n# linear scale min={lo:.17g} max={hi:.17g}\n"
              f"{img.shape[1]} {img.shape[0]}\n65535\n")
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(data)


def read_pgm(path) -> tuple[np.ndarray, float, float]:
    """Read back a P5 written by write_pgm: (scaled array, min, max)."""
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"P5":
            raise ValueError("not a P5 PGM")
        comment = fh.readline().decode("ascii")
        parts = dict(tok.split("=") for tok in comment.replace("#", "").split() if "=" in tok)
        lo, hi = float(parts["min"]), float(parts["max"])
        w, h = (int(t) for t in fh.readline().split())
        maxval = int(fh.readline())
        raw = np.frombuffer(fh.read(), dtype=">u2").reshape(h, w)
    img = raw.astype(np.float64) / maxval * (hi - lo) + lo if hi > lo else np.full((h, w), lo)
    return img, lo, hi


def write_csv(path, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(f"{x:.17g}" if isinstance(x, float) else str(x) for x in row))
    Path(path).write_text("\n".join(lines) + "\n")


def output_root(default: str = ".") -> Path:
    """Output directory root, overridable through TORUSRADON_OUT."""
    return Path(os.environ.get("TORUSRADON_OUT", default))

"""Command-line interface.

Subcommands: phantom, forward, reconstruct, sweep, bridge, selftest.
Flags mirror the sweep config keys and override them; the output root can
also come from the TORUSRADON_OUT environment variable. Exit code 0 means
every enabled invariant check passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bridge import bridge_ingest, disk_sinogram, sinogram_from_csv, sinogram_to_csv
from .errors import TorusRadonError
from .experiments import ExperimentConfig, run_experiment, selftest
from .fields import to_samples
from .inversion import adjoint_normalized, invert_filtered, invert_sum, reconstruct_slices
from .io import output_root, read_field, read_sinogram, write_field, write_pgm, write_sinogram
from .lattice import direction_cover
from .phantoms import phantom
from .regularization import tikhonov_reconstruct
from .sinogram import canonical_weight
from .transforms import forward_sinogram


def _out_path(arg: str | None, default_name: str) -> Path:
    if arg:
        return Path(arg)
    return output_root() / default_name


def cmd_phantom(args) -> int:
    params = json.loads(args.params) if args.params else {}
    if args.kind == "harmonic" and not params:
        params = {"frequencies": [[1, 2]], "amplitudes": [1.0]}
    if args.kind == "disk" and "radius" not in params:
        params["radius"] = args.radius
    ph = phantom(args.kind, params, args.band, args.grid)
    path = _out_path(args.out, "phantom.tfield")
    write_field(ph.field, path)
    if args.image:
        write_pgm(to_samples(ph.field, args.grid).real, args.image)
    info = {"kind": ph.kind, "mean": ph.field.coeff((0,) * ph.field.n).real}
    if ph.analytic_mean is not None:
        info["analytic_mean"] = ph.analytic_mean
    if ph.truncation_residual is not None:
        info["truncation_residual"] = ph.truncation_residual
    print(json.dumps(info, sort_keys=True))
    print(f"wrote {path}")
    return 0


def cmd_forward(args) -> int:
    f = read_field(args.field)
    cover = direction_cover(args.cover if args.cover is not None else f.K)
    g = forward_sinogram(f, cover)
    path = _out_path(args.out, "sinogram")
    write_sinogram(g, path)
    print(f"wrote {path} ({len(g.subspaces)} slices, K={g.K})")
    return 0


def cmd_reconstruct(args) -> int:
    g = read_sinogram(args.sinogram)
    if args.method == "filtered":
        rec = invert_filtered(g, canonical_weight(g.subspaces, g.K))
    elif args.method == "normalized":
        rec = adjoint_normalized(g, canonical_weight(g.subspaces, g.K))
    elif args.method == "slice":
        rec = reconstruct_slices(g)
    elif args.method == "sum":
        rec = invert_sum(g.without_mean())
        arr = rec.coeffs.copy()
        arr[(g.K,) * g.n] += g.mean
        from .fields import TorusField

        rec = TorusField(g.n, g.K, arr)
    else:
        rec = tikhonov_reconstruct(g, args.r, args.s, args.alpha)
    path = _out_path(args.out, "recon.tfield")
    write_field(rec, path)
    if args.image:
        write_pgm(to_samples(rec, args.grid).real, args.image)
    print(f"wrote {path}")
    return 0


def cmd_sweep(args) -> int:
    raw = json.loads(Path(args.config).read_text())
    for key in ("seed", "band", "grid", "method", "output"):
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    if raw.get("output") is None:
        raw["output"] = str(output_root() / "sweep")
    cfg = ExperimentConfig.from_json(json.dumps(raw))
    reports = run_experiment(cfg)
    for rep in reports:
        eps = rep.parameters.get("eps", 0.0)
        err = rep.errors.get("grid_l2", float("nan"))
        print(f"eps={eps:g} grid_l2={err:.6g} ({rep.duration_s:.2f}s)")
    print(f"wrote {cfg.output}")
    return 0


def cmd_bridge(args) -> int:
    cover = direction_cover(args.cover)
    if args.csv:
        sino = sinogram_from_csv(Path(args.csv).read_text(), args.radius)
    else:
        sino = disk_sinogram(cover, args.offsets, args.radius)
        if args.emit_csv:
            Path(args.emit_csv).write_text(sinogram_to_csv(sino))
    g = bridge_ingest(sino, cover, args.band)
    path = _out_path(args.out, "bridged_sinogram")
    write_sinogram(g, path)
    print(f"wrote {path} ({len(g.subspaces)} slices)")
    return 0


def cmd_selftest(args) -> int:
    ok, results = selftest(args.out, seed=args.seed)
    for name in sorted(results):
        r = results[name]
        print(f"{'PASS' if r['passed'] else 'FAIL'} {name} (metric {r['metric']:.3e})")
    print("selftest:", "OK" if ok else "FAILED")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torusradon",
                                description="Tomography on flat tori: transforms, inversion, regularization")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("phantom", help="emit a band-limited phantom field")
    q.add_argument("--kind", default="disk", choices=["harmonic", "disk", "multi-bump"])
    q.add_argument("--params", help="JSON phantom parameters")
    q.add_argument("--radius", type=float, default=0.2)
    q.add_argument("--band", type=int, default=16)
    q.add_argument("--grid", type=int, default=128)
    q.add_argument("--out")
    q.add_argument("--image", help="also write a PGM rendering")
    q.set_defaults(fn=cmd_phantom)

    q = sub.add_parser("forward", help="forward transform over a direction cover")
    q.add_argument("--field", required=True)
    q.add_argument("--cover", type=int, help="cover radius (default: the field band)")
    q.add_argument("--out")
    q.set_defaults(fn=cmd_forward)

    q = sub.add_parser("reconstruct", help="invert a stored sinogram")
    q.add_argument("--sinogram", required=True)
    q.add_argument("--method", default="filtered",
                   choices=["slice", "filtered", "normalized", "sum", "tikhonov"])
    q.add_argument("--r", type=float, default=0.0)
    q.add_argument("--s", type=float, default=1.0)
    q.add_argument("--alpha", type=float, default=1e-2)
    q.add_argument("--grid", type=int, default=128)
    q.add_argument("--out")
    q.add_argument("--image")
    q.set_defaults(fn=cmd_reconstruct)

    q = sub.add_parser("sweep", help="run a configured experiment sweep")
    q.add_argument("--config", required=True)
    q.add_argument("--seed", type=int)
    q.add_argument("--band", type=int)
    q.add_argument("--grid", type=int)
    q.add_argument("--method")
    q.add_argument("--output")
    q.set_defaults(fn=cmd_sweep)

    q = sub.add_parser("bridge", help="map Euclidean parallel-beam data onto the torus")
    q.add_argument("--csv", help="Euclidean sinogram CSV (angle_vx,angle_vy,offset,value)")
    q.add_argument("--radius", type=float, default=0.2, help="object support radius")
    q.add_argument("--offsets", type=int, default=256)
    q.add_argument("--cover", type=int, default=16)
    q.add_argument("--band", type=int, default=16)
    q.add_argument("--emit-csv", help="write the generated analytic sinogram here")
    q.add_argument("--out")
    q.set_defaults(fn=cmd_bridge)

    q = sub.add_parser("selftest", help="run the invariant battery")
    q.add_argument("--out", help="write deterministic report artifacts here")
    q.add_argument("--seed", type=int, default=20190614)
    q.set_defaults(fn=cmd_selftest)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except TorusRadonError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

import json

import numpy as np
import pytest

from torusradon.errors import ConfigInvalid
from torusradon.experiments import (
    ExperimentConfig,
    add_noise,
    convergence_rate_experiment,
    derive_seed,
    probe_noise,
    run_experiment,
    selftest,
    splitmix64,
    strategy_bound_experiment,
)
from torusradon.fields import random_field
from torusradon.lattice import direction_cover
from torusradon.sinogram import canonical_weight, is_in_range, sinogram_norm
from torusradon.transforms import forward_sinogram


def make_data(K, rng):
    cover = direction_cover(K)
    f = random_field(2, K, rng, real=True)
    return forward_sinogram(f, cover), canonical_weight(cover, K)


def test_splitmix_deterministic():
    s1, o1 = splitmix64(42)
    s2, o2 = splitmix64(42)
    assert (s1, o1) == (s2, o2)
    assert derive_seed(7, 3) == derive_seed(7, 3)
    assert derive_seed(7, 3) != derive_seed(7, 4)


def test_add_noise_zero_eps_is_identity(rng):
    g, _ = make_data(3, rng)
    assert add_noise(g, 0.0, 1.0, 5) is g


def test_add_noise_exact_norm(rng):
    g, w = make_data(3, rng)
    for t in (-1.0, 0.0, 1.0):
        noisy = add_noise(g, 0.25, t, 17)
        noise_norm = sinogram_norm(noisy - g, t, w)
        assert noise_norm == pytest.approx(0.25, rel=1e-12)


def test_add_noise_respects_range_and_determinism(rng):
    g, _ = make_data(3, rng)
    a = add_noise(g, 0.5, 0.0, 99)
    b = add_noise(g, 0.5, 0.0, 99)
    assert is_in_range(a - g, tol=1e-14)
    assert a.mean == b.mean
    for A in a.subspaces:
        assert np.array_equal(a.slices[A].coeffs, b.slices[A].coeffs)
    c = add_noise(g, 0.5, 0.0, 100)
    assert c.mean != a.mean


def test_probe_noise_concentration(rng):
    g, w = make_data(4, rng)
    probed = probe_noise(g, 0.1, -2.0, (0, 2))
    diff = probed - g
    assert sinogram_norm(diff, -2.0, w) == pytest.approx(0.1, rel=1e-12)
    nz = [(A, k) for A in diff.subspaces for k, _ in diff.slices[A].items()]
    assert {k for _, k in nz} == {(0, 2), (0, -2)}


def test_config_validation_errors():
    with pytest.raises(ConfigInvalid) as ei:
        ExperimentConfig.from_dict({"method": "nope", "band": -1})
    msg = str(ei.value)
    assert "method" in msg and "band" in msg
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_json("{not json")
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_dict({"method": "tikhonov"})


def test_run_experiment_filtered_exact(tmp_path):
    cfg = ExperimentConfig.from_dict({
        "phantom": {"kind": "harmonic", "frequencies": [[1, 2]], "amplitudes": [1.0]},
        "band": 6, "grid": 16, "method": "filtered",
        "output": str(tmp_path / "run"),
    })
    reports = run_experiment(cfg)
    assert len(reports) == 1
    assert reports[0].errors["H0"] < 1e-10
    assert (tmp_path / "run" / "truth.pgm").exists()
    assert (tmp_path / "run" / "sweep.csv").exists()
    assert (tmp_path / "run" / "report.json").exists()


def test_run_experiment_tikhonov_closed_form(tmp_path):
    cfg = ExperimentConfig.from_dict({
        "phantom": {"kind": "harmonic", "frequencies": [[1, 2]], "amplitudes": [1.0]},
        "band": 6, "grid": 16, "method": "tikhonov",
        "reg": {"r": 1.0, "s": 1.0, "alpha": 0.5},
        "error_norms": [1.0],
    })
    rep = run_experiment(cfg)[0]
    # noiseless s = r: reconstruction is truth/(1+alpha), error alpha/(1+alpha)*|f|
    from torusradon.fields import sobolev_norm
    from torusradon.phantoms import phantom

    truth = phantom("harmonic", {"frequencies": [[1, 2]], "amplitudes": [1.0]}, 6, 16).field
    expected = sobolev_norm(truth, 1.0) * 0.5 / 1.5
    assert rep.errors["H1"] == pytest.approx(expected, abs=1e-10)


def test_run_experiment_deterministic_outputs(tmp_path):
    raw = {
        "phantom": {"kind": "disk", "radius": 0.25},
        "band": 6, "grid": 24, "method": "filtered",
        "noise": {"eps": [0.05], "t": 0.0}, "seed": 31415,
    }
    outs = []
    for name in ("a", "b"):
        cfg = ExperimentConfig.from_dict(dict(raw, output=str(tmp_path / name)))
        run_experiment(cfg)
        outs.append(tmp_path / name)
    for rel in ("sweep.csv", "truth.pgm", "report.json", "eps_00/recon.pgm", "eps_00/diff.pgm"):
        assert (outs[0] / rel).read_bytes() == (outs[1] / rel).read_bytes(), rel


def test_strategy_bound_never_violated():
    rows = strategy_bound_experiment(
        eps_list=[1e-1, 1e-2, 1e-3], delta_list=[0.5, 1.0], K=6)
    for eps, delta, alpha, err, bound in rows:
        assert err <= bound


def test_convergence_rate_slope():
    delta, s = 2.0, 2.0
    slope, pts = convergence_rate_experiment(
        [1e-1, 1e-2, 1e-3, 1e-4, 1e-5], delta=delta, s=s, K=16)
    target = delta / (2 * s + delta)
    assert abs(slope - target) <= 0.2 * target


def test_strategy_error_vanishes_monotonically():
    # error -> 0 along alpha = sqrt(eps), allowing 5% realization slack
    cfg = ExperimentConfig.from_dict({
        "phantom": {"kind": "multi-bump", "bumps": [
            {"center": [0.35, 0.55], "width": 0.07, "amplitude": 1.0}]},
        "band": 8, "grid": 24, "method": "tikhonov",
        "reg": {"r": 0.0, "s": 1.0, "schedule": "strategy"},
        "noise": {"eps": [10.0**-i for i in range(1, 7)], "t": 0.0},
        "seed": 20190614,
    })
    errs = [rep.errors["H0"] for rep in run_experiment(cfg)]
    for a, b in zip(errs, errs[1:]):
        assert b <= a * 1.05
    assert errs[-1] < 0.05 * errs[0]


def test_selftest_passes(tmp_path):
    ok, results = selftest(str(tmp_path / "st"))
    assert ok, results
    assert (tmp_path / "st" / "selftest_report.json").exists()
    assert (tmp_path / "st" / "demo_sweep" / "sweep.csv").exists()

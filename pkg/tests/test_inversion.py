import numpy as np
import pytest

from torusradon.errors import IncompleteCover, NonzeroMean, SingularFilter
from torusradon.fields import (
    TorusField,
    bessel_norm,
    field_from_coeffs,
    random_field,
    sobolev_norm,
    unit_harmonic,
)
from torusradon.inversion import (
    adjoint,
    adjoint_normalized,
    equal_split_table,
    field_pairing,
    invert_filtered,
    invert_sum,
    normal_multiplier,
    reconstruct_slices,
    slice_reconstruct_coeff,
    sum_pairing,
)
from torusradon.lattice import (
    direction_cover,
    frequency_band,
    hyperplane_cover,
    line,
    line_cover,
    orthogonal_complement,
    orthogonal_primitive,
    primitive_reduce,
)
from torusradon.sinogram import (
    HEIGHT_DECAY,
    TorusSinogram,
    canonical_weight,
    sinogram_inner,
    sinogram_norm,
    weight_on_family,
)
from torusradon.transforms import forward_sinogram


def planar_setup(K, rng, decay=0.0):
    cover = direction_cover(K)
    f = random_field(2, K, rng, decay=decay)
    g = forward_sinogram(f, cover)
    w = canonical_weight(cover, K)
    return f, g, w


def test_slice_reconstruct_harmonic_collapse():
    K = 3
    f = unit_harmonic(2, K, (1, 2))
    v = primitive_reduce((2, -1))
    g_v = forward_sinogram(f, [v])
    field = field_from_coeffs(2, K, dict(g_v.slices[line(v)].items()) | {(0, 0): g_v.mean})
    got = slice_reconstruct_coeff(field, (1, 2), v)
    assert got == pytest.approx(1.0, abs=1e-12)


def test_slice_reconstruct_constant_both_axes():
    K = 2
    f = field_from_coeffs(2, K, {(0, 0): 5.0})
    for v, axis in [((1, 0), 1), ((0, 1), 0)]:
        vv = primitive_reduce(v)
        g = forward_sinogram(f, [vv])
        field = field_from_coeffs(2, K, {(0, 0): g.mean})
        got = slice_reconstruct_coeff(field, (0, 0), vv, axis=axis)
        assert got == pytest.approx(5.0, abs=1e-12)


def test_slice_reconstruct_all_band(rng):
    K = 4
    f = random_field(2, K, rng)
    errs = []
    for k in frequency_band(2, K, punctured=True):
        v = orthogonal_primitive(k)
        g_v = forward_sinogram(f, [v])
        field = field_from_coeffs(2, K, dict(g_v.slices[line(v)].items()) | {(0, 0): g_v.mean})
        got = slice_reconstruct_coeff(field, k, v)
        errs.append(abs(got - f.coeff(k)))
    assert max(errs) < 1e-10


def test_slice_reconstruct_axis_agreement(rng):
    K = 3
    f = random_field(2, K, rng)
    for k in [(1, 2), (-2, 1), (3, -3)]:
        v = orthogonal_primitive(k)
        g_v = forward_sinogram(f, [v])
        field = field_from_coeffs(2, K, dict(g_v.slices[line(v)].items()) | {(0, 0): g_v.mean})
        a0 = slice_reconstruct_coeff(field, k, v, axis=0)
        a1 = slice_reconstruct_coeff(field, k, v, axis=1)
        assert abs(a0 - a1) < 1e-10


def test_reconstruct_slices_full(rng):
    K = 3
    f, g, _ = planar_setup(K, rng)
    rec = reconstruct_slices(g)
    assert np.max(np.abs(rec.coeffs - f.coeffs)) < 1e-10


def test_slice_path_agrees_with_filtered_path_on_noisy_data(rng):
    # the two inversion routes read the same slice coefficients, so they
    # must agree even when the data is not an exact transform
    from torusradon.experiments import add_noise

    K = 3
    f, g, w = planar_setup(K, rng)
    noisy = add_noise(g, 0.3, 0.0, 2024)
    a = reconstruct_slices(noisy)
    b = invert_filtered(noisy, w)
    assert np.max(np.abs(a.coeffs - b.coeffs)) < 1e-10


def test_adjoint_single_harmonic_identity():
    K = 2
    f = unit_harmonic(2, K, (1, 2))
    cover = direction_cover(K)
    g = forward_sinogram(f, cover)
    w = canonical_weight(cover, K)
    back = adjoint(g, w)
    assert np.max(np.abs(back.coeffs - f.coeffs)) < 1e-14


def test_adjoint_zero():
    K = 2
    cover = direction_cover(K)
    w = canonical_weight(cover, K)
    g = forward_sinogram(field_from_coeffs(2, K, {}), cover)
    assert np.all(adjoint(g, w).coeffs == 0)


@pytest.mark.parametrize("s", [-1.0, 0.0, 1.0])
def test_adjoint_pairing_planar(s, rng):
    K = 3
    cover = direction_cover(K)
    w = canonical_weight(cover, K)
    for _ in range(17):
        f = random_field(2, K, rng)
        h = random_field(2, K, rng)
        g = forward_sinogram(h, cover)
        lhs = sinogram_inner(forward_sinogram(f, cover), g, s, w)
        back = adjoint(g, w)
        bs = (1.0 + np.sum(np.stack(np.meshgrid(*[np.arange(-K, K + 1)] * 2, indexing="ij")) ** 2.0, axis=0)) ** s
        rhs = complex(np.sum(bs * f.coeffs * np.conj(back.coeffs)))
        assert abs(lhs - rhs) < 1e-10


@pytest.mark.parametrize("n,d,K", [(3, 1, 2), (3, 2, 2)])
def test_adjoint_pairing_higher_dim(n, d, K, rng):
    fam = line_cover(K, n) if d == 1 else hyperplane_cover(K, n)
    w = weight_on_family(HEIGHT_DECAY, fam, K)
    for _ in range(10):
        f = random_field(n, K, rng)
        h = random_field(n, K, rng)
        g = forward_sinogram(h, fam)
        lhs = sinogram_inner(forward_sinogram(f, fam), g, 1.0, w)
        back = adjoint(g, w)
        axes = np.meshgrid(*[np.arange(-K, K + 1)] * n, indexing="ij")
        bs = (1.0 + sum(a**2.0 for a in axes)) ** 1.0
        rhs = complex(np.sum(bs * f.coeffs * np.conj(back.coeffs)))
        assert abs(lhs - rhs) < 1e-10


def test_adjoint_pairing_off_range_data(rng):
    # the adjoint only sees orthogonal coefficients, so the pairing holds
    # even when the data violates the support rule
    K = 2
    cover = direction_cover(K)
    w = canonical_weight(cover, K)
    g = forward_sinogram(random_field(2, K, rng), cover)
    bad = dict(g.slices)
    A0 = g.subspaces[0]
    arr = bad[A0].coeffs.copy()
    arr[0, 0] += 3.0  # k = (-K, -K), generally not orthogonal to A0
    bad[A0] = TorusField(2, K, arr)
    g_bad = TorusSinogram(2, 1, K, g.mean, bad)
    f = random_field(2, K, rng)
    lhs = sinogram_inner(forward_sinogram(f, cover), g_bad, 0.0, w)
    rhs = complex(np.sum(f.coeffs * np.conj(adjoint(g_bad, w).coeffs)))
    assert abs(lhs - rhs) < 1e-10


def test_normal_multiplier_examples():
    K = 3
    cover = direction_cover(K)
    w = canonical_weight(cover, K)
    for k in [(1, 0), (2, -1), (3, 3)]:
        assert normal_multiplier(w, k) == pytest.approx(1.0)
    assert normal_multiplier(w, (0, 0)) == pytest.approx(1.0)

    w3 = weight_on_family(HEIGHT_DECAY, line_cover(1, 3), 1)
    assert normal_multiplier(w3, (0, 0, 1)) == pytest.approx(1.0)


def test_normal_operator_diagonal(rng):
    K = 2
    cover = direction_cover(K)
    w = canonical_weight(cover, K)
    for k in [(0, 0), (1, 0), (-2, 1), (2, 2)]:
        e = unit_harmonic(2, K, k)
        out = adjoint(forward_sinogram(e, cover), w)
        expected = normal_multiplier(w, k)
        assert out.coeff(k) == pytest.approx(expected, abs=1e-14)
        rest = out.coeffs.copy()
        rest[k[0] + K, k[1] + K] = 0
        assert np.all(rest == 0)


@pytest.mark.parametrize("n,d,K", [(2, 1, 4), (3, 1, 2), (3, 2, 2)])
def test_invert_filtered_pipeline_identity(n, d, K, rng):
    if d == n - 1 and n == 2:
        fam = direction_cover(K)
        w = canonical_weight(fam, K)
    elif d == n - 1:
        fam = hyperplane_cover(K, n)
        w = weight_on_family(HEIGHT_DECAY, fam, K)
    else:
        fam = line_cover(K, n)
        w = weight_on_family(HEIGHT_DECAY, fam, K)
    for _ in range(3):
        f = random_field(n, K, rng)
        rec = invert_filtered(forward_sinogram(f, fam), w)
        assert np.max(np.abs(rec.coeffs - f.coeffs)) < 1e-12


def test_invert_filtered_singular():
    K = 2
    cover = direction_cover(K)
    w = canonical_weight(cover, K)
    partial = forward_sinogram(random_field(2, K, np.random.default_rng(0)), cover[:2])
    with pytest.raises(SingularFilter):
        invert_filtered(partial, w)


def test_adjoint_normalized_identity_and_norms(rng):
    K = 3
    cover = direction_cover(K)
    w = canonical_weight(cover, K)
    f = random_field(2, K, rng, decay=1.0)
    rec = adjoint_normalized(forward_sinogram(f, cover), w)
    assert np.max(np.abs(rec.coeffs - f.coeffs)) < 1e-12
    for p in (1, 2, np.inf):
        assert bessel_norm(rec, 0.5, p, N=16) == pytest.approx(
            bessel_norm(f, 0.5, p, N=16), abs=1e-10)


def test_adjoint_normalized_equals_filtered_off_range(rng):
    # both operators act on orthogonal coefficients only, with the same
    # w^2 / W multiplier, so they agree even off the range; kept as a
    # regression pin of that equality
    K = 2
    cover = direction_cover(K)
    w = canonical_weight(cover, K)
    g = forward_sinogram(random_field(2, K, rng), cover)
    bad = dict(g.slices)
    A0 = g.subspaces[0]
    arr = bad[A0].coeffs.copy()
    arr[0, 1] += 2.0 - 1j
    bad[A0] = TorusField(2, K, arr)
    g_bad = TorusSinogram(2, 1, K, g.mean, bad)
    a = invert_filtered(g_bad, w)
    b = adjoint_normalized(g_bad, w)
    assert np.max(np.abs(a.coeffs - b.coeffs)) < 1e-12


def test_invert_sum_cosine():
    K = 3
    f = field_from_coeffs(2, K, {(1, 2): 1.0, (-1, -2): 1.0}, real=True)
    cover = direction_cover(K)
    g = forward_sinogram(f, cover)
    rec = invert_sum(g)
    assert np.max(np.abs(rec.coeffs - f.coeffs)) < 1e-12


def test_invert_sum_zero():
    K = 2
    g = forward_sinogram(field_from_coeffs(2, K, {}), direction_cover(K))
    assert np.all(invert_sum(g).coeffs == 0)


def test_invert_sum_mean_split(rng):
    K = 3
    f = random_field(2, K, rng, real=True)
    g = forward_sinogram(f, direction_cover(K))
    rec = invert_sum(g.without_mean())
    full = rec.coeffs.copy()
    full[K, K] += g.mean
    assert np.max(np.abs(full - f.coeffs)) < 1e-12


def test_invert_sum_nonzero_mean_raises(rng):
    K = 2
    f = random_field(2, K, rng)
    arr = f.coeffs.copy()
    arr[K, K] = 7.0
    g = forward_sinogram(TorusField(2, K, arr), direction_cover(K))
    with pytest.raises(NonzeroMean):
        invert_sum(g)


def test_invert_sum_incomplete_cover(rng):
    K = 2
    f = random_field(2, K, rng)
    cover = direction_cover(K)
    g = forward_sinogram(f, cover).without_mean()
    removed = {A: fld for A, fld in g.slices.items() if A != line((2, -1))}
    partial = TorusSinogram(2, 1, K, 0j, removed)
    with pytest.raises(IncompleteCover):
        invert_sum(partial)


def test_invert_sum_hyperplanes_n3(rng):
    K = 2
    fam = hyperplane_cover(K, 3)
    f = random_field(3, K, rng, real=True)
    g = forward_sinogram(f, fam).without_mean()
    rec = invert_sum(g)
    expected = f.coeffs.copy()
    expected[K, K, K] = 0
    assert np.max(np.abs(rec.coeffs - expected)) < 1e-12


def test_stability_inequality(rng):
    K = 3
    fam = hyperplane_cover(K, 3)
    w = weight_on_family(HEIGHT_DECAY, fam, K)
    worst = 0.0
    for _ in range(20):
        f = random_field(3, K, rng)
        g = forward_sinogram(f, fam)
        lhs = sobolev_norm(f, 1.0)
        rhs = sinogram_norm(g, 1.0, w) / w.c_w
        assert lhs <= rhs * (1 + 1e-12)
        worst = max(worst, lhs / rhs)
    assert worst <= 1.0 + 1e-12


def test_sum_pairing_equals_field_pairing(rng):
    K = 2
    cover = direction_cover(K)
    f = random_field(2, K, rng)
    g = forward_sinogram(f, cover)
    table = equal_split_table(g)
    h = random_field(2, K, rng)
    lhs = sum_pairing(g, table, h)
    rhs = field_pairing(f, h)
    assert abs(lhs - rhs) < 1e-10

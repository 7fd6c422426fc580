import math

import numpy as np
import pytest

from helpers import analysis, corpus_labels
from ptframe4.curvegeom import sample_arclength
from ptframe4.curvespec import builtin_curve
from ptframe4.exceptions import DegenerateFrameError, MismatchedSeriesError
from ptframe4.frenet import (
    FrameSeries,
    cross4,
    frenet_apparatus,
    frenet_frames,
    frenet_residuals,
    gram_schmidt_frame,
)


def test_identity_derivatives_give_identity_frame():
    d = np.vstack([np.zeros(4), np.eye(4)])
    np.testing.assert_allclose(gram_schmidt_frame(d).vectors, np.eye(4), atol=1e-15)


def test_example1_degenerate_at_zero():
    samp = sample_arclength(builtin_curve("example1"), 201)
    with pytest.raises(DegenerateFrameError) as info:
        gram_schmidt_frame(samp.s_jets[100], s=samp.arclens[100])
    assert info.value.level == 2
    assert info.value.residual < 1e-9


def test_example1_is_planar():
    # third derivative stays in the osculating plane away from s = 0
    samp = sample_arclength(builtin_curve("example1"), 201)
    with pytest.raises(DegenerateFrameError) as info:
        gram_schmidt_frame(samp.s_jets[150])
    assert info.value.level == 3


def test_example2_frame_at_zero():
    samp = sample_arclength(builtin_curve("example2"), 65)
    f = gram_schmidt_frame(samp.s_jets[0])
    r2, r3 = 1 / math.sqrt(2), 1 / math.sqrt(3)
    np.testing.assert_allclose(f.tangent, [r2, 0, r2, 0], atol=1e-15)
    np.testing.assert_allclose(f.normals[0], [0, -r3, 0, -math.sqrt(2) * r3], atol=1e-15)
    assert np.linalg.det(f.vectors) == pytest.approx(1.0, abs=1e-12)


def test_cross4_orientation():
    rng = np.random.default_rng(3)
    for _ in range(20):
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
        d = cross4(q[0], q[1], q[2])
        np.testing.assert_allclose(q[:3] @ d, 0, atol=1e-14)
        assert np.linalg.det(np.vstack([q[:3], d])) == pytest.approx(1.0, abs=1e-12)


def test_circle_curvatures():
    a = analysis("circle")
    c = a.frenet_curvatures
    np.testing.assert_allclose(c.kappa, 1.0, atol=1e-12)
    np.testing.assert_allclose(c.tau, 0.0, atol=1e-12)
    assert not c.sigma_defined.any()
    assert (a.frenet.levels == 3).all()


def test_helix3_curvatures():
    c = analysis("helix3").frenet_curvatures
    np.testing.assert_allclose(c.kappa, 0.5, atol=1e-12)
    np.testing.assert_allclose(c.tau, 0.5, atol=1e-12)
    assert c.sigma_defined.all()
    np.testing.assert_allclose(c.sigma, 0.0, atol=1e-12)


def test_example2_kappa():
    c = analysis("example2").frenet_curvatures
    np.testing.assert_allclose(c.kappa, math.sqrt(3) / 2, atol=1e-8)


def test_degenerate_rows_raise_on_access():
    fr = analysis("example1").frenet
    with pytest.raises(DegenerateFrameError):
        fr[0]


def test_mismatched_series():
    a = analysis("helix3")
    other = sample_arclength(builtin_curve("helix3"), 129)
    with pytest.raises(MismatchedSeriesError):
        frenet_apparatus(a.frenet, other)
    with pytest.raises(MismatchedSeriesError):
        frenet_apparatus(a.pt, a.sampling)


@pytest.mark.parametrize("label", corpus_labels())
def test_frames_are_orthonormal_and_oriented(label):
    fr = analysis(label).frenet
    V = fr.vectors[fr.valid]
    if len(V):
        np.testing.assert_allclose(V @ np.swapaxes(V, 1, 2), np.broadcast_to(np.eye(4), V.shape), atol=1e-9)
        np.testing.assert_allclose(np.linalg.det(V), 1.0, atol=1e-9)


@pytest.mark.parametrize("label", ["example2", "helix3", "trig11", "trig23", "trig37", "trig41", "trig59"])
def test_skew_structure(label):
    spec = builtin_curve(label) if not label.startswith("trig") else None
    if spec is None:
        from helpers import random_trig_curve

        spec = random_trig_curve(int(label[4:]))
    samp = sample_arclength(spec, 8193)
    fr = frenet_frames(samp)
    c = frenet_apparatus(fr, samp)
    V, s = fr.vectors, fr.s
    ok = fr.valid[:-2] & fr.valid[1:-1] & fr.valid[2:]
    h0, h1 = (s[1:-1] - s[:-2])[:, None], (s[2:] - s[1:-1])[:, None]
    dV = (
        -h1[..., None] / (h0 * (h0 + h1))[..., None] * V[:-2]
        + ((h1 - h0) / (h0 * h1))[..., None] * V[1:-1]
        + h0[..., None] / (h1 * (h0 + h1))[..., None] * V[2:]
    )
    mid = V[1:-1]
    dT, dN = dV[:, 0], dV[:, 1]
    T, N, B1, B2 = (mid[:, i] for i in range(4))
    dot = lambda a, b: np.einsum("ij,ij->i", a, b)  # noqa: E731
    assert np.abs(dot(dT, B1)[ok]).max() <= 1e-5
    assert np.abs(dot(dT, B2)[ok]).max() <= 1e-5
    assert np.abs(dot(dN, B2)[ok]).max() <= 1e-5
    assert np.abs(dot(dT, N) - c.kappa[1:-1])[ok].max() <= 1e-5
    # tau and sigma: sign and scale agree with the differentiated frame; the
    # difference quotient loses accuracy where tau nearly vanishes
    tau, sigma = c.tau[1:-1][ok], c.sigma[1:-1][ok]
    assert np.abs(dot(dN, B1)[ok] - tau).max() <= 1e-3 * (1 + np.abs(tau).max())
    assert np.abs(dot(dV[:, 2], B2)[ok] - sigma).max() <= 1e-3 * (1 + np.abs(sigma).max())


def test_kappa_is_second_derivative_norm():
    a = analysis("trig11")
    assert np.array_equal(a.frenet_curvatures.kappa, np.linalg.norm(a.sampling.sderiv(2), axis=1))


def test_residuals_match_levels():
    samp = sample_arclength(builtin_curve("example1"), 201)
    r2, r3 = frenet_residuals(samp)
    levels = frenet_frames(samp).levels
    np.testing.assert_array_equal(levels == 2, r2 < 1e-9)


def test_from_samples_roundtrip():
    fr = analysis("helix3").frenet
    again = FrameSeries.from_samples([fr[j] for j in range(len(fr))])
    np.testing.assert_array_equal(again.vectors, fr.vectors)

import numpy as np
import pytest

from dhvol import desitter as ds
from dhvol.errors import OnBoundary
from dhvol.minkowski import AmbientVector, Tag


def _apex(tag=Tag.PLUS):
    return AmbientVector(np.array([1.0, 0.0, 0.0]), tag)


def test_point_on_quadric():
    with pytest.raises(ValueError):
        ds.DeSitterPoint(np.array([1.0, 1.0, 0.0]))
    e = ds.DeSitterPoint.normalized([0.2, 1.0, 0.5])
    assert e.coords @ np.diag([-1, 1, 1]) @ e.coords == pytest.approx(1.0)


def test_duality_boundary_case():
    e = ds.DeSitterPoint(np.array([0.0, 0.0, 1.0]))
    assert ds.dual_halfspace_contains(_apex(), e)


def test_duality_sign_and_tag_flip():
    e = ds.DeSitterPoint.normalized([1.0, 1.5, 0.0])   # x.e = -1/|.| < 0
    assert not ds.dual_halfspace_contains(_apex(), e)
    assert ds.dual_halfspace_contains(_apex(), ds.DeSitterPoint(e.coords, Tag.MINUS))
    assert not ds.dual_halfspace_contains(_apex(Tag.MINUS), ds.DeSitterPoint(e.coords, Tag.MINUS))


def test_duality_rejects_ideal_points():
    x = AmbientVector(np.array([1.0, 1.0, 0.0]))
    with pytest.raises(ValueError):
        ds.dual_halfspace_contains(x, ds.DeSitterPoint(np.array([0.0, 0.0, 1.0])))


def test_antipodes():
    e = ds.DeSitterPoint.normalized([0.3, 1.0, -0.4])
    space, time = ds.antipodes(e)
    assert np.allclose(space.coords, -e.coords) and space.tag is Tag.PLUS
    assert np.allclose(time.coords, -e.coords) and time.tag is Tag.MINUS
    again = ds.antipodes(time)[1]
    assert np.allclose(again.coords, e.coords) and again.tag is e.tag


def test_antipodes_and_halfspaces():
    # the apex lies strictly inside the half-space dual to e
    x = _apex()
    e = ds.DeSitterPoint.normalized([-0.5, 1.0, 0.2])
    assert ds.dual_halfspace_contains(x, e, tol=-1e-9)
    space, time = ds.antipodes(e)
    assert not ds.dual_halfspace_contains(x, space)
    assert ds.dual_halfspace_contains(x, time, tol=-1e-9)


def test_embed_simple_point():
    assert np.allclose(ds.embed_minkowski(np.array([0.0, 0.0, 1.0]), 2, 1), [0, 0, 0, 1])
    assert np.allclose(ds.embed_minkowski(np.array([0.0, 1.0]), 1, 1), [0, 0, 1])


def test_embed_by_substitution():
    # each coordinate written out for p = 2, q = 1 at x = (0.2, 0.1, 0.5)
    x1, x2, t = 0.2, 0.1, 0.5
    s = x1 ** 2 + x2 ** 2 - t ** 2
    want = [(1 + s) / (2 * t), -x1 / t, -x2 / t, (1 - s) / (2 * t)]
    assert np.allclose(ds.embed_minkowski(np.array([x1, x2, t]), 2, 1), want)


def test_embed_boundary_error():
    with pytest.raises(OnBoundary):
        ds.embed_minkowski(np.array([0.3, 0.0]), 1, 1)
    with pytest.raises(ValueError):
        ds.embed_minkowski(np.array([0.3, 0.2, 1.0]), 1, 1)


@pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_quadric_and_conformal_identity(p, q):
    x = ds.random_points(0, p, q, 100)
    y = ds.embed_minkowski(x, p, q)
    assert ds.quadric_residual(y, p, q) < 1e-10
    assert ds.conformal_residual(x, p, q) < 1e-12


def test_lower_half_lands_on_negative_side():
    x = ds.random_points(1, 2, 1, 50)
    x[:, -1] = -np.abs(x[:, -1])
    y, tag = ds.embed_minkowski(x, 2, 1, with_tag=True)
    assert np.all(y[:, 0] + y[:, -1] < 0)
    assert np.all(tag == int(Tag.MINUS))


def test_pullback_metric_at_fixed_point():
    assert ds.pullback_metric_check([0.3, 0.7], 1, 1) < 1e-8


def test_jacobian_near_boundary():
    with pytest.raises(OnBoundary):
        ds.jacobian(np.array([0.3, 1e-5]), 1, 1)


def test_signature_space_metric():
    S = ds.SignatureSpace(2, 1, Tag.MINUS)
    assert np.allclose(S.metric(2.0), -np.diag([1, 1, -1]) / 4)
    with pytest.raises(ValueError):
        ds.SignatureSpace(0, 1)


def test_glue_report():
    r = ds.glue_topology_report(2, 1)
    assert r.signs_before == (1, -1, -1, 1)
    assert r.signs_after == (1, 1, -1, -1)
    assert [g.name for g in r.regions] == ["U", "L", "U_-", "L_-"]
    assert set(r.boundaries) == {"Y", "Y_-", "M", "M_-"}
    assert r.sample_check()
    assert ds.glue_topology_report(2, 2).sample_check(seed=3)


def test_embed_general_by_substitution():
    # p = 1, q = 2 at x = (0.4, -0.3, 0.8)
    x1, x2, t = 0.4, -0.3, 0.8
    s = x1 ** 2 - x2 ** 2 - t ** 2
    want = [(1 - s) / (2 * t), -x1 / t, -x2 / t, (1 + s) / (2 * t)]
    assert np.allclose(ds.embed_minkowski(np.array([x1, x2, t]), 1, 2), want)

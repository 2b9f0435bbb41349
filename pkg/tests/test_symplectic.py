import numpy as np
import pytest

from planarep.cohomology import cohomology_data, delta0, projective_subspace
from planarep.components import finite_order_classes
from planarep.config import DEFAULT_TOL
from planarep.errors import NotACocycle
from planarep.liegroup import get_model
from planarep.presentations import PlanarPresentation
from planarep.solver import SolveSpec, solve_relator
from planarep.symplectic import (
    action_field,
    check_moment_identity,
    default_calibration,
    degeneracy_report,
    extend_point,
    gram_on_cocycles,
    moment_pairing,
    omega_extended,
    pairing_H1,
    tangent_from_u,
    unflatten,
)

MODEL = get_model("SU2")
PRES = PlanarPresentation(1, (3,))


def _point(seed, pres=PRES, model=MODEL, zeta=None, torsion_class_index=1):
    classes = [
        finite_order_classes(model, m)[torsion_class_index] for m in pres.torsion
    ]
    spec = SolveSpec(pres, model, classes, zeta, seed=seed, tol=1e-12)
    return solve_relator(spec).point


def _random_tangent(pt, rng):
    data = cohomology_data(pt.phi)
    coords = rng.standard_normal(data.proj_basis.shape[1])
    u = unflatten(pt.model, data.proj_basis @ coords, pt.phi.pres.num_generators)
    return tangent_from_u(pt, u), data


def test_calibration_record_is_frozen():
    calib = default_calibration()
    assert calib.s1 in (-1, 1) and calib.s2 in (-1, 1)
    assert calib.residual < 1e-6


def test_pairing_antisymmetry():
    rng = np.random.default_rng(0)
    pt = extend_point(_point(0))
    for _ in range(5):
        t1, _ = _random_tangent(pt, rng)
        t2, _ = _random_tangent(pt, rng)
        calib = default_calibration()
        a = omega_extended(pt, t1, t2, calib)
        b = omega_extended(pt, t2, t1, calib)
        assert abs(a + b) < 1e-12 * max(1.0, abs(a))


def test_pairing_coboundary_insensitivity():
    # cup pairing on H^1 kills coboundaries from either slot
    phi = _point(1)
    calib = default_calibration()
    data = cohomology_data(phi)
    rng = np.random.default_rng(1)
    Q = data.proj_basis
    for _ in range(5):
        X = rng.standard_normal(phi.model.d)
        cob = unflatten(phi.model, delta0(phi) @ X, phi.pres.num_generators)
        coords = rng.standard_normal(data.cocycles.shape[1])
        u = unflatten(phi.model, Q @ (data.cocycles @ coords), phi.pres.num_generators)
        val = pairing_H1(phi, cob, u, calib)
        assert abs(val) < 1e-10
        assert abs(pairing_H1(phi, u, cob, calib)) < 1e-10


def test_pairing_rejects_non_cocycles():
    phi = _point(2)
    rng = np.random.default_rng(2)
    u = [rng.standard_normal(phi.model.d) for _ in range(phi.pres.num_generators)]
    with pytest.raises(NotACocycle):
        pairing_H1(phi, u, u, default_calibration())


def test_gram_rank_on_harmonic_equals_h1():
    calib = default_calibration()
    cases = [(s, PRES, None) for s in range(3)]
    cases += [(s, PlanarPresentation(2, ()), -np.eye(2, dtype=complex)) for s in (0, 1)]
    for seed, pres, zeta in cases:
        phi = _point(seed, pres=pres, zeta=zeta)
        data = cohomology_data(phi)
        H = data.proj_basis @ data.harmonic
        G = gram_on_cocycles(phi, H, calib)
        s = np.linalg.svd(G, compute_uv=False)
        rank = int(np.sum(s > 1e-8 * max(1.0, s[0] if len(s) else 0.0)))
        assert rank == data.h1


def test_moment_identity_fresh_points():
    calib = default_calibration()
    rng = np.random.default_rng(99)
    worst = 0.0
    for seed in range(5):
        pt = extend_point(_point(seed + 10))
        for _ in range(3):
            X = MODEL.random_alg(rng)
            t, _ = _random_tangent(pt, rng)
            scale = max(1.0, abs(moment_pairing(pt, X)))
            worst = max(worst, check_moment_identity(pt, X, t, calib) / scale)
    assert worst < 1e-6


def test_moment_equivariance():
    pt = extend_point(_point(3))
    g = MODEL.random_element(np.random.default_rng(4))
    # mu is equivariant: pairing against Ad-translated test vectors agrees
    for i in range(MODEL.d):
        X = MODEL.basis[i]
        a = moment_pairing(pt.conjugate(g), g @ X @ np.linalg.inv(g))
        b = moment_pairing(pt, X)
        assert abs(a - b) < 1e-12


def test_action_field_is_coboundary_direction():
    pt = extend_point(_point(5))
    X = MODEL.random_alg(np.random.default_rng(6))
    t = action_field(pt, X)
    x = MODEL.vec(X)
    for i, block in enumerate(pt.phi.ad_gens):
        expected = x - block @ x
        assert np.linalg.norm(t.u[i] - expected) < 1e-12


def test_degeneracy_structure_central_fiber():
    calib = default_calibration()
    for seed in range(3):
        pt = extend_point(_point(seed + 20))
        report = degeneracy_report(pt, calib, DEFAULT_TOL)
        assert report["nullspace_matches_B1"]
        assert report["max_principal_angle"] < 1e-6
        assert report["nondegenerate"]
        assert report["full_rank"] == report["dim_C1_proj"]
        assert report["rank_on_Z1"] == report["h1"]


def test_projective_subspace_contains_coboundaries():
    phi = _point(7)
    Q = projective_subspace(phi)
    D0 = delta0(phi)
    resid = np.linalg.norm(D0 - Q @ (Q.T @ D0))
    assert resid < 1e-9

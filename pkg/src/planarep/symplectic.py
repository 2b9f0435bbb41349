"""The geometric core: cup-product pairing on H^1, the 2-form on the regular
domain, the extended 2-form, the momentum map, and the sign/scale calibration
that pins the conventions via the momentum identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from .config import Tolerances, DEFAULT_TOL
from .cohomology import (
    RepPoint,
    cocycle_extend,
    cohomology_data,
    delta1_projective,
    projective_subspace,
    random_fnat_point,
)
from .errors import (
    CalibrationFailed,
    LogBranchFailure,
    NotACocycle,
    OutsideStarDomain,
)
from .foxcalc import relator_filling_chain
from .liegroup import LieModel
from .presentations import PlanarPresentation


@dataclass
class CalibrationRecord:
    """Signs and scale of the 2-form conventions, fixed once by the momentum
    identity on a seeded batch and reused everywhere."""

    s1: int = 1
    s2: int = 1
    kappa_norm: float = 1.0
    batch_seed: int = 0
    residual: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "CalibrationRecord":
        return cls(**data)


_DATA_PATH = Path(__file__).parent / "data" / "calibration.json"
_DEFAULT_CALIBRATION: CalibrationRecord | None = None


def default_calibration() -> CalibrationRecord:
    global _DEFAULT_CALIBRATION
    if _DEFAULT_CALIBRATION is None:
        if _DATA_PATH.exists():
            _DEFAULT_CALIBRATION = CalibrationRecord.from_json(
                json.loads(_DATA_PATH.read_text())
            )
        else:
            _DEFAULT_CALIBRATION = calibrate()
    return _DEFAULT_CALIBRATION


# --- extended points and tangent vectors -----------------------------------


@dataclass
class ExtendedPoint:
    """(phi, Lambda) with exp(Lambda) = r(phi) and Lambda in the regular
    domain: a point of the pullback manifold."""

    phi: RepPoint
    Lam: np.ndarray

    def __post_init__(self):
        model = self.phi.model
        resid = np.linalg.norm(model.exp(self.Lam) - self.phi.long_relator_value())
        if resid > 1e-6:
            raise ValueError(f"exp(Lambda) != r(phi), residual {resid:.2e}")
        self._dexp = model.dexp_matrix(self.Lam)
        self._dexp_inv = np.linalg.inv(self._dexp)

    @property
    def model(self) -> LieModel:
        return self.phi.model

    def conjugate(self, g: np.ndarray) -> "ExtendedPoint":
        ginv = np.linalg.inv(g)
        return ExtendedPoint(self.phi.conjugate(g), g @ self.Lam @ ginv)


def extend_point(phi: RepPoint) -> ExtendedPoint:
    """Lift an F-natural point to the pullback manifold on the principal
    sheet; raises LogBranchFailure for r(phi) outside the principal branch."""
    Lam = phi.model.log_principal(phi.long_relator_value())
    return ExtendedPoint(phi, Lam)


@dataclass
class TangentVec:
    """Tangent vector at an extended point: u in C^1(P(P), g_phi) as one
    coordinate vector per generator, plus the induced V = D(Lam)^-1 delta1 u."""

    u: list  # list of d-coordinate vectors, one per generator
    V: np.ndarray  # d-coordinate vector


def tangent_from_u(pt: ExtendedPoint, u: list[np.ndarray]) -> TangentVec:
    d1u = cocycle_extend(pt.phi, u, pt.phi.pres.long_relator)
    return TangentVec(u=u, V=pt._dexp_inv @ d1u)


def action_field(pt: ExtendedPoint, X: np.ndarray) -> TangentVec:
    """Fundamental vector field of the conjugation action at pt:
    u_s = X - Ad_{phi(s)} X and V = [X, Lam]."""
    model = pt.model
    x = model.vec(X)
    u = [x - A @ x for A in pt.phi.ad_gens]
    V = model.vec(X @ pt.Lam - pt.Lam @ X)
    t = tangent_from_u(pt, u)
    # consistency of the two V computations (exactness of the chain identity)
    if np.linalg.norm(t.V - V) > 1e-6 * max(1.0, np.linalg.norm(V)):
        raise ValueError("action field V inconsistent with D^-1 delta1 u")
    return TangentVec(u=u, V=V)


# --- cup-product evaluation --------------------------------------------------


def _chain_cell_data(pres: PlanarPresentation):
    """Cells and float coefficients of the filling chain (cached per
    presentation)."""
    c = relator_filling_chain(pres)
    return [(g, h, float(q)) for (g, h), q in c.terms.items()]


_CHAIN_CACHE: dict = {}


def _cells(pres: PlanarPresentation):
    key = (pres.genus, pres.torsion)
    if key not in _CHAIN_CACHE:
        _CHAIN_CACHE[key] = _chain_cell_data(pres)
    return _CHAIN_CACHE[key]


def cup_eval(
    phi: RepPoint, u: list[np.ndarray], v: list[np.ndarray]
) -> float:
    """Antisymmetrized cup product of u, v evaluated on the filling chain:
    (1/2) sum_cells q ( <u(g), Ad_{phi(g)} v(h)> - <v(g), Ad_{phi(g)} u(h)> ).

    No sign/scale calibration applied; callers multiply by s1 * kappa_norm.
    """
    model = phi.model
    G = model.pairing_gram
    total = 0.0
    cache_u: dict = {}
    cache_v: dict = {}

    def ev(cache, vals, w):
        if w not in cache:
            cache[w] = cocycle_extend(phi, vals, w)
        return cache[w]

    for g, h, q in _cells(phi.pres):
        ug, vg = ev(cache_u, u, g), ev(cache_v, v, g)
        uh, vh = ev(cache_u, u, h), ev(cache_v, v, h)
        Ad_g = phi.ad_value(g)
        total += q * (ug @ G @ (Ad_g @ vh) - vg @ G @ (Ad_g @ uh))
    return 0.5 * total


def pairing_H1(
    phi: RepPoint,
    u: list[np.ndarray],
    v: list[np.ndarray],
    calib: CalibrationRecord | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """The alternating 2-form on H^1 evaluated on cocycle representatives."""
    calib = calib or default_calibration()
    Q = projective_subspace(phi, tol)
    D1p = delta1_projective(phi, Q, tol)
    for w in (u, v):
        flat = np.concatenate(w)
        coords = Q.T @ flat
        resid = np.linalg.norm(D1p @ coords)
        resid += np.linalg.norm(flat - Q @ coords)
        if resid > 1e-6 * max(1.0, np.linalg.norm(flat)):
            raise NotACocycle(f"delta1 residual {resid:.2e}")
    return calib.s1 * calib.kappa_norm * cup_eval(phi, u, v)


def unflatten(model: LieModel, flat: np.ndarray, n_gens: int) -> list[np.ndarray]:
    d = model.d
    return [flat[i * d : (i + 1) * d] for i in range(n_gens)]


# --- the 2-form B on the regular domain --------------------------------------


def bform_O(
    model: LieModel,
    Lam: np.ndarray,
    V: np.ndarray,
    W: np.ndarray,
    calib: CalibrationRecord | None = None,
    nodes: int = DEFAULT_TOL.quad_nodes,
) -> float:
    """Radial-homotopy primitive of the exp-pulled-back invariant 3-form:
    B_Lam(V, W) = s2 * int_0^1 t^2 lam~_{t Lam}(Lam, V, W) dt with
    lam~_X(a,b,c) = (1/2) <[D(X)a, D(X)b], D(X)c>, D the dexp operator.
    The 1/2 normalization of the invariant 3-form is what makes the momentum
    identity hold with unit scale."""
    calib = calib or default_calibration()
    for t in (0.5, 1.0):
        if not model.in_regular_domain(t * Lam):
            raise OutsideStarDomain("segment [0, Lam] leaves the regular domain")
    x, wts = np.polynomial.legendre.leggauss(nodes)
    ts = 0.5 * (x + 1.0)
    wts = 0.5 * wts
    lam_v, v_v, w_v = model.vec(Lam), np.asarray(V), np.asarray(W)
    total = 0.0
    for t, wt in zip(ts, wts):
        D = model.dexp_matrix(t * Lam)
        a = model.unvec(D @ lam_v)
        b = model.unvec(D @ v_v)
        c = model.unvec(D @ w_v)
        total += wt * t * t * 0.5 * model.pairing(a @ b - b @ a, c)
    return calib.s2 * total


# --- extended 2-form, momentum map, identities -------------------------------


def omega_extended(
    pt: ExtendedPoint,
    t1: TangentVec,
    t2: TangentVec,
    calib: CalibrationRecord | None = None,
    nodes: int = DEFAULT_TOL.quad_nodes,
) -> float:
    """omega_ext = s1 kappa * (cup part over the filling chain) - B(V1, V2)."""
    calib = calib or default_calibration()
    cup = calib.s1 * calib.kappa_norm * cup_eval(pt.phi, t1.u, t2.u)
    b = bform_O(pt.model, pt.Lam, t1.V, t2.V, calib, nodes)
    return cup - b


def moment(pt: ExtendedPoint) -> np.ndarray:
    """Coordinates of mu(pt) = -<Lam, .> in the algebra basis."""
    model = pt.model
    return -np.array([model.pairing(pt.Lam, B) for B in model.basis])


def moment_pairing(pt: ExtendedPoint, X: np.ndarray) -> float:
    """The scalar X o mu = -<Lam, X>."""
    return -pt.model.pairing(pt.Lam, X)


def check_moment_identity(
    pt: ExtendedPoint,
    X: np.ndarray,
    t: TangentVec,
    calib: CalibrationRecord | None = None,
    nodes: int = DEFAULT_TOL.quad_nodes,
) -> float:
    """Residual of omega(X_M, t) = d(X o mu)(t) = -<V_t, X>."""
    calib = calib or default_calibration()
    lhs = omega_extended(pt, action_field(pt, X), t, calib, nodes)
    rhs = -pt.model.pairing(pt.model.unvec(t.V), X)
    return abs(lhs - rhs)


# --- calibration --------------------------------------------------------------


def _calibration_batch(
    model: LieModel,
    pres: PlanarPresentation,
    seed: int,
    n_points: int,
    tol: Tolerances,
):
    """Seeded (cup, B, target) triples from random extended points."""
    rng = np.random.default_rng(seed)
    rows = []
    made = 0
    while made < n_points:
        phi = random_fnat_point(pres, model, rng, scale=0.6)
        try:
            pt = extend_point(phi)
        except LogBranchFailure:
            continue
        made += 1
        Q = projective_subspace(phi, tol)
        for _ in range(3):
            X = model.random_alg(rng)
            coords = rng.standard_normal(Q.shape[1])
            u = unflatten(model, Q @ coords, pres.num_generators)
            t = tangent_from_u(pt, u)
            a = action_field(pt, X)
            cup = cup_eval(phi, a.u, t.u)
            b = bform_O(model, pt.Lam, a.V, t.V, CalibrationRecord(1, 1, 1.0))
            target = -model.pairing(model.unvec(t.V), X)
            rows.append((cup, b, target))
    return np.array(rows)


def calibrate(
    model: LieModel | None = None,
    pres: PlanarPresentation | None = None,
    seed: int = 2024,
    n_points: int = 12,
    tol: Tolerances = DEFAULT_TOL,
    max_residual: float = 1e-6,
) -> CalibrationRecord:
    """Fix (s1, s2, kappa_norm) from the momentum identity on a seeded batch.

    For each sign of B the optimal scale of the cup term is a least-squares
    solve; the record with the smallest maximum residual wins.  Failure to
    reach tolerance signals an implementation bug, not a data problem.
    """
    from .liegroup import get_model
    from .presentations import parse_presentation

    model = model or get_model("SU2")
    pres = pres or parse_presentation("genus=1; torsion=3")
    rows = _calibration_batch(model, pres, seed, n_points, tol)
    cup, b, target = rows[:, 0], rows[:, 1], rows[:, 2]
    best = None
    for s2 in (1, -1):
        rhs = target + s2 * b
        denom = cup @ cup
        if denom == 0:
            continue
        a = float(cup @ rhs) / denom
        resid = float(np.max(np.abs(a * cup - rhs)))
        scale = float(np.max(np.abs(target))) or 1.0
        rel = resid / scale
        if best is None or rel < best[0]:
            best = (rel, a, s2)
    if best is None or best[0] > max_residual:
        raise CalibrationFailed(
            f"momentum identity not satisfiable at tolerance {max_residual}: "
            f"best relative residual {best[0] if best else 'n/a'}"
        )
    rel, a, s2 = best
    snapped = round(2.0 * a) / 2.0
    if snapped != 0 and abs(a - snapped) < 1e-9:
        a = snapped
    return CalibrationRecord(
        s1=1 if a > 0 else -1,
        s2=s2,
        kappa_norm=abs(a),
        batch_seed=seed,
        residual=rel,
    )


def save_calibration(rec: CalibrationRecord, path: Path | str = _DATA_PATH) -> None:
    Path(path).write_text(json.dumps(rec.to_json(), indent=2))


# --- degeneracy / rank reports -------------------------------------------------


def gram_on_cocycles(
    phi: RepPoint,
    basis: np.ndarray,
    calib: CalibrationRecord | None = None,
) -> np.ndarray:
    """Gram matrix of the (calibrated) cup pairing on given C^1 columns."""
    calib = calib or default_calibration()
    k = basis.shape[1]
    n_gens = phi.pres.num_generators
    cols = [unflatten(phi.model, basis[:, i], n_gens) for i in range(k)]
    G = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            val = calib.s1 * calib.kappa_norm * cup_eval(phi, cols[i], cols[j])
            G[i, j], G[j, i] = val, -val
    return G


def gram_extended(
    pt: ExtendedPoint,
    basis: np.ndarray,
    calib: CalibrationRecord | None = None,
    nodes: int = DEFAULT_TOL.quad_nodes,
) -> np.ndarray:
    """Gram matrix of omega_ext on tangents spanned by C^1 basis columns."""
    calib = calib or default_calibration()
    n_gens = pt.phi.pres.num_generators
    k = basis.shape[1]
    tangents = [
        tangent_from_u(pt, unflatten(pt.model, basis[:, i], n_gens))
        for i in range(k)
    ]
    G = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            val = omega_extended(pt, tangents[i], tangents[j], calib, nodes)
            G[i, j], G[j, i] = val, -val
    return G


def principal_angles(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Principal angles between the column spans of A and B."""
    qa, _ = np.linalg.qr(A)
    qb, _ = np.linalg.qr(B)
    s = np.linalg.svd(qa.T @ qb, compute_uv=False)
    return np.arccos(np.clip(s, -1.0, 1.0))


def degeneracy_report(
    point: ExtendedPoint | RepPoint,
    calib: CalibrationRecord | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> dict:
    """Rank structure of the pairing: nullspace on Z^1 vs B^1, full rank.

    Accepts an ExtendedPoint (full tangent-space Gram included) or a bare
    RepPoint with central relator values (pairing-only variant).
    """
    calib = calib or default_calibration()
    phi = point.phi if isinstance(point, ExtendedPoint) else point
    data = cohomology_data(phi, tol)
    Z1 = data.proj_basis @ data.cocycles  # cocycle basis in C^1 coordinates
    Gz = gram_on_cocycles(phi, Z1, calib)
    null, rank_z1, _ = _gram_nullspace(Gz, tol.rank_rel)
    report = {
        "rank_on_Z1": rank_z1,
        "h1": data.h1,
        "dim_Z1": int(Z1.shape[1]),
        "dim_C1_proj": int(data.proj_basis.shape[1]),
    }
    # compare ker(Gram) with im(delta0) inside Z^1 coordinates
    rank_b1 = np.linalg.matrix_rank(data.delta0_proj, 1e-10)
    if null.shape[1] == 0 or rank_b1 == 0:
        report["nullspace_matches_B1"] = null.shape[1] == rank_b1
        report["max_principal_angle"] = 0.0
    else:
        null_c1 = Z1 @ null
        B1 = data.proj_basis @ data.delta0_proj
        angles = principal_angles(null_c1, B1)
        ok = null.shape[1] == rank_b1 and float(np.max(angles)) < 1e-6
        report["nullspace_matches_B1"] = bool(ok)
        report["max_principal_angle"] = float(np.max(angles))
    if isinstance(point, ExtendedPoint):
        Gfull = gram_extended(point, data.proj_basis, calib)
        _, rank_full, _ = _gram_nullspace(Gfull, tol.rank_rel)
        report["full_rank"] = rank_full
        report["nondegenerate"] = rank_full == data.proj_basis.shape[1]
    return report


def _gram_nullspace(G: np.ndarray, rel_tol: float):
    if G.size == 0:
        return np.zeros((G.shape[0], 0)), 0, np.zeros(0)
    U, s, Vt = np.linalg.svd(G)
    thresh = rel_tol * max(s[0] if len(s) else 0.0, 1.0)
    rank = int(np.sum(s > thresh))
    return Vt[rank:].T, rank, s

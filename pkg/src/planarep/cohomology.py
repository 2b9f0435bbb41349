"""Twisted cochain complexes at a representation point, as numeric matrices.

A representation point assigns a group element to every presentation
generator.  The coboundaries are evaluated through the adjoint representation:
delta0(X)_s = X - Ad_{phi(s)} X and delta1 rows are the Fox-derivative
matrices of the relators pushed through Ad.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import Tolerances, DEFAULT_TOL
from .errors import RelatorConstraintViolated, ToleranceAmbiguity
from .foxcalc import GroupRingElt, fox_derivative
from .liegroup import LieModel
from .presentations import PlanarPresentation
from .words import Word


@dataclass
class RepPoint:
    """Generator assignment phi into the group of a LieModel."""

    pres: PlanarPresentation
    model: LieModel
    gens: list  # list of (n x n) matrices, one per presentation generator

    def __post_init__(self):
        if len(self.gens) != self.pres.num_generators:
            raise ValueError("one matrix per generator required")

    @cached_property
    def ad_gens(self) -> list[np.ndarray]:
        return [self.model.Ad_matrix(g) for g in self.gens]

    @cached_property
    def ad_gens_inv(self) -> list[np.ndarray]:
        return [np.linalg.inv(A) for A in self.ad_gens]

    def value(self, w: Word) -> np.ndarray:
        """phi(w) as a group element."""
        out = self.model.identity.copy()
        for s in w:
            g = self.gens[abs(s) - 1]
            out = out @ (g if s > 0 else np.linalg.inv(g))
        return out

    def ad_value(self, w: Word) -> np.ndarray:
        """Ad_{phi(w)} in basis coordinates."""
        out = np.eye(self.model.d)
        for s in w:
            A = self.ad_gens[abs(s) - 1] if s > 0 else self.ad_gens_inv[abs(s) - 1]
            out = out @ A
        return out

    def ring_matrix(self, elt: GroupRingElt) -> np.ndarray:
        """Evaluate a group-ring element through Ad with rational coefficients."""
        out = np.zeros((self.model.d, self.model.d))
        for w, q in elt.terms.items():
            out += float(q) * self.ad_value(w)
        return out

    @cached_property
    def relator_values(self) -> list[np.ndarray]:
        return [self.value(self.pres.long_relator)] + [
            self.value(r) for r in self.pres.torsion_relators
        ]

    def long_relator_value(self) -> np.ndarray:
        return self.relator_values[0]

    def is_fnat(self, tol: float = DEFAULT_TOL.tau_grp) -> bool:
        """Torsion relators satisfied: phi(z_j)^{m_j} = e."""
        eye = self.model.identity
        return all(
            np.linalg.norm(v - eye) < tol for v in self.relator_values[1:]
        )

    def relators_central(self, tol: float = DEFAULT_TOL.tau_grp) -> bool:
        return all(self.model.is_central(v, tol) for v in self.relator_values)

    def conjugate(self, g: np.ndarray) -> "RepPoint":
        ginv = np.linalg.inv(g)
        return RepPoint(self.pres, self.model, [g @ h @ ginv for h in self.gens])


def random_fnat_point(
    pres: PlanarPresentation,
    model: LieModel,
    rng: np.random.Generator,
    scale: float = 1.0,
) -> RepPoint:
    """Random point of Hom(F-natural, G): free generators Haar-ish random,
    torsion generators random conjugates of random exact-order elements."""
    from .components import finite_order_classes

    gens = [model.random_element(rng, scale) for _ in range(2 * pres.genus)]
    for m in pres.torsion:
        classes = finite_order_classes(model, m)
        cls = classes[rng.integers(len(classes))]
        k = model.random_element(rng, scale)
        gens.append(k @ cls.representative(model) @ np.linalg.inv(k))
    return RepPoint(pres, model, gens)


def cocycle_extend(pt: RepPoint, u: list[np.ndarray], w: Word) -> np.ndarray:
    """Extend a generator assignment u to the word w by the cocycle rule
    u(gh) = u(g) + Ad_{phi(g)} u(h), u(s^-1) = -Ad_{phi(s)}^{-1} u(s)."""
    d = pt.model.d
    acc = np.zeros(d)
    ad_prefix = np.eye(d)
    for s in w:
        i = abs(s) - 1
        if s > 0:
            acc = acc + ad_prefix @ u[i]
            ad_prefix = ad_prefix @ pt.ad_gens[i]
        else:
            ad_prefix = ad_prefix @ pt.ad_gens_inv[i]
            acc = acc - ad_prefix @ u[i]
    return acc


def delta0(pt: RepPoint) -> np.ndarray:
    """((2l+n)d x d) matrix with s-block X -> X - Ad_{phi(s)} X."""
    d = pt.model.d
    blocks = [np.eye(d) - A for A in pt.ad_gens]
    return np.vstack(blocks)


def _fox_rows(pres: PlanarPresentation) -> list[list[GroupRingElt]]:
    rels = [pres.long_relator, *pres.torsion_relators]
    return [
        [fox_derivative(rel, i) for i in range(pres.num_generators)] for rel in rels
    ]


def delta1_free(pt: RepPoint) -> np.ndarray:
    """(( 1+n)d x (2l+n)d) matrix of Ad-evaluated Fox derivatives."""
    d = pt.model.d
    rows = []
    for row in _fox_rows(pt.pres):
        rows.append(np.hstack([pt.ring_matrix(e) for e in row]))
    return np.vstack(rows)


def torsion_fixed_dims(pt: RepPoint, tol: Tolerances = DEFAULT_TOL) -> list[int]:
    """f_j = dim ker(Ad_{phi(z_j)} - 1) for each torsion generator."""
    out = []
    for j in range(pt.pres.n_torsion):
        A = pt.ad_gens[pt.pres.z_index(j)] - np.eye(pt.model.d)
        out.append(pt.model.d - _rank(A, tol))
    return out


def _svd_nullspace(A: np.ndarray, rel_tol: float) -> tuple[np.ndarray, int, np.ndarray]:
    """(orthonormal nullspace basis, rank, singular values)."""
    if A.size == 0 or min(A.shape) == 0:
        return np.eye(A.shape[1]), 0, np.zeros(0)
    U, s, Vt = np.linalg.svd(A)
    smax = s[0] if len(s) else 0.0
    # matrices here are O(1)-scaled (Ad blocks); flooring smax at 1 keeps
    # numerically-zero matrices at rank 0
    thresh = rel_tol * max(smax, 1.0)
    rank = int(np.sum(s > thresh))
    _warn_ambiguous(s, thresh)
    null = Vt[rank:].T
    return null, rank, s


def _rank(A: np.ndarray, tol: Tolerances) -> int:
    return _svd_nullspace(A, tol.rank_rel)[1]


def _warn_ambiguous(s: np.ndarray, thresh: float) -> None:
    amb = [float(v) for v in s if thresh / 10 < v < thresh * 10]
    if amb:
        warnings.warn(
            f"singular values near rank threshold {thresh:.3e}: {amb}",
            ToleranceAmbiguity,
            stacklevel=3,
        )


def projective_subspace(
    pt: RepPoint, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Orthonormal basis (columns) of C^1 of the projective resolution.

    Free-generator blocks contribute all of g; each torsion block is cut to
    ker N_j with N_j = sum_k Ad_{phi(z_j)}^k.
    """
    if not pt.is_fnat(tol.tau_grp):
        raise RelatorConstraintViolated("point is not in Hom(F-natural, G)")
    p, d = pt.pres, pt.model.d
    total = p.num_generators * d
    cols = []
    for i in range(2 * p.genus):
        block = np.zeros((total, d))
        block[i * d : (i + 1) * d] = np.eye(d)
        cols.append(block)
    for j in range(p.n_torsion):
        i = p.z_index(j)
        A = pt.ad_gens[i]
        N = np.zeros((d, d))
        P = np.eye(d)
        for _ in range(p.torsion[j]):
            N += P
            P = P @ A
        null, _, _ = _svd_nullspace(N, tol.rank_rel)
        block = np.zeros((total, null.shape[1]))
        block[i * d : (i + 1) * d] = null
        cols.append(block)
    return np.hstack(cols) if cols else np.zeros((total, 0))


def delta1_projective(
    pt: RepPoint, Q: np.ndarray | None = None, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Row of the long relator restricted to the projective subspace
    (d x dim columns, expressed in the basis Q)."""
    if Q is None:
        Q = projective_subspace(pt, tol)
    d = pt.model.d
    row_r = delta1_free(pt)[:d]
    return row_r @ Q


@dataclass
class CochainData:
    """Numerical summary of the twisted complexes at a point."""

    h0: int
    h1: int
    h2: int
    f_j: list[int]
    proj_basis: np.ndarray  # columns: basis of C^1(P(P), g_phi) in C^1 coords
    delta0: np.ndarray
    delta0_proj: np.ndarray  # delta0 in projective coordinates
    delta1_proj: np.ndarray
    harmonic: np.ndarray  # columns: harmonic H^1 basis in projective coords
    cocycles: np.ndarray  # columns: ker delta1_proj in projective coords
    singular_tail: list = field(default_factory=list)

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.h0, self.h1, self.h2)

    def to_json(self) -> dict:
        return {
            "h0": self.h0,
            "h1": self.h1,
            "h2": self.h2,
            "f_j": self.f_j,
            "dim_C1_proj": int(self.proj_basis.shape[1]),
            "singular_tail": self.singular_tail,
        }


def cohomology_data(pt: RepPoint, tol: Tolerances = DEFAULT_TOL) -> CochainData:
    """Dims and harmonic representatives of H^0, H^1, H^2 at the point.

    Requires an F-natural point with central long-relator value.
    """
    if not pt.relators_central(tol.tau_grp):
        raise RelatorConstraintViolated("relator values must be central")
    D0 = delta0(pt)
    Q = projective_subspace(pt, tol)
    # delta0 must land inside the projective subspace
    D0p = Q.T @ D0
    resid = np.linalg.norm(D0 - Q @ D0p)
    if resid > 1e-6 * max(1.0, np.linalg.norm(D0)):
        raise RelatorConstraintViolated(
            f"delta0 leaves the projective subspace (residual {resid:.2e})"
        )
    D1p = delta1_projective(pt, Q, tol)
    null1, rank1, s1 = _svd_nullspace(D1p, tol.rank_rel)
    _, rank0, s0 = _svd_nullspace(D0p, tol.rank_rel)
    d = pt.model.d
    h0 = d - rank0
    h1 = null1.shape[1] - rank0
    h2 = d - rank1
    # harmonic representatives: ker delta1_proj orthogonal to im delta0
    if rank0 and null1.shape[1]:
        B, _, _ = np.linalg.svd(D0p, full_matrices=False)
        B = B[:, :rank0]
        M = null1 - B @ (B.T @ null1)
        U, sv, _ = np.linalg.svd(M, full_matrices=False)
        harmonic = U[:, : int(np.sum(sv > tol.rank_rel * max(sv[0], 1.0)))]
    else:
        harmonic = null1
    return CochainData(
        h0=h0,
        h1=h1,
        h2=h2,
        f_j=torsion_fixed_dims(pt, tol),
        proj_basis=Q,
        delta0=D0,
        delta0_proj=D0p,
        delta1_proj=D1p,
        harmonic=harmonic,
        cocycles=null1,
        singular_tail=[float(v) for v in s1[-min(3, len(s1)) :]],
    )


def euler_characteristic_expected(pt: RepPoint, f_j: list[int]) -> int:
    p, d = pt.pres, pt.model.d
    return (2 - 2 * p.genus) * d - sum(d - f for f in f_j)

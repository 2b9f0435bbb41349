"""Matrix Lie group models: exp/log, Ad/ad, invariant pairing, regular domain.

Supported models: SU(2), U(n) (n = 1,2,3 via the CLI strings), SL(2,R).
Group elements and algebra vectors are plain numpy matrices; coordinates are
taken in a fixed basis of the algebra, orthonormal for the positive-definite
reference inner product Re tr(A B^H).
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm, logm

from .errors import LogBranchFailure, SingularDexp, UnsupportedModel

_TWO_PI = 2.0 * np.pi


class LieModel:
    """A matrix group G with algebra basis and biinvariant pairing.

    kind is one of 'SU', 'U', 'SL2R'; the pairing is -Re tr(XY) for the
    unitary models (positive definite) and tr(XY) for sl(2,R) (indefinite,
    signature (+,+,-) in the basis used here).
    """

    def __init__(self, kind: str, n: int, basis: np.ndarray, name: str):
        self.kind = kind
        self.n = n
        self.basis = basis  # (d, n, n)
        self.d = len(basis)
        self.name = name
        self.identity = np.eye(n, dtype=basis.dtype)
        # Gram matrix of the invariant pairing on the chosen basis
        self.pairing_gram = np.array(
            [[self.pairing(X, Y) for Y in basis] for X in basis]
        )

    def __repr__(self):
        return f"LieModel({self.name})"

    # -- pairing and coordinates --------------------------------------------

    def pairing(self, X: np.ndarray, Y: np.ndarray) -> float:
        t = np.trace(X @ Y)
        return float(t.real) if self.kind == "SL2R" else -float(t.real)

    def vec(self, X: np.ndarray) -> np.ndarray:
        """Coordinates in the reference-orthonormal basis."""
        return np.array(
            [np.trace(B.conj().T @ X).real for B in self.basis]
        )

    def unvec(self, v: np.ndarray) -> np.ndarray:
        return np.tensordot(np.asarray(v, dtype=float), self.basis, axes=(0, 0))

    # -- membership ----------------------------------------------------------

    def alg_residual(self, X: np.ndarray) -> float:
        return float(np.linalg.norm(X - self.project_alg(X)))

    def project_alg(self, X: np.ndarray) -> np.ndarray:
        if self.kind in ("U", "SU"):
            A = 0.5 * (X - X.conj().T)
            if self.kind == "SU":
                A = A - (np.trace(A) / self.n) * np.eye(self.n)
            return A
        A = np.asarray(X).real.copy()
        return A - (np.trace(A) / self.n) * np.eye(self.n)

    def grp_residual(self, g: np.ndarray) -> float:
        if self.kind in ("U", "SU"):
            r = float(np.linalg.norm(g.conj().T @ g - self.identity))
            if self.kind == "SU":
                r += abs(np.linalg.det(g) - 1.0)
            return r
        return float(np.linalg.norm(g.imag)) + abs(np.linalg.det(g) - 1.0)

    # -- exp / log -----------------------------------------------------------

    def exp(self, X: np.ndarray) -> np.ndarray:
        return expm(X)

    def log_principal(self, g: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        """Principal logarithm; fails when an eigenvalue argument hits pi."""
        evals = np.linalg.eigvals(g)
        if self.kind in ("U", "SU"):
            args = np.angle(evals)
            if np.any(np.abs(np.abs(args) - np.pi) < tol):
                raise LogBranchFailure("eigenvalue argument at the branch cut")
        else:
            # principal real log exists iff no eigenvalue on the closed
            # negative real axis
            if np.any((evals.real < tol) & (np.abs(evals.imag) < tol)):
                raise LogBranchFailure("eigenvalue on the negative real axis")
        W = logm(g)
        W = self.project_alg(W)
        if np.linalg.norm(self.exp(W) - g) > 1e-6 * max(1.0, np.linalg.norm(g)):
            raise LogBranchFailure("log/exp round trip failed")
        return W

    # -- adjoint structure -----------------------------------------------------

    def ad_matrix(self, X: np.ndarray) -> np.ndarray:
        """Matrix of ad_X on the algebra in basis coordinates (d x d, real)."""
        cols = [self.vec(X @ B - B @ X) for B in self.basis]
        return np.array(cols).T

    def Ad_matrix(self, g: np.ndarray) -> np.ndarray:
        """Matrix of Ad_g = g (.) g^-1 in basis coordinates."""
        ginv = np.linalg.inv(g)
        cols = [self.vec(g @ B @ ginv) for B in self.basis]
        return np.array(cols).T

    def in_regular_domain(self, X: np.ndarray, tol: float = 1e-9) -> bool:
        """True iff no ad_X eigenvalue lies in 2 pi i Z \\ {0}."""
        evals = np.linalg.eigvals(self.ad_matrix(X))
        for lam in evals:
            k = round(lam.imag / _TWO_PI)
            if k != 0 and abs(lam - 2j * np.pi * k) < tol:
                return False
        return True

    def dexp_matrix(self, Lam: np.ndarray) -> np.ndarray:
        """Right-translated differential of exp: D = sum ad^k / (k+1)!.

        Computed exactly (to machine precision) via the block-matrix
        exponential [[A, I], [0, 0]] -> [[e^A, D(A)], [0, I]].
        """
        A = self.ad_matrix(Lam)
        d = self.d
        M = np.zeros((2 * d, 2 * d))
        M[:d, :d] = A
        M[:d, d:] = np.eye(d)
        return expm(M)[:d, d:]

    def dexp_inv_matrix(self, Lam: np.ndarray) -> np.ndarray:
        D = self.dexp_matrix(Lam)
        if not self.in_regular_domain(Lam):
            raise SingularDexp("algebra element outside the regular domain")
        return np.linalg.inv(D)

    # -- center ----------------------------------------------------------------

    def center_basis(self) -> list[np.ndarray]:
        if self.kind == "U":
            return [1j * np.eye(self.n) / np.sqrt(self.n)]
        return []

    def central_elements(self) -> list[np.ndarray]:
        """Representative discrete central elements (complete for SU(2))."""
        if self.kind == "SU" and self.n == 2:
            return [self.identity, -self.identity]
        if self.kind == "SL2R":
            return [self.identity, -self.identity]
        return [self.identity]

    def is_central(self, g: np.ndarray, tol: float = 1e-8) -> bool:
        return all(
            np.linalg.norm(g @ B - B @ g) <= tol * max(1.0, np.linalg.norm(g))
            for B in self.basis
        )

    # -- random sampling ---------------------------------------------------------

    def random_alg(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return self.unvec(scale * rng.standard_normal(self.d))

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return self.exp(self.random_alg(rng, scale))


def _su2_basis() -> np.ndarray:
    s = 1.0 / np.sqrt(2.0)
    e1 = s * np.array([[1j, 0], [0, -1j]])
    e2 = s * np.array([[0, 1], [-1, 0]], dtype=complex)
    e3 = s * np.array([[0, 1j], [1j, 0]])
    return np.array([e1, e2, e3])


def _un_basis(n: int) -> np.ndarray:
    out = []
    for k in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[k, k] = 1j
        out.append(E)
    s = 1.0 / np.sqrt(2.0)
    for k in range(n):
        for l in range(k + 1, n):
            A = np.zeros((n, n), dtype=complex)
            A[k, l], A[l, k] = s, -s
            out.append(A)
            B = np.zeros((n, n), dtype=complex)
            B[k, l] = B[l, k] = 1j * s
            out.append(B)
    return np.array(out)


def _sl2r_basis() -> np.ndarray:
    s = 1.0 / np.sqrt(2.0)
    H = s * np.array([[1.0, 0.0], [0.0, -1.0]])
    S = s * np.array([[0.0, 1.0], [1.0, 0.0]])
    K = s * np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.array([H, S, K])


_REGISTRY = {
    "SU2": lambda: LieModel("SU", 2, _su2_basis(), "SU2"),
    "U1": lambda: LieModel("U", 1, _un_basis(1), "U1"),
    "U2": lambda: LieModel("U", 2, _un_basis(2), "U2"),
    "U3": lambda: LieModel("U", 3, _un_basis(3), "U3"),
    "SL2R": lambda: LieModel("SL2R", 2, _sl2r_basis(), "SL2R"),
}

_CACHE: dict[str, LieModel] = {}


def get_model(name: str) -> LieModel:
    key = name.upper().replace("(", "").replace(")", "").replace(",", "")
    if key not in _REGISTRY:
        raise UnsupportedModel(f"unknown group model {name!r}")
    if key not in _CACHE:
        _CACHE[key] = _REGISTRY[key]()
    return _CACHE[key]

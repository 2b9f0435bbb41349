"""Numerical search for representation points: solve r(phi) = zeta over
prescribed torsion classes.

Torsion generators are parameterized exactly as k_j c_j k_j^{-1} with c_j the
exact class representative, so class constraints hold by construction; the
free generators and the conjugators are the optimization variables.  Descent
uses the Fox-derivative Jacobian through Ad with exp retraction (Gauss-Newton
steps with backtracking, gradient fallback), seeded random restarts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .components import TorsionClass
from .cohomology import RepPoint
from .errors import InfeasibleSpec, NotFound
from .foxcalc import fox_derivative
from .liegroup import LieModel
from .presentations import PlanarPresentation


@dataclass
class SolveSpec:
    pres: PlanarPresentation
    model: LieModel
    classes: list[TorsionClass]
    zeta: np.ndarray | None = None  # central target; default identity
    seed: int = 0
    max_restarts: int = 30
    max_iters: int = 120
    tol: float = 1e-10

    def __post_init__(self):
        if len(self.classes) != self.pres.n_torsion:
            raise InfeasibleSpec("one torsion class per torsion generator required")
        if self.zeta is None:
            self.zeta = self.model.identity.copy()
        if not self.model.is_central(self.zeta):
            raise InfeasibleSpec("target zeta is not central")
        for cls, m in zip(self.classes, self.pres.torsion):
            if cls.order != m:
                raise InfeasibleSpec(
                    f"class {cls.class_id} has order {cls.order}, presentation wants {m}"
                )
            rep = cls.representative(self.model)
            if np.linalg.norm(np.linalg.matrix_power(rep, m) - self.model.identity) > 1e-9:
                raise InfeasibleSpec(f"class representative violates g^{m} = e")

    def to_json(self) -> dict:
        return {
            "presentation": self.pres.to_json(),
            "group": self.model.name,
            "classes": [c.to_json() for c in self.classes],
            "zeta": _mat_json(self.zeta),
            "seed": self.seed,
            "max_restarts": self.max_restarts,
            "max_iters": self.max_iters,
            "tol": self.tol,
        }


def _mat_json(m: np.ndarray) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(m, dtype=complex)]


# --- SU(2) feasibility oracle -------------------------------------------------


def su2_triangle_oracle(
    th1: float, th2: float, th3: float, target: str = "e"
) -> bool:
    """Feasibility of A B C = target over SU(2) classes with rotation angles
    th_i in [0, pi] and target e or -e.

    For target e the product class condition is the spherical triangle
    inequality; for -e, replace th3 by pi - th3 (central twist moves one
    class to its antipode).
    """
    for th in (th1, th2, th3):
        if th < -1e-12 or th > np.pi + 1e-12:
            raise ValueError("class angles must lie in [0, pi]")
    if target == "-e":
        th3 = np.pi - th3
    elif target != "e":
        raise ValueError("target must be 'e' or '-e'")
    eps = 1e-12
    lo = abs(th1 - th2)
    hi = min(th1 + th2, 2.0 * np.pi - th1 - th2)
    return lo - eps <= th3 <= hi + eps


def su2_brute_force_feasible(
    th1: np.ndarray,
    th2: np.ndarray,
    th3: np.ndarray,
    target: str = "e",
    grid: int = 129,
    residual_threshold: float = 1e-8,
) -> np.ndarray:
    """Direct minimization of ||A B C target^-1 - e|| over the classes.

    By bi-invariance A is fixed as the z-axis rotation and the axis of B is a
    single polar angle alpha; the optimal C in its class aligns with
    (AB)^-1 target, which leaves a 1-d minimization over alpha, done by dense
    grid plus exact refinement (the attained rotation angle of AB is
    continuous in alpha, so its range over the grid hull is an interval).
    Returns the boolean mask (min residual < residual_threshold).  Vectorized
    over input arrays.
    """
    th1, th2, th3 = (np.atleast_1d(np.asarray(a, dtype=float)) for a in (th1, th2, th3))
    sgn = -1.0 if target == "-e" else 1.0
    alphas = np.linspace(0.0, np.pi, grid)
    out = np.empty(th1.shape, dtype=bool)
    chunk = 65536
    for start in range(0, len(th1), chunk):
        t1 = th1[start : start + chunk, None]
        t2 = th2[start : start + chunk, None]
        t3 = th3[start : start + chunk]
        # cos of rotation angle of AB as the axis angle alpha varies
        cosb = np.cos(t1) * np.cos(t2) - np.sin(t1) * np.sin(t2) * np.cos(alphas)
        np.clip(cosb, -1.0, 1.0, out=cosb)
        beta = np.arccos(cosb)  # in [0, pi]
        # need angle of C = (AB)^-1 target to equal t3; angle of -g is pi-angle(g)
        need = beta if sgn > 0 else np.pi - beta
        gap = np.min(np.abs(need - t3[:, None]), axis=1)
        # the grid minimum of |need - t3| overshoots by at most the grid step
        # of beta; refine by interval membership (beta is continuous in alpha,
        # so its range is [min, max] over the grid up to endpoint refinement)
        lo = np.min(need, axis=1)
        hi = np.max(need, axis=1)
        inside = (t3 >= lo) & (t3 <= hi)
        gap = np.where(inside, 0.0, np.minimum(np.abs(t3 - lo), np.abs(t3 - hi)))
        # Frobenius residual of the aligned product for angle gap
        resid = 2.0 * np.sqrt(np.maximum(0.0, 1.0 - np.cos(gap)))
        out[start : start + chunk] = resid < residual_threshold
    return out


# --- the solver ---------------------------------------------------------------


@dataclass
class SolveResult:
    point: RepPoint
    residual: float
    restarts_used: int
    spec: SolveSpec

    def to_json(self) -> dict:
        return {
            "residual": self.residual,
            "restarts_used": self.restarts_used,
            "generators": [_mat_json(g) for g in self.point.gens],
        }


def _feasibility_oracle(spec: SolveSpec) -> bool | None:
    """Exact infeasibility certificates; None when undecided."""
    model, p = spec.model, spec.pres
    if model.kind == "U":
        det = complex(np.linalg.det(spec.zeta))
        for cls in spec.classes:
            det /= complex(np.linalg.det(cls.representative(model)))
        if abs(det - 1.0) > 1e-9:
            return False
        if model.n == 1:
            # commutators are trivial, so the det condition is the whole story
            return _u1_ok(spec)
    if model.name == "SU2" and p.genus == 0 and 1 <= p.n_torsion <= 3:
        # n < 3 reduces to the triangle case with zero angles padded in
        target = "-e" if np.linalg.norm(spec.zeta + model.identity) < 1e-9 else "e"
        angles = [2.0 * np.pi * float(min(c.fractions)) for c in spec.classes]
        angles = [a if a <= np.pi + 1e-12 else 2 * np.pi - a for a in angles]
        angles += [0.0] * (3 - len(angles))
        return su2_triangle_oracle(*angles, target=target)
    return None


def _u1_ok(spec: SolveSpec) -> bool:
    prod = complex(spec.zeta[0, 0])
    for cls in spec.classes:
        prod /= complex(cls.representative(spec.model)[0, 0])
    return abs(prod - 1.0) < 1e-9


def _assemble(spec: SolveSpec, free: list[np.ndarray], conj: list[np.ndarray]) -> RepPoint:
    gens = list(free)
    for k, cls in zip(conj, spec.classes):
        rep = cls.representative(spec.model)
        gens.append(k @ rep @ np.linalg.inv(k))
    return RepPoint(spec.pres, spec.model, gens)


def _residual_matrix(spec: SolveSpec, pt: RepPoint) -> np.ndarray:
    return pt.long_relator_value() @ np.linalg.inv(spec.zeta) - spec.model.identity


def _jacobian(spec: SolveSpec, pt: RepPoint, fox_rows) -> np.ndarray:
    """Real Jacobian of vec(r(phi) zeta^-1) w.r.t. right-translated moves of
    the free generators and the class conjugators."""
    model, p = spec.model, spec.pres
    d, n = model.d, model.n
    rtail = pt.long_relator_value() @ np.linalg.inv(spec.zeta)
    cols = []
    for i in range(p.num_generators):
        A = pt.ring_matrix(fox_rows[i])  # d x d, coords -> coords of u(r)
        if i >= 2 * p.genus:
            # z_j = k c k^-1: right-translated derivative is (1 - Ad_{z_j}) xi
            A = A @ (np.eye(d) - pt.ad_gens[i])
        for b in range(d):
            M = model.unvec(A[:, b]) @ rtail
            cols.append(np.concatenate([M.real.ravel(), M.imag.ravel()]))
    return np.array(cols).T


def _solve_once(
    spec: SolveSpec, rng: np.random.Generator, fox_rows
) -> tuple[RepPoint, float]:
    model, p = spec.model, spec.pres
    d = model.d
    free = [model.random_element(rng) for _ in range(2 * p.genus)]
    conj = [model.random_element(rng) for _ in range(p.n_torsion)]
    nvars = p.num_generators
    lam = 1e-8
    pt = _assemble(spec, free, conj)
    E = _residual_matrix(spec, pt)
    f = float(np.linalg.norm(E) ** 2)
    for _ in range(spec.max_iters):
        if np.sqrt(f) < spec.tol:
            break
        J = _jacobian(spec, pt, fox_rows)
        r = np.concatenate([E.real.ravel(), E.imag.ravel()])
        JtJ = J.T @ J + lam * np.eye(J.shape[1])
        step = -np.linalg.solve(JtJ, J.T @ r)
        # backtracking on the retracted update
        t = 1.0
        improved = False
        for _ in range(30):
            xi = t * step
            nf = [model.exp(model.unvec(xi[i * d : (i + 1) * d])) @ g
                  for i, g in enumerate(free)]
            nc = [model.exp(model.unvec(xi[(2 * p.genus + j) * d : (2 * p.genus + j + 1) * d])) @ k
                  for j, k in enumerate(conj)]
            npt = _assemble(spec, nf, nc)
            nE = _residual_matrix(spec, npt)
            nfval = float(np.linalg.norm(nE) ** 2)
            if nfval < f:
                free, conj, pt, E, f = nf, nc, npt, nE, nfval
                improved = True
                break
            t *= 0.5
        if improved:
            lam = max(lam * 0.3, 1e-12)
        else:
            lam *= 10.0
            if lam > 1e6:
                break
    return pt, float(np.sqrt(f))


def solve_relator(spec: SolveSpec) -> SolveResult:
    """Find phi with r(phi) = zeta and each phi(z_j) in its class.

    Raises InfeasibleSpec when an exact obstruction certifies emptiness and
    NotFound when the restart budget is exhausted (not a proof of emptiness).
    """
    feas = _feasibility_oracle(spec)
    if feas is False:
        raise InfeasibleSpec("certified infeasible by exact obstruction")
    p = spec.pres
    fox_rows = [fox_derivative(p.long_relator, i) for i in range(p.num_generators)]
    rng = np.random.default_rng(spec.seed)
    best: tuple[RepPoint, float] | None = None
    budget = spec.max_restarts if feas is not True else max(spec.max_restarts, 60)
    for restart in range(budget):
        pt, resid = _solve_once(spec, rng, fox_rows)
        if best is None or resid < best[1]:
            best = (pt, resid)
        if resid < spec.tol:
            return SolveResult(pt, resid, restart + 1, spec)
    assert best is not None
    raise NotFound(
        f"no solution within budget; best residual {best[1]:.3e}"
    )


def sample_fiber(spec: SolveSpec, n: int) -> list[SolveResult]:
    """n independently seeded solves; failures are skipped."""
    import os
    from concurrent.futures import ThreadPoolExecutor

    seeds = [spec.seed + 1000003 * i for i in range(n)]

    def run(seed: int):
        s = SolveSpec(
            spec.pres, spec.model, spec.classes, spec.zeta,
            seed=seed, max_restarts=spec.max_restarts,
            max_iters=spec.max_iters, tol=spec.tol,
        )
        try:
            return solve_relator(s)
        except (NotFound, InfeasibleSpec):
            return None

    workers = int(os.environ.get("PLANAREP_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, seeds))
    else:
        results = [run(s) for s in seeds]
    return [r for r in results if r is not None]

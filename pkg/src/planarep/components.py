"""Conjugacy classes of finite-order elements and component labels.

Connected components of the torsion data correspond to conjugacy classes of
the torsion-generator images; for the unitary models a class is a multiset of
m-th roots of unity, recorded as rational angle fractions k/m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ClassResolutionFailed, UnsupportedModel
from .liegroup import LieModel


@dataclass(frozen=True)
class TorsionClass:
    """Conjugacy class of an element g with g^m = e.

    fractions are the eigenvalue arguments divided by 2 pi, each in [0, 1),
    sorted; for SU(n) they sum to an integer.
    """

    model_name: str
    order: int
    fractions: tuple[Fraction, ...]

    @property
    def class_id(self) -> str:
        inner = ",".join(str(f) for f in self.fractions)
        return f"{self.model_name}|m={self.order}|[{inner}]"

    def representative(self, model: LieModel) -> np.ndarray:
        angles = [2.0 * np.pi * float(f) for f in self.fractions]
        return np.diag(np.exp(1j * np.array(angles)))

    def weights(self) -> list[tuple[Fraction, int]]:
        """Rational weights k/m with multiplicities (parabolic-weight reading)."""
        out: dict[Fraction, int] = {}
        for f in self.fractions:
            out[f] = out.get(f, 0) + 1
        return sorted(out.items())

    def to_json(self) -> dict:
        return {
            "model": self.model_name,
            "order": self.order,
            "fractions": [{"num": f.numerator, "den": f.denominator} for f in self.fractions] ,
            "id": self.class_id,
        }


def _su2_fractions(k: int, m: int) -> tuple[Fraction, ...]:
    """Eigenvalues e^{+-2 pi i k/m} as sorted fractions in [0,1)."""
    a = Fraction(k, m)
    b = Fraction(m - k, m) if k else Fraction(0)
    return tuple(sorted((a, b)))


def finite_order_classes(model: LieModel, m: int) -> list[TorsionClass]:
    """All conjugacy classes of elements g with g^m = e, canonically ordered."""
    if m < 1:
        raise ValueError("order must be >= 1")
    if model.kind == "SL2R":
        raise UnsupportedModel(
            "SL(2,R) elliptic classes form continuous angle families; "
            "finite enumeration is not available"
        )
    if model.kind == "SU" and model.n == 2:
        return [
            TorsionClass(model.name, m, _su2_fractions(k, m))
            for k in range(m // 2 + 1)
        ]
    if model.kind == "U":
        from itertools import combinations_with_replacement

        out = []
        for ks in combinations_with_replacement(range(m), model.n):
            out.append(
                TorsionClass(
                    model.name, m, tuple(sorted(Fraction(k, m) for k in ks))
                )
            )
        return out
    raise UnsupportedModel(f"no class enumeration for {model.name}")


def resolve_class(
    model: LieModel, g: np.ndarray, m: int, tol: float = 1e-6
) -> TorsionClass:
    """Round the spectrum of g to its exact root-of-unity class."""
    evals = np.linalg.eigvals(g)
    fractions = []
    for lam in evals:
        frac = np.angle(lam) / (2.0 * np.pi) % 1.0
        k = round(frac * m)
        if abs(frac - k / m) > tol or abs(abs(lam) - 1.0) > tol:
            raise ClassResolutionFailed(
                f"eigenvalue {lam} is not within {tol} of an order-{m} root of unity"
            )
        fractions.append(Fraction(k % m, m))
    return TorsionClass(model.name, m, tuple(sorted(fractions)))


def component_label(pt, tol: float = 1e-6) -> list[str]:
    """Class id of each torsion-generator image (conjugation invariant)."""
    p = pt.pres
    out = []
    for j, m in enumerate(p.torsion):
        cls = resolve_class(pt.model, pt.gens[p.z_index(j)], m, tol)
        out.append(cls.class_id)
    return out


def weight_dictionary(cls: TorsionClass) -> list[dict]:
    """Parabolic weights k/m with multiplicities for a unitary class."""
    return [
        {"num": f.numerator, "den": f.denominator, "multiplicity": mult}
        for f, mult in cls.weights()
    ]


def stratum_report(pt, tol=None) -> dict:
    """Orbit-type data at a point: stabilizer dim h0, labels, h1, orbit dim."""
    from .cohomology import cohomology_data
    from .config import DEFAULT_TOL

    data = cohomology_data(pt, tol or DEFAULT_TOL)
    return {
        "stabilizer_dim": data.h0,
        "labels": component_label(pt),
        "h1": data.h1,
        "orbit_dim": pt.model.d - data.h0,
    }

#!/usr/bin/env python3
"""Verify the momentum identity on a batch of solved points and print the
worst relative residual per seed.

Usage: python scripts/run_momenttest.py [--genus 1] [--torsion 3] [--seeds 10]
"""

import argparse

import numpy as np

from planarep.cohomology import cohomology_data
from planarep.components import finite_order_classes
from planarep.liegroup import get_model
from planarep.presentations import PlanarPresentation
from planarep.solver import SolveSpec, solve_relator
from planarep.symplectic import (
    check_moment_identity,
    default_calibration,
    extend_point,
    moment_pairing,
    tangent_from_u,
    unflatten,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--group", default="SU2")
    ap.add_argument("--genus", type=int, default=1)
    ap.add_argument("--torsion", default="3")
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--trials", type=int, default=5)
    args = ap.parse_args()

    model = get_model(args.group)
    torsion = tuple(int(t) for t in args.torsion.split(",")) if args.torsion else ()
    pres = PlanarPresentation(args.genus, torsion)
    classes = [finite_order_classes(model, m)[1] for m in torsion]
    calib = default_calibration()
    print(f"calibration: s1={calib.s1} s2={calib.s2} kappa={calib.kappa_norm}")

    overall = 0.0
    for seed in range(args.seeds):
        spec = SolveSpec(pres, model, classes, seed=seed, tol=1e-12)
        pt = extend_point(solve_relator(spec).point)
        Q = cohomology_data(pt.phi).proj_basis
        rng = np.random.default_rng(1000 + seed)
        worst = 0.0
        for _ in range(args.trials):
            X = model.random_alg(rng)
            coords = rng.standard_normal(Q.shape[1])
            t = tangent_from_u(pt, unflatten(model, Q @ coords, pres.num_generators))
            scale = max(1.0, abs(moment_pairing(pt, X)), np.linalg.norm(coords))
            worst = max(worst, check_moment_identity(pt, X, t, calib) / scale)
        overall = max(overall, worst)
        print(f"seed {seed:3d}: worst relative residual {worst:.3e}")
    print(f"overall worst: {overall:.3e}")


if __name__ == "__main__":
    main()

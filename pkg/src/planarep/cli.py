"""Command line interface.

Every subcommand emits a single JSON report with a stable schema tag, so runs
can be diffed and archived.  Exit codes: 0 success, 2 malformed input,
3 certified infeasible / not found, 4 tolerance failure, 5 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

import numpy as np

from .cohomology import cohomology_data, euler_characteristic_expected
from .components import finite_order_classes, stratum_report, weight_dictionary
from .config import Tolerances
from .errors import (
    CalibrationFailed,
    InfeasibleSpec,
    MalformedInput,
    NotFound,
    PlanarepError,
)
from .foxcalc import abelianized_boundary, fundamental_cycle
from .liegroup import get_model
from .presentations import PlanarPresentation
from .solver import SolveSpec, solve_relator
from .symplectic import (
    calibrate,
    check_moment_identity,
    default_calibration,
    degeneracy_report,
    extend_point,
    tangent_from_u,
    unflatten,
)

EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_TOLERANCE = 4
EXIT_INTERNAL = 5

SCHEMA = "planarep/1"


class ToleranceExceeded(PlanarepError):
    pass


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--group", default="SU2",
                     help="matrix group model: SU2, U1, U2, U3, SL2R")
    sub.add_argument("--genus", type=int, default=1)
    sub.add_argument("--torsion", default="",
                     help="comma-separated torsion orders, e.g. 2,3,7")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--tol-rank", type=float, default=1e-8)
    sub.add_argument("--tol-grp", type=float, default=1e-8)
    sub.add_argument("--quad-nodes", type=int, default=32)
    sub.add_argument("--json-out", default=None, help="also write report to this file")
    sub.add_argument("--no-timestamp", action="store_true",
                     help="omit timestamp for byte-reproducible reports")


def _tolerances(args) -> Tolerances:
    return Tolerances(
        rank_rel=args.tol_rank, tau_grp=args.tol_grp, quad_nodes=args.quad_nodes
    )


def _presentation(args) -> PlanarPresentation:
    torsion = ()
    if args.torsion.strip():
        try:
            torsion = tuple(int(t) for t in args.torsion.split(","))
        except ValueError:
            raise MalformedInput(f"bad torsion list: {args.torsion!r}")
    return PlanarPresentation(args.genus, torsion)


def _pick_classes(model, pres, text: str | None):
    """Class per torsion generator from comma-separated indices (default:
    first nontrivial class of each order)."""
    out = []
    for j, m in enumerate(pres.torsion):
        classes = finite_order_classes(model, m)
        if text:
            idxs = text.split(",")
            if len(idxs) != pres.n_torsion:
                raise MalformedInput("need one class index per torsion generator")
            i = int(idxs[j])
        else:
            i = 1 if len(classes) > 1 else 0
        if not 0 <= i < len(classes):
            raise MalformedInput(
                f"class index {i} out of range for order {m} ({len(classes)} classes)"
            )
        out.append(classes[i])
    return out


def _zeta(model, text: str):
    if text == "e":
        return model.identity.copy()
    if text == "-e":
        return -model.identity
    raise MalformedInput(f"target must be 'e' or '-e', got {text!r}")


def _solved_point(args, tol):
    model = get_model(args.group)
    pres = _presentation(args)
    classes = _pick_classes(model, pres, getattr(args, "classes", None))
    zeta = _zeta(model, getattr(args, "target", "e"))
    spec = SolveSpec(pres, model, classes, zeta, seed=args.seed, tol=tol.tau_grp)
    return solve_relator(spec), spec


def _emit(args, command: str, payload: dict, tol: Tolerances) -> None:
    report = {"schema": SCHEMA, "command": command}
    if not args.no_timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    report["tolerances"] = tol.to_json()
    report.update(payload)
    text = json.dumps(report, indent=2, default=_jsonable)
    print(text)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")


def _jsonable(x):
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, bool):
        return x
    raise TypeError(f"not JSON-serializable: {type(x)}")


# --- subcommands ---------------------------------------------------------------


def cmd_analyze(args) -> None:
    tol = _tolerances(args)
    pres = _presentation(args)
    b, kappa = fundamental_cycle(pres)
    payload = {
        "presentation": pres.to_json(),
        "rendering": pres.render(),
        "measure": str(pres.measure),
        "measure_float": float(pres.measure),
        "lcm": pres.lcm,
        "abelianized_boundary": [
            [str(q) for q in row] for row in abelianized_boundary(pres)
        ],
        "fundamental_cycle": [str(q) for q in b],
        "fundamental_class": [str(q) for q in kappa],
    }
    _emit(args, "analyze", payload, tol)


def cmd_cohomology(args) -> None:
    tol = _tolerances(args)
    res, spec = _solved_point(args, tol)
    data = cohomology_data(res.point, tol)
    expected = euler_characteristic_expected(res.point, data.f_j)
    payload = {
        "group": spec.model.name,
        "presentation": spec.pres.to_json(),
        "classes": [c.to_json() for c in spec.classes],
        "solve_residual": res.residual,
        "dims": {"h0": data.h0, "h1": data.h1, "h2": data.h2},
        "fixed_dims": data.f_j,
        "euler": data.h0 - data.h1 + data.h2,
        "euler_expected": expected,
        "poincare_duality": data.h0 == data.h2,
    }
    _emit(args, "cohomology", payload, tol)


def cmd_symplectic(args) -> None:
    tol = _tolerances(args)
    res, spec = _solved_point(args, tol)
    calib = default_calibration()
    pt = extend_point(res.point)
    report = degeneracy_report(pt, calib, tol)
    payload = {
        "group": spec.model.name,
        "presentation": spec.pres.to_json(),
        "classes": [c.to_json() for c in spec.classes],
        "solve_residual": res.residual,
        "calibration": calib.to_json(),
        "degeneracy": report,
    }
    _emit(args, "symplectic", payload, tol)


def cmd_components(args) -> None:
    tol = _tolerances(args)
    model = get_model(args.group)
    pres = _presentation(args)
    per_gen = []
    for m in pres.torsion:
        classes = finite_order_classes(model, m)
        per_gen.append({
            "order": m,
            "count": len(classes),
            "classes": [
                {**c.to_json(), "weights": weight_dictionary(c)} for c in classes
            ],
        })
    payload = {
        "group": model.name,
        "presentation": pres.to_json(),
        "torsion_classes": per_gen,
    }
    if getattr(args, "with_point", False):
        res, _ = _solved_point(args, tol)
        payload["point_stratum"] = stratum_report(res.point, tol)
    _emit(args, "components", payload, tol)


def cmd_solve(args) -> None:
    tol = _tolerances(args)
    res, spec = _solved_point(args, tol)
    payload = {
        "group": spec.model.name,
        "presentation": spec.pres.to_json(),
        "spec": spec.to_json(),
        "result": res.to_json(),
        "component": stratum_report(res.point, tol),
    }
    _emit(args, "solve", payload, tol)


def cmd_momenttest(args) -> None:
    tol = _tolerances(args)
    if args.recalibrate:
        calib = calibrate(seed=args.seed, tol=tol)
    else:
        calib = default_calibration()
    res, spec = _solved_point(args, tol)
    pt = extend_point(res.point)
    model, pres = spec.model, spec.pres
    data = cohomology_data(res.point, tol)
    Q = data.proj_basis
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.trials):
        X = model.random_alg(rng)
        coords = rng.standard_normal(Q.shape[1])
        u = unflatten(model, Q @ coords, pres.num_generators)
        t = tangent_from_u(pt, u)
        scale = max(
            abs(-model.pairing(model.unvec(t.V), X)),
            np.linalg.norm(Q @ coords),
            1.0,
        )
        worst = max(worst, check_moment_identity(pt, X, t, calib, tol.quad_nodes) / scale)
    payload = {
        "group": model.name,
        "presentation": pres.to_json(),
        "calibration": calib.to_json(),
        "solve_residual": res.residual,
        "trials": args.trials,
        "max_relative_residual": worst,
        "threshold": args.threshold,
        "passed": worst < args.threshold,
    }
    _emit(args, "momenttest", payload, tol)
    if worst >= args.threshold:
        raise ToleranceExceeded(
            f"momentum identity residual {worst:.3e} exceeds {args.threshold:.3e}"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planarep",
        description="representation varieties of cocompact planar groups",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("analyze", help="presentation invariants and exact chains")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = subs.add_parser("cohomology", help="twisted cohomology at a solved point")
    _add_common(p)
    p.add_argument("--classes", default=None, help="class indices, e.g. 1,1,2")
    p.add_argument("--target", default="e", help="central target: e or -e")
    p.set_defaults(func=cmd_cohomology)

    p = subs.add_parser("symplectic", help="pairing rank / degeneracy report")
    _add_common(p)
    p.add_argument("--classes", default=None)
    p.add_argument("--target", default="e")
    p.set_defaults(func=cmd_symplectic)

    p = subs.add_parser("components", help="torsion class enumeration and weights")
    _add_common(p)
    p.add_argument("--classes", default=None)
    p.add_argument("--target", default="e")
    p.add_argument("--with-point", action="store_true",
                   help="also solve for a point and report its stratum")
    p.set_defaults(func=cmd_components)

    p = subs.add_parser("solve", help="find a representation in prescribed classes")
    _add_common(p)
    p.add_argument("--classes", default=None)
    p.add_argument("--target", default="e")
    p.set_defaults(func=cmd_solve)

    p = subs.add_parser("momenttest", help="verify the momentum identity numerically")
    _add_common(p)
    p.add_argument("--classes", default=None)
    p.add_argument("--target", default="e")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--threshold", type=float, default=1e-8)
    p.add_argument("--recalibrate", action="store_true",
                   help="rerun sign/scale calibration instead of the frozen record")
    p.set_defaults(func=cmd_momenttest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code not in (0, None) else 0
    try:
        args.func(args)
        return 0
    except MalformedInput as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (InfeasibleSpec, NotFound) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ToleranceExceeded, CalibrationFailed) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TOLERANCE
    except PlanarepError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

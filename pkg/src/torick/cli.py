"""Command-line front end: family evaluation, verification pipelines, reports.

Every command emits a single JSON document with the full run configuration
echoed, keys sorted and floats at 17 significant digits, so identical
invocations produce byte-identical output.  Exit codes: 0 success, 1
verification failure, 2 input error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from fractions import Fraction

import numpy as np

from . import __version__, errors
from .affine import ONE, AffineMap2
from .families import (
    FamilyId,
    family_f,
    family_grid,
    identity_e2,
    positivity_scan_case12,
    case12_samples,
    r_k,
)
from .futaki import ckem_constant, crease_scan, df_invariant, extremal_affine, CreaseFunction
from .jsonio import canonical_dumps
from .moments import zeta_exact
from .polytope import LabelledPolytope2, hirzebruch_delzant, min_over_vertices
from .solver import solve_condition_a, stability_verdict
from .twist import twist_report

# Relative p-grid margin keeping batch verification away from family-domain
# endpoints, where the weight degenerates at a vertex and the Gram system
# becomes too ill-conditioned for double precision.
GRID_MARGIN_REL = 0.04

E2_RATIONALS = ["1/2", "7/10", "1/3", "2/5", "3/7", "9/11", "5/13"]


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-10
    tau_a: float = 1e-7
    tau_eq: float = 1e-8
    creases: int = 200
    seed: int = 42
    out: str | None = None

    def __post_init__(self):
        for name in ("tol", "tau_a", "tau_eq"):
            if getattr(self, name) <= 0.0:
                raise errors.ParameterOutOfRange(f"{name} must be positive")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


def _thread_count() -> int:
    raw = os.environ.get("TORICK_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _grid_map(fn, items):
    """Map preserving input order, fanning out over TORICK_THREADS."""
    n = _thread_count()
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _parse_coeffs(text: str) -> AffineMap2:
    parts = text.split(",")
    if len(parts) != 3:
        raise errors.ParameterOutOfRange(f"expected 'c0,c1,c2', got {text!r}")
    try:
        return AffineMap2(*(float(p) for p in parts))
    except ValueError as exc:
        raise errors.ParameterOutOfRange(f"bad coefficients {text!r}: {exc}") from exc


def _load_polytope(path: str) -> LabelledPolytope2:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise errors.InvalidPolytope("readable polytope file", str(exc)) from exc
    return LabelledPolytope2.from_json(text)


def _render_human(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_human(v, indent + 1))
            else:
                lines.append(f"{pad}{str(k).ljust(width)}  {v}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}[{i}]")
                lines.extend(_render_human(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def _emit(report: dict, cfg: RunConfig, human: bool) -> None:
    report = dict(report)
    report["config"] = cfg.echo()
    report["version"] = __version__
    if human:
        text = "\n".join(_render_human(report)) + "\n"
    else:
        text = canonical_dumps(report)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_family(args, cfg: RunConfig) -> int:
    fam = FamilyId(args.id)
    f = family_f(fam, args.p, args.k, args.sign, args.b)
    P = hirzebruch_delzant(args.p, args.k)
    mn, idx = min_over_vertices(P, f)
    rep = {
        "family": fam.value,
        "p": args.p,
        "k": args.k,
        "sign": args.sign,
        "b": args.b,
        "coefficients": f.to_dict(),
        "min_vertex_value": mn,
        "argmin_vertex": idx,
        "positive_on_polytope": mn > 0.0,
    }
    if mn > 0.0:
        ex = extremal_affine(P, f, 4.0, cfg.tol)
        rep["residual_a"] = ex.residual_a
        rep["ckem_constant"] = ckem_constant(P, f, 2, cfg.tol)
    else:
        zeta, _ = zeta_exact(P, f)
        rep["residual_a"] = (
            (abs(zeta.c1) + abs(zeta.c2)) * P.diameter / abs(float(zeta(P.centroid)))
        )
    _emit(rep, cfg, args.human)
    return 0


def cmd_zeta(args, cfg: RunConfig) -> int:
    P = _load_polytope(args.polytope)
    f = _parse_coeffs(args.f)
    ex = extremal_affine(P, f, args.w, cfg.tol)
    rep = {
        "zeta": ex.zeta.to_dict(),
        "residual_a": ex.residual_a,
        "gram_condition_number": ex.gram_condition_number,
        "c": ckem_constant(P, f, 2, cfg.tol) if args.w == 4.0 else None,
        "w": args.w,
    }
    _emit(rep, cfg, args.human)
    return 0


def cmd_df(args, cfg: RunConfig) -> int:
    P = _load_polytope(args.polytope)
    f = _parse_coeffs(args.f)
    ex = extremal_affine(P, f, args.w, cfg.tol)
    if args.crease is not None:
        phi = CreaseFunction(_parse_coeffs(args.crease))
        kind = "crease"
    elif args.affine is not None:
        phi = _parse_coeffs(args.affine)
        kind = "affine"
    else:
        raise errors.ParameterOutOfRange("provide --crease or --affine")
    value = df_invariant(P, f, args.w, phi, ex.zeta, cfg.tol)
    rep = {
        "df_value": value,
        "phi_kind": kind,
        "zeta": ex.zeta.to_dict(),
        "residual_a": ex.residual_a,
        "w": args.w,
    }
    _emit(rep, cfg, args.human)
    return 0


def cmd_twist(args, cfg: RunConfig) -> int:
    P = _load_polytope(args.polytope)
    f = _parse_coeffs(args.f)
    rep = twist_report(P, f, cfg.tol, cfg.seed)
    _emit(rep, cfg, args.human)
    return 0


def cmd_stability(args, cfg: RunConfig) -> int:
    P = _load_polytope(args.polytope)
    f = _parse_coeffs(args.f)
    rep = stability_verdict(
        P, f, args.w, cfg.tol, cfg.tau_a, cfg.tau_eq, cfg.creases, cfg.seed
    )
    _emit(rep, cfg, args.human)
    return 0 if rep["verdict"] == "STABLE-BY-THEOREM" else 1


def cmd_solve_a(args, cfg: RunConfig) -> int:
    P = _load_polytope(args.polytope)
    roots = solve_condition_a(P, 4.0, args.starts, cfg.seed, args.newton_tol)
    rep = {
        "roots": [
            {
                "f": r.f.to_dict(),
                "residual_a": r.residual_a,
                "positive_on_polytope": r.positive_on_polytope,
                "matched_family": r.matched_family,
            }
            for r in roots
        ],
        "num_roots": len(roots),
        "starts": args.starts,
    }
    _emit(rep, cfg, args.human)
    return 0


def _verify_thm2(args, cfg: RunConfig):
    ks = args.k or [1, 2, 3, 4]
    cases = []
    for k in ks:
        grid = family_grid(FamilyId.FUTAKI_ONO, k, args.grid, GRID_MARGIN_REL)
        for p in grid:
            for sign in ("+", "-"):
                cases.append((int(k), float(p), sign))

    def run(case):
        k, p, sign = case
        P = hirzebruch_delzant(p, k)
        f = family_f(FamilyId.FUTAKI_ONO, p, k, sign)
        rep = stability_verdict(P, f, 4.0, cfg.tol, cfg.tau_a, cfg.tau_eq, cfg.creases, cfg.seed)
        return {
            "k": k,
            "p": p,
            "sign": sign,
            "verdict": rep["verdict"],
            "residual_a": rep["residual_a"],
            "quad_type": rep["quad_type"],
            "equipoised_sum_rel": rep["equipoised_sum_rel"],
        }

    results = _grid_map(run, cases)
    ok = all(r["verdict"] == "STABLE-BY-THEOREM" for r in results)
    report = {
        "target": "thm2",
        "num_cases": len(results),
        "all_stable": ok,
        "cases": results,
    }
    return report, 0 if ok else 1


def _verify_thm1_uniqueness(args, cfg: RunConfig):
    # p-grid on (0, 1) avoiding the two windows with extra positive roots
    n = args.grid
    r1 = r_k(1)
    ps = [p for p in np.linspace(0.05, 0.95, n) if r1 + 0.02 < p < 8.0 / 9.0 - 0.02]

    def run(p):
        P = hirzebruch_delzant(float(p), 1)
        roots = solve_condition_a(P, 4.0, starts=args.starts, seed=cfg.seed, tol=1e-9)
        positive = [r for r in roots if r.positive_on_polytope]
        return {
            "p": float(p),
            "num_roots": len(roots),
            "num_positive": len(positive),
            "positive_families": sorted(
                {r.matched_family or "unmatched" for r in positive}
            ),
        }

    results = _grid_map(run, ps)
    ok = all(r["positive_families"] == ["lebrun-calabi"] for r in results)
    report = {
        "target": "thm1-uniqueness",
        "num_cases": len(results),
        "only_positive_root_is_calabi_type": ok,
        "cases": results,
    }
    return report, 0 if ok else 1


def _verify_identity_e2(args, cfg: RunConfig):
    values = []
    for text in E2_RATIONALS:
        num, den = text.split("/")
        v = identity_e2(Fraction(int(num), int(den)))
        values.append({"p": text, "value_is_exact_zero": v == 0, "value": str(v)})
    ok = all(item["value_is_exact_zero"] for item in values)
    report = {
        "target": "identity-e2",
        "exact_zero_at": sum(1 for item in values if item["value_is_exact_zero"]),
        "checked": values,
    }
    return report, 0 if ok else 1


def _verify_case12(args, cfg: RunConfig):
    samples = case12_samples(args.samples, cfg.seed)
    rep = positivity_scan_case12(samples)
    ok = rep["max_of_min_vertex_values"] < 0.0 and rep["counterexample"] is None
    report = {"target": "case12", "all_nonpositive": ok, **rep}
    return report, 0 if ok else 1


def cmd_verify(args, cfg: RunConfig) -> int:
    dispatch = {
        "thm2": _verify_thm2,
        "thm1-uniqueness": _verify_thm1_uniqueness,
        "identity-e2": _verify_identity_e2,
        "case12": _verify_case12,
    }
    report, code = dispatch[args.target](args, cfg)
    _emit(report, cfg, args.human)
    return code


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--config", help="JSON file with RunConfig fields")
    sub.add_argument("--tol", type=float, help="quadrature tolerance (default 1e-10)")
    sub.add_argument("--tau-a", type=float, dest="tau_a", help="condition-(a) threshold")
    sub.add_argument("--tau-eq", type=float, dest="tau_eq", help="equipoised threshold")
    sub.add_argument("--creases", type=int, help="crease count for scans")
    sub.add_argument("--seed", type=int, help="random seed")
    sub.add_argument("--out", help="write the report to this path instead of stdout")
    sub.add_argument("--human", action="store_true", help="aligned text instead of JSON")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="torick",
        description="Toric K-stability toolkit for labelled polygons",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sp = ap.add_subparsers(dest="command", required=True)

    fam = sp.add_parser("family", help="evaluate one of the explicit affine families")
    fam.add_argument("--id", required=True, choices=[f.value for f in FamilyId])
    fam.add_argument("--p", type=float, required=True)
    fam.add_argument("--k", type=int, default=1)
    fam.add_argument("--sign", choices=["+", "-"], default="+")
    fam.add_argument("--b", type=float, default=None)
    _add_common(fam)
    fam.set_defaults(fn=cmd_family)

    for name, fn, extra in (
        ("zeta", cmd_zeta, ()),
        ("df", cmd_df, ("crease", "affine")),
        ("twist", cmd_twist, ()),
        ("stability", cmd_stability, ()),
    ):
        sub = sp.add_parser(name, help=f"{name} report for a polytope file")
        sub.add_argument("--polytope", required=True, help="polytope JSON file")
        sub.add_argument("--f", required=True, help="weight coefficients 'c0,c1,c2'")
        if name in ("zeta", "df", "stability"):
            sub.add_argument("--w", type=float, default=4.0)
        for opt in extra:
            sub.add_argument(f"--{opt}", help=f"{opt} coefficients 'c0,c1,c2'")
        _add_common(sub)
        sub.set_defaults(fn=fn)

    sol = sp.add_parser("solve-a", help="multistart solve of the condition-(a) system")
    sol.add_argument("--polytope", required=True)
    sol.add_argument("--starts", type=int, default=150)
    sol.add_argument("--newton-tol", type=float, dest="newton_tol", default=1e-9)
    _add_common(sol)
    sol.set_defaults(fn=cmd_solve_a)

    ver = sp.add_parser("verify", help="batch verification pipelines")
    ver.add_argument(
        "target", choices=["thm1-uniqueness", "thm2", "identity-e2", "case12"]
    )
    ver.add_argument("--k", type=int, nargs="+", help="trapezoid parameters k")
    ver.add_argument("--grid", type=int, default=25, help="points per p-grid")
    ver.add_argument("--samples", type=int, default=500, help="samples for case12")
    ver.add_argument("--starts", type=int, default=150, help="Newton starts")
    _add_common(ver)
    ver.set_defaults(fn=cmd_verify)
    return ap


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise errors.ParameterOutOfRange(f"bad config file: {exc}") from exc
        unknown = set(data) - set(RunConfig.__dataclass_fields__)
        if unknown:
            raise errors.ParameterOutOfRange(f"unknown config keys {sorted(unknown)}")
        cfg = replace(cfg, **data)
    overrides = {
        name: getattr(args, name)
        for name in ("tol", "tau_a", "tau_eq", "creases", "seed", "out")
        if getattr(args, name, None) is not None
    }
    return replace(cfg, **overrides)


INPUT_ERRORS = (
    errors.InvalidPolytope,
    errors.UnboundedRegion,
    errors.EmptyInterior,
    errors.RedundantLabel,
    errors.ParameterOutOfRange,
    errors.ParameterOutOfDomain,
    errors.NegativeDiscriminant,
    errors.NotAQuadrilateral,
    errors.ZeroConstantTerm,
    errors.OriginNotInterior,
    errors.VertexZero,
)

NUMERIC_ERRORS = (
    errors.ToleranceNotReached,
    errors.IllConditioned,
    errors.NoConvergence,
    errors.DegeneratePolytope,
    errors.NonPositiveWeight,
    errors.NotInterior,
    errors.SingularHessian,
    errors.StepTooLarge,
)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return args.fn(args, cfg)
    except errors.ConditionANotMet as exc:
        sys.stderr.write(canonical_dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    except INPUT_ERRORS as exc:
        sys.stderr.write(canonical_dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 2
    except NUMERIC_ERRORS as exc:
        sys.stderr.write(canonical_dumps({"error": type(exc).__name__, "message": str(exc)}))
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every subcommand reads a jet manifest and prints ``KEY=VALUE`` report lines.
Exit codes: 0 success, 1 a verification check failed, 2 usage or input
errors, 3 file-system errors.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .asymptotics import (
    asymptotic_cubic,
    classify_orbit,
    classify_surface_jet,
    equivalence_check,
    is_asymptotic,
    projection_asymptotic_correspondence,
)
from .errors import LocusmithError
from .export import locus_csv, locus_obj
from .loci import GridSpec, classify_locus, sample_locus
from .manifest import dump_jet, load_manifest
from .sections import FamilySpec, normal_section, project_along, section_family_classifier, verify_diagram

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
TOL = 1e-9


class _Usage(Exception):
    pass


def _num(x: float) -> str:
    x = float(x)
    if abs(x) < 1e-13:
        x = 0.0
    return f"{x:.12g}"


def _vec(v) -> str:
    return ",".join(_num(x) for x in np.asarray(v, dtype=float))


def _pretty(label: str) -> str:
    return label.replace("^2", "²")


def _projective(v) -> np.ndarray:
    """Representative scaled so its largest entry has magnitude one."""
    v = np.asarray(v, dtype=float)
    return v / np.max(np.abs(v))


def _parse_grid(text: str):
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise _Usage(f"--grid expects NxM, got {text!r}") from None


def _parse_direction(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise _Usage(f"--direction expects comma-separated numbers, got {text!r}") from None


def _emit(out, key, value):
    out.write(f"{key}={value}\n")


def _summary(jet, inv) -> str:
    cls = jet.manifold_class
    if cls == "reg-3manifold":
        flag = "true" if inv.H_in_Ep else "false"
        return f"{cls}; dim N¹={inv.dim_first_normal}; H∈Eₚ={flag}"
    if cls == "sing-3manifold" and jet.ambient_dim == 5:
        return f"{cls}; orbit {_pretty(classify_orbit(jet).label)}; {inv.degenerate_type}"
    if cls == "sing-surface":
        return f"{cls}; orbit {_pretty(classify_surface_jet(jet).label)}; {inv.degenerate_type}"
    return f"{cls}; dim N¹={inv.dim_first_normal}; {inv.degenerate_type}"


def cmd_classify(args, out) -> int:
    for n, jet in enumerate(load_manifest(args.manifest)):
        if n:
            out.write("\n")
        inv = classify_locus(jet)
        _emit(out, "CLASS", jet.manifold_class)
        _emit(out, "AMBIENT_DIM", jet.ambient_dim)
        _emit(out, "DIM_N1", inv.dim_first_normal)
        _emit(out, "DIM_AFF", inv.dim_affine_hull)
        _emit(out, "TYPE", inv.degenerate_type)
        _emit(out, "TAG", inv.tag)
        if inv.mean_curvature is not None:
            _emit(out, "H", _vec(inv.mean_curvature))
            _emit(out, "H_IN_EP", str(bool(inv.H_in_Ep)).lower())
        if jet.manifold_class == "sing-3manifold" and jet.ambient_dim == 5:
            orb = classify_orbit(jet)
            _emit(out, "ORBIT", orb.label)
            _emit(out, "RANK_ALPHA", orb.rank_alpha)
        if jet.manifold_class == "sing-surface":
            _emit(out, "ORBIT", classify_surface_jet(jet).label)
        _emit(out, "SUMMARY", _summary(jet, inv))
    return EXIT_OK


def cmd_locus(args, out) -> int:
    jet = load_manifest(args.manifest)[0]
    n_theta, n_phi = _parse_grid(args.grid)
    sample = sample_locus(jet, GridSpec(n_theta, n_phi, args.height))
    try:
        text = locus_csv(sample) if args.format == "csv" else locus_obj(sample)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        _emit(out, "POINTS", len(sample.points))
        _emit(out, "FORMAT", args.format)
        _emit(out, "FILE", args.out)
    else:
        out.write(text)
    return EXIT_OK


def _write_jet(jet, args, out, comment):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dump_jet(jet, comment))
        _emit(out, "FILE", args.out)
    _emit(out, "JET", "(" + ", ".join(jet.polynomial_strings()) + ")")


def cmd_section(args, out) -> int:
    jet = load_manifest(args.manifest)[0]
    if args.family_steps is not None:
        rep = section_family_classifier(jet, FamilySpec.midpoints(args.family_steps))
        for label, direction, kind in rep.entries:
            _emit(out, f"SECTION[{label}]", kind)
        for kind in sorted(rep.counts):
            _emit(out, f"COUNT[{kind}]", rep.counts[kind])
        return EXIT_OK
    if args.direction is None:
        raise _Usage("section needs --direction or --family-steps")
    u = _parse_direction(args.direction)
    sec = normal_section(jet, u)
    inv = classify_locus(sec)
    _emit(out, "CLASS", sec.manifold_class)
    _emit(out, "TYPE", inv.degenerate_type)
    _write_jet(sec, args, out, f"normal section along {_vec(u)}")
    return EXIT_OK


def cmd_project(args, out) -> int:
    jet = load_manifest(args.manifest)[0]
    u = _parse_direction(args.direction or "0,0,1")
    proj = project_along(jet, u)
    _emit(out, "CLASS", proj.manifold_class)
    if proj.manifold_class == "sing-3manifold" and proj.ambient_dim == 5:
        _emit(out, "ORBIT", classify_orbit(proj).label)
    if proj.manifold_class == "sing-surface":
        _emit(out, "ORBIT", classify_surface_jet(proj).label)
    _emit(out, "TYPE", classify_locus(proj).degenerate_type)
    _write_jet(proj, args, out, f"projection along {_vec(u)}")
    return EXIT_OK


def cmd_asymptotic(args, out) -> int:
    jet = load_manifest(args.manifest)[0]
    if args.direction is not None:
        res = is_asymptotic(jet, _parse_direction(args.direction))
        _emit(out, "ASYMPTOTIC", str(res.asymptotic).lower())
        _emit(out, "KIND", res.kind or "none")
        if res.witness is not None:
            _emit(out, "WITNESS", _vec(_projective(res.witness)))
        return EXIT_OK
    cubic = asymptotic_cubic(jet)
    _emit(out, "DEGREE", cubic.degree)
    _emit(out, "COEFFICIENTS", _vec(cubic.coefficients))
    _emit(out, "ALL_DIRECTIONS", str(cubic.all_directions).lower())
    _emit(out, "ROOTS", len(cubic.roots))
    lines = []
    for k, (u, nu, res) in enumerate(zip(cubic.roots, cubic.binormals, cubic.binormal_residuals)):
        lines.append(f"ROOT[{k}]={_vec(_projective(u))} -> {_vec(_projective(nu))}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            n, k = jet.source_dim, jet.normal_dim
            fh.write(",".join([f"u{i + 1}" for i in range(n)] + [f"nu{i + 1}" for i in range(k)] + ["residual"]) + "\n")
            for u, nu, res in zip(cubic.roots, cubic.binormals, cubic.binormal_residuals):
                fh.write(",".join(repr(float(x) + 0.0) for x in (*u, *nu, res)) + "\n")
        _emit(out, "FILE", args.out)
    else:
        out.write("\n".join(lines) + ("\n" if lines else ""))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    jet = load_manifest(args.manifest)[0]
    ok = True
    if jet.manifold_class == "reg-3manifold":
        u = _parse_direction(args.direction or "0,0,1")
        s = _parse_direction(args.section_normal)
        n_theta, n_phi = _parse_grid(args.grid)
        rep = verify_diagram(jet, u, s, GridSpec(n_theta, n_phi, phi_range=(0.1, np.pi - 0.1)))
        _emit(out, "DEV_PROJECTION_SECTION", f"{rep.dev_projection_section:.3e}")
        _emit(out, "DEV_BLOWUP", f"{rep.dev_blowup:.3e}")
        _emit(out, "DEV_SECTION_PARABOLA", f"{rep.dev_section_parabola:.3e}")
        _emit(out, "MAX_DEVIATION", f"{rep.max_deviation:.3e}")
        ok &= rep.passed(TOL)
        if jet.ambient_dim == 6:
            corr = projection_asymptotic_correspondence(jet, u)
            _emit(out, "ROOT_DISTANCE", f"{corr.root_distance:.3e}")
            _emit(out, "BINORMAL_ANGLE", f"{corr.binormal_angle:.3e}")
            _emit(out, "U_ASYMPTOTIC", str(corr.u_asymptotic).lower())
            _emit(out, "PROJECTED_ORBIT", corr.orbit.label)
            ok &= corr.passed(1e-6)
    elif jet.source_dim == 3 and jet.normal_dim == 3:
        rep = equivalence_check(jet)
        _emit(out, "DIRECTIONS", len(rep.directions))
        _emit(out, "UNDECIDED", int(np.sum(np.any(rep.decisions == 0, axis=1))))
        _emit(out, "DISAGREEMENTS", len(rep.disagreements))
        ok &= rep.ok
    else:
        raise _Usage(f"nothing to verify for {jet.manifold_class} in R^{jet.ambient_dim}")
    _emit(out, "PASS", str(bool(ok)).lower())
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="locusmith", description="Curvature loci of Monge-form 2-jets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("manifest")
        sp.set_defaults(func=func)
        return sp

    add("classify", cmd_classify, "locus invariants and orbit label")
    sp = add("locus", cmd_locus, "sample the curvature locus")
    sp.add_argument("--grid", default="72x36", help="NxM: azimuths x polar angles (or heights)")
    sp.add_argument("--height", type=float, default=3.0, help="cylinder / line height window")
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "obj"), default="csv")
    sp = add("section", cmd_section, "normal section along a tangent direction")
    sp.add_argument("--direction")
    sp.add_argument("--family-steps", type=int)
    sp.add_argument("--out")
    sp = add("project", cmd_project, "projection along a tangent direction")
    sp.add_argument("--direction")
    sp.add_argument("--out")
    sp = add("asymptotic", cmd_asymptotic, "asymptotic directions and binormals")
    sp.add_argument("--direction")
    sp.add_argument("--out")
    sp = add("verify", cmd_verify, "diagram and asymptotic consistency checks")
    sp.add_argument("--direction")
    sp.add_argument("--section-normal", default="0,1,0")
    sp.add_argument("--grid", default="36x17")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except _Usage as exc:
        sys.stderr.write(f"locusmith: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"locusmith: {exc}\n")
        return EXIT_IO
    except (LocusmithError, ValueError) as exc:
        sys.stderr.write(f"locusmith: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()

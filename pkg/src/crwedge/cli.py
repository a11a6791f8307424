"""Command-line front end: gallery queries, pipeline runs, verification suites.

Exit codes: 0 success, 1 check failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import continuation as co
from . import edgewedge as ew
from . import gallery
from . import harmonic as ha
from .geometry import Interval

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_CONFIG = 2


def _parse_complex(text: str) -> complex:
    """Accept '0.3', '0.3,0.1' or python literals like '0.3+0.1j'."""
    if "," in text:
        re_, im = text.split(",", 1)
        return complex(float(re_), float(im))
    return complex(text)


def _emit(doc, out):
    payload = json.dumps(doc, sort_keys=True, indent=2)
    if out:
        Path(out).write_text(payload + "\n")
    else:
        print(payload)


def cmd_gallery(args) -> int:
    if args.action == "list":
        doc = [
            {"name": s.name, "expected": s.expected, "description": s.description}
            for s in gallery.list_oracles()
        ]
        _emit(doc, args.out)
        return EXIT_OK
    try:
        orc = gallery.oracle(args.name)
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    z1 = _parse_complex(args.z1)
    z2 = _parse_complex(args.z2)
    om = orc.meta.omega
    if abs(z1.real) > om[0].hi + orc.meta.omega_margin or abs(z2.real) > om[1].hi + orc.meta.omega_margin:
        print("error: point outside the declared domain", file=sys.stderr)
        return EXIT_CONFIG
    val = complex(orc.eval(z1, z2))
    _emit(
        {
            "oracle": orc.name,
            "expected": orc.expected,
            "z1": [z1.real, z1.imag],
            "z2": [z2.real, z2.imag],
            "value": [val.real, val.imag],
        },
        args.out,
    )
    return EXIT_OK


def cmd_march(args) -> int:
    try:
        doc = json.loads(Path(args.config).read_text())
        job = co.job_from_json(doc, gallery.oracle)
    except (OSError, json.JSONDecodeError, co.ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        if job.mode == co.MODE_ONE_SIDED_UP:
            atlas = co.march(job)
        else:
            atlas = co.two_sided_fill(job)
    except (co.AtlasError, co.ScanFailure, co.ContainmentError) as exc:
        print(f"pipeline failure: {exc}", file=sys.stderr)
        return EXIT_CHECK
    atlas.dump(out_dir / "atlas.json")
    certs = [
        {"chart": c.chart_id, **c.cert.to_json()} for c in atlas.charts if c.cert
    ]
    (out_dir / "certificates.json").write_text(
        json.dumps(certs, sort_keys=True, indent=2) + "\n"
    )
    rows = ["chart        center                pass  nu_thr  radius    height"]
    for c in atlas.charts:
        ok = "-" if c.cert is None else ("yes" if c.cert.passed else "NO")
        thr = "-" if c.cert is None else str(c.cert.nu_threshold)
        rows.append(
            f"{c.chart_id:<12} {c.z2_center.real:+.4f}{c.z2_center.imag:+.4f}i "
            f"{ok:>5} {thr:>6}  {c.z2_radius:<8.4g} {c.strip_height:.3e}"
        )
    summary = "\n".join(rows)
    (out_dir / "summary.txt").write_text(summary + "\n")
    print(summary)
    failed = [c for c in atlas.charts if c.cert and not c.cert.passed]
    failures = atlas.diagnostics.get("failures", [])
    if failed or failures:
        print(f"failures: {failures}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def _suite_discs() -> list:
    checks = []
    for xo in np.linspace(-0.1, 0.1, 3):
        for lam in np.linspace(0.0, 0.15, 3):
            d = ew.attach_disc((xo, -xo), (lam, lam / 2 + 0.01), grid_size=1024)
            drift = max(
                abs(d.center[0] - (xo + 1j * lam)),
                abs(d.center[1] - (-xo + 1j * (lam / 2 + 0.01))),
            )
            checks.append(
                {"check": f"disc_center x={xo:.2f} lam={lam:.2f}",
                 "value": drift, "bound": 1e-8, "pass": bool(drift < 1e-8)}
            )
    d = ew.attach_disc((0.0, 0.0), (0.03, 0.05), grid_size=1024)
    ok = ew.boundary_in_union(d, 0.2)
    checks.append({"check": "boundary_in_union", "value": ok, "bound": True, "pass": ok})
    return checks


def _suite_cauchy() -> list:
    chi = ew.CutoffSpec(Interval(-0.5, 0.5), Interval(-1.5, 1.5), decay_order=2)
    checks = []
    for name, f in (("square", lambda z: z * z), ("pole", lambda z: 1.0 / (z + 2j))):
        r1 = ew.cauchy_formula_residual(f, chi, 0.0, 0.1, 2000)
        r2 = ew.cauchy_formula_residual(f, chi, 0.0, 0.1, 4000)
        checks.append({"check": f"residual_{name}", "value": r1, "bound": 1e-6,
                       "pass": bool(r1 < 1e-6)})
        checks.append({"check": f"refinement_{name}", "value": r2,
                       "bound": r1 * 1.0000001, "pass": bool(r2 <= r1)})
    return checks


def _suite_hartogs() -> list:
    from .geometry import HalfDisc as HD
    from .taylor import CoeffLogSequence

    checks = []
    # log|z1| family on the shrunken half-disc
    xs = np.linspace(-0.9, 0.9, 13)
    ys = np.concatenate([[0.0], np.linspace(0.1, 0.85, 7)])
    grid = (xs[:, None] + 1j * ys[None, :]).ravel()
    grid = grid[np.abs(grid) < 0.95]
    vals = np.tile(np.log(np.abs(grid)), (12, 1))
    seq = CoeffLogSequence(grid, vals, (1, 12))
    hyp = ha.HartogsHypotheses(l=0.0, L=1.0, alpha=0.05, eta=0.1)
    cert = ha.verify_hartogs(seq, hyp, HD(0.0, 1.0, "upper"))
    checks.append({"check": "log_abs_family", "value": cert.nu_threshold,
                   "bound": 1, "pass": bool(cert.passed and cert.nu_threshold == 1)})
    # constant-positive family must fail on the real-axis clause
    try:
        ha.verify_hartogs(
            CoeffLogSequence(grid, np.full((12, grid.size), 0.3), (1, 12)),
            hyp, HD(0.0, 1.0, "upper"),
        )
        checks.append({"check": "constant_rejected", "value": "no error",
                       "bound": "diameter violation", "pass": False})
    except ha.HypothesisViolation as exc:
        checks.append({"check": "constant_rejected", "value": exc.clause,
                       "bound": "diameter", "pass": exc.clause == "diameter"})
    return checks


def _suite_probes() -> list:
    rep1 = gallery.temperedness_probe(gallery.oracle("cordaro"))
    rep2 = gallery.radius_collapse_probe(
        gallery.oracle("flat"), 2, [(0.5, 0.0), (0.25, 0.0), (0.125, 0.0)]
    )
    return [
        {"check": "cordaro_not_tempered", "value": rep1["verdict"],
         "bound": "not_tempered", "pass": rep1["verdict"] == "not_tempered"},
        {"check": "flat_radius_collapse", "value": rep2["verdict"],
         "bound": "not_cr_extendible", "pass": rep2["verdict"] == "not_cr_extendible"},
    ]


SUITES = {
    "discs": _suite_discs,
    "cauchy": _suite_cauchy,
    "hartogs": _suite_hartogs,
    "probes": _suite_probes,
}


def cmd_verify(args) -> int:
    if args.suite == "kappa":
        k1 = ha.kappa_estimate(128)
        k2 = ha.kappa_estimate(256)
        rel = abs(k2.kappa - k1.kappa) / k1.kappa
        checks = [{"check": "kappa_stability", "value": rel, "bound": 0.02,
                   "pass": bool(rel < 0.02)}]
    else:
        checks = SUITES[args.suite]()
    doc = {"suite": args.suite, "checks": checks,
           "pass": all(c["pass"] for c in checks)}
    _emit(doc, args.out)
    return EXIT_OK if doc["pass"] else EXIT_CHECK


def cmd_report(args) -> int:
    try:
        atlas = co.ExtensionAtlas.load(args.atlas)
        spec = json.loads(args.slice)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        points = _slice_points(spec)
    except (KeyError, ValueError) as exc:
        print(f"config error: bad slice spec: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    lines = ["z1_re,z1_im,z2_re,z2_im,F_re,F_im,chart_id,tail_bound"]
    for z1, z2 in points:
        try:
            val, cid, tail = co.evaluate_extension(atlas, (z1, z2))
        except co.CoverageError as exc:
            print(f"coverage error: {exc}", file=sys.stderr)
            return EXIT_CHECK
        lines.append(
            f"{z1.real!r},{z1.imag!r},{z2.real!r},{z2.imag!r},"
            f"{val.real!r},{val.imag!r},{cid},{tail!r}"
        )
    payload = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(payload)
    else:
        print(payload, end="")
    return EXIT_OK


def _slice_points(spec: dict) -> list:
    """Slice spec: fixed coordinates plus up to two swept ranges.

    {"z1": [re, im], "z2_im": 0.2, "vary": {"z2_re": [lo, hi, n]}} sweeps
    z2_re with everything else held fixed; two vary entries give a grid.
    """
    fixed = {k: v for k, v in spec.items() if k != "vary"}
    vary = spec.get("vary", {})
    axes = []
    for key, (lo, hi, n) in sorted(vary.items()):
        axes.append((key, np.linspace(float(lo), float(hi), int(n))))
    if not axes:
        axes = [("_dummy", np.array([0.0]))]

    def build(assign):
        parts = {}
        for coord in ("z1", "z2"):
            if coord in fixed:
                parts[coord] = complex(fixed[coord][0], fixed[coord][1])
            else:
                re_ = assign.get(f"{coord}_re", fixed.get(f"{coord}_re", 0.0))
                im = assign.get(f"{coord}_im", fixed.get(f"{coord}_im", 0.0))
                parts[coord] = complex(float(re_), float(im))
        return parts["z1"], parts["z2"]

    points = []
    if len(axes) == 1:
        for v in axes[0][1]:
            points.append(build({axes[0][0]: v}))
    else:
        for v in axes[0][1]:
            for w in axes[1][1]:
                points.append(build({axes[0][0]: v, axes[1][0]: w}))
    return points


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="crwedge",
        description="Numerical holomorphic extension of separately analytic "
        "functions to wedges in two complex variables.",
    )
    parser.add_argument("--workers", type=int, default=1,
                        help="worker count hint (vectorized internally)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for the Monte Carlo cross-checks")
    parser.add_argument("--tolerance-scale", type=float, default=1.0,
                        help="multiply all check tolerances")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gallery", help="list oracles or evaluate one")
    p.add_argument("action", choices=["list", "eval"])
    p.add_argument("name", nargs="?", default="")
    p.add_argument("z1", nargs="?", default="0")
    p.add_argument("z2", nargs="?", default="0")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gallery)

    p = sub.add_parser("march", help="run a continuation job from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output directory")
    p.set_defaults(fn=cmd_march)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["kappa"])
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("report", help="sample an atlas along a slice to CSV")
    p.add_argument("--atlas", required=True)
    p.add_argument("--slice", required=True, help="JSON slice spec")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_report)

    args = parser.parse_args(argv)
    if args.command == "gallery" and args.action == "eval" and not args.name:
        parser.error("gallery eval needs NAME Z1 Z2")
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

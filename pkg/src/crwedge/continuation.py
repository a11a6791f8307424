"""End-to-end holomorphic continuation pipelines in two complex variables.

Starting from a function known only through its separate one-variable
extensions, the pipeline

  (a) sweeps for slabs on which the sampled per-slice sups stay bounded,
  (b) seeds values at bi-complex points through attached analytic discs
      (the Cauchy mean over a disc boundary that stays inside the declared
      separate domains),
  (c) extracts z2-coefficient fields over a z1-grid,
  (d) certifies uniform coefficient bounds with the half-disc/strip verifier,
      which fixes the z1-strip height on which each z2-chart converges,
  (e) marches the expansion center sideways, chart by chart, shrinking the
      certified strip height per step, until the centers sweep past |Re z2|=1,
  (f) fits a truncated cone to the union of chart domains of a height
      schedule of atlases.

Numerical conditioning dictates how the coefficient rows are built, and the
route is recorded per chart: the real-axis row is always re-extracted from
the separate oracle on the largest circle the declared per-slice domain
allows (re-expanding a truncated series on the tiny inscribed circle of the
previous chart loses a digit per step); rows at the certified strip heights
use a short vertical Taylor step from the real-axis field whenever the
height is small enough for that to be accurate at working precision, and
attached discs otherwise.  Trailing quadrature modes below the noise floor
are dropped so root tests and certificates only ever see resolved
coefficients.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import taylor
from .edgewedge import conjugate_samples, default_bump
from .geometry import Cone, Disc, HalfDisc, Interval, Strip, Wedge
from .geometry import UPPER
from .geometry import from_json as geo_from_json
from .geometry import to_json as geo_to_json
from .harmonic import (
    HartogsCertificate,
    HartogsHypotheses,
    kappa_estimate_strip,
    verify_hartogs,
)

MODE_TWO_SIDED = "two_sided"
MODE_ONE_SIDED_UP = "one_sided_up"

DEFAULT_GRIDS = {
    "x1_points": 161,
    "rows_per_chart": 5,
    "quad_points": 512,
    "disc_grid": 512,
    "probe_points": 21,
}
DEFAULT_TOLERANCES = {
    "cert_tol": 1e-6,
    "chart_agreement": 1e-5,
    "noise_floor": 1e-13,
    "taylor_route_tol": 1e-8,
    "shrink": 0.95,
}


class ContainmentError(RuntimeError):
    """A disc boundary or quadrature circle leaves the declared oracle domains."""

    def __init__(self, message, theta=None, point=None):
        super().__init__(message)
        self.theta = theta
        self.point = point


class ScanFailure(RuntimeError):
    """No slab found at the largest bound of the schedule."""

    def __init__(self, message, sup_field=None):
        super().__init__(message)
        self.sup_field = sup_field


class AtlasError(RuntimeError):
    """Atlas-level failure; carries the certificate or the worst overlap sample."""

    def __init__(self, message, certificate=None, overlap=None, diagnostics=None):
        super().__init__(message)
        self.certificate = certificate
        self.overlap = overlap
        self.diagnostics = diagnostics or {}


class CoverageError(LookupError):
    """Query point outside every chart."""

    def __init__(self, message, nearest=None):
        super().__init__(message)
        self.nearest = nearest


class ConfigError(ValueError):
    """Malformed job document."""


# -- oracle wrapper -----------------------------------------------------------


@dataclass(frozen=True)
class OracleMeta:
    """Declared separate-extension domains of an oracle.

    eps1 bounds |Im z1| of the per-x2 slice extension (float or vectorized
    callable of x2); z2_domain(x1) is the per-x1 slice domain (Disc or upper
    HalfDisc).  singular1/singular2 are vectorized callables returning the
    known singular loci of the z1-slice (as a function of z2) and the
    z2-slice (as a function of real x1); singular_margin is the exclusion
    distance around the latter.  omega_margin says how far beyond omega the
    slice extensions persist in the real directions; z2_radius_min is a
    cheap lower bound for the declared z2 radius used in hot-path checks.
    """

    omega: tuple
    eps1: object
    z2_domain: object
    continuity: bool = True
    singular1: object = None
    singular2: object = None
    singular_margin: float = 0.0
    omega_margin: float = 0.25
    z2_radius_min: float | None = None

    def eps1_at(self, x2):
        x2 = np.asarray(x2, dtype=float)
        return self.eps1(x2) if callable(self.eps1) else np.full(x2.shape, float(self.eps1))

    def z2_params(self, x1: float):
        dom = self.z2_domain(float(x1))
        if isinstance(dom, Disc):
            return complex(dom.center), dom.radius, "disc"
        if isinstance(dom, HalfDisc):
            return complex(dom.center), dom.radius, "half_disc_" + dom.side
        raise ConfigError(f"z2_domain must be Disc or HalfDisc, got {type(dom).__name__}")


@dataclass(frozen=True)
class SeparateOracle:
    """A function of (z1, z2) evaluable wherever the metadata permits."""

    name: str
    eval: object
    meta: OracleMeta
    expected: str = "unknown"

    def z2_radius_at(self, x1_arr) -> np.ndarray:
        x1_arr = np.atleast_1d(np.asarray(x1_arr, dtype=float))
        return np.array([self.meta.z2_params(x)[1] for x in x1_arr])

    def singular2_dist(self, x1_arr, z2_arr) -> np.ndarray:
        """Distance from z2 points to the declared z2-singularities at real x1."""
        x1a = np.asarray(x1_arr, dtype=float)
        z2a = np.asarray(z2_arr, dtype=complex)
        if self.meta.singular2 is None:
            return np.full(np.broadcast(x1a, z2a).shape, np.inf)
        sing = np.asarray(self.meta.singular2(x1a))  # (n_sing,) + x1a.shape
        pad = z2a.ndim - x1a.ndim
        if pad > 0:
            sing = sing.reshape(sing.shape[:1] + x1a.shape + (1,) * pad)
        return np.min(np.abs(z2a[None, ...] - sing), axis=0)

    def singular1_segment_dist(self, z2_arr, seg: Interval) -> float:
        """Distance from the z1-singularities over z2_arr to the real segment."""
        if self.meta.singular1 is None:
            return float("inf")
        sing = np.asarray(self.meta.singular1(np.asarray(z2_arr, dtype=complex))).ravel()
        dx = np.maximum(
            np.maximum(seg.lo - np.real(sing), np.real(sing) - seg.hi), 0.0
        )
        return float(np.min(np.hypot(dx, np.imag(sing))))


@dataclass(frozen=True)
class BoundedSlab:
    axis: int
    interval: Interval
    bound: float
    extension_height: float

    def to_json(self) -> dict:
        return {
            "axis": self.axis,
            "interval": [self.interval.lo, self.interval.hi],
            "bound": self.bound,
            "extension_height": self.extension_height,
        }


@dataclass(frozen=True)
class ContinuationJob:
    oracle: SeparateOracle
    mode: str
    delta: float
    sigma: float
    alpha: float
    n_coeffs: int = 64
    grids: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in (MODE_TWO_SIDED, MODE_ONE_SIDED_UP):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if not 0 < self.alpha <= 0.5:
            raise ConfigError(f"alpha must lie in (0, 0.5], got {self.alpha}")
        if not self.sigma <= self.delta / 8:
            raise ConfigError(
                f"need sigma <= delta/8, got sigma={self.sigma}, delta={self.delta}"
            )
        g = dict(DEFAULT_GRIDS)
        g.update(self.grids)
        t = dict(DEFAULT_TOLERANCES)
        t.update(self.tolerances)
        object.__setattr__(self, "grids", g)
        object.__setattr__(self, "tolerances", t)

    def echo(self) -> dict:
        return {
            "oracle": self.oracle.name,
            "mode": self.mode,
            "delta": self.delta,
            "sigma": self.sigma,
            "alpha": self.alpha,
            "n_coeffs": self.n_coeffs,
            "grids": {k: self.grids[k] for k in sorted(self.grids)},
            "tolerances": {k: self.tolerances[k] for k in sorted(self.tolerances)},
        }


JOB_KEYS = {"oracle", "mode", "delta", "sigma", "alpha", "n_coeffs", "grids", "tolerances"}


def job_from_json(doc: dict, oracle_lookup) -> ContinuationJob:
    """Validate a job document (unknown fields rejected) and resolve the oracle."""
    if not isinstance(doc, dict):
        raise ConfigError("job document must be an object")
    unknown = set(doc) - JOB_KEYS
    if unknown:
        raise ConfigError(f"unknown job fields: {sorted(unknown)}")
    missing = {"oracle", "mode", "delta", "sigma", "alpha"} - set(doc)
    if missing:
        raise ConfigError(f"missing job fields: {sorted(missing)}")
    for k in ("delta", "sigma", "alpha"):
        if not isinstance(doc[k], (int, float)) or isinstance(doc[k], bool):
            raise ConfigError(f"field {k!r} must be a number")
    for k in ("grids", "tolerances"):
        if k in doc and not isinstance(doc[k], dict):
            raise ConfigError(f"field {k!r} must be an object")
    if doc["alpha"] <= 0:
        raise ConfigError("alpha must be positive")
    try:
        orc = oracle_lookup(doc["oracle"])
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc
    return ContinuationJob(
        oracle=orc,
        mode=doc["mode"],
        delta=float(doc["delta"]),
        sigma=float(doc["sigma"]),
        alpha=float(doc["alpha"]),
        n_coeffs=int(doc.get("n_coeffs", 64)),
        grids=doc.get("grids", {}),
        tolerances=doc.get("tolerances", {}),
    )


# -- slab scan ----------------------------------------------------------------


def _runs(xs: np.ndarray, ok: np.ndarray):
    out = []
    start = None
    for i, flag in enumerate(ok):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            out.append((start, i - 1))
            start = None
    if start is not None:
        out.append((start, len(ok) - 1))
    return [(float(xs[a]), float(xs[b])) for a, b in out if b > a]


def bounded_slab_scan(oracle: SeparateOracle, axis: int, l_schedule=None,
                      probe_grid: int = 21) -> list:
    """Maximal grid sub-intervals on which the sampled per-slice sup stays <= l.

    axis=1 sweeps x1 and bounds |f| over the declared z2 slice domain; axis=2
    sweeps x2 and requires the declared z1 height to reach 1/l with |f| <= l
    on the strip sample.  Returns one slab per (l, run); fails if even the
    largest l of the schedule admits no slab.
    """
    meta = oracle.meta
    om = meta.omega[axis - 1]
    xs = np.linspace(om.lo, om.hi, probe_grid + 2)[1:-1]
    sups = np.full(xs.size, np.inf)
    heights = np.zeros(xs.size)

    for i, x in enumerate(xs):
        if axis == 1:
            c2, r2, kind = meta.z2_params(x)
            if r2 <= 1e-9:
                continue
            th = np.linspace(0.0, 2.0 * np.pi, 48, endpoint=False)
            rad = np.array([0.35, 0.7, 0.95])
            pts = (c2 + rad[:, None] * r2 * np.exp(1j * th[None, :])).ravel()
            if kind.endswith("upper"):
                pts = pts[np.imag(pts) >= 0]
            pts = pts[oracle.singular2_dist(x, pts) > meta.singular_margin]
            if pts.size == 0:
                continue
            vals = np.abs(np.asarray(oracle.eval(np.full(pts.shape, x), pts), dtype=complex))
            sups[i] = float(np.max(vals))
            heights[i] = r2
        else:
            h1 = float(np.atleast_1d(meta.eps1_at(x))[0])
            if h1 <= 1e-9:
                continue
            xs1 = np.linspace(meta.omega[0].lo, meta.omega[0].hi, 17)
            ys1 = np.linspace(-0.9 * h1, 0.9 * h1, 7)
            z1 = (xs1[:, None] + 1j * ys1[None, :]).ravel()
            vals = np.abs(np.asarray(oracle.eval(z1, np.full(z1.shape, x)), dtype=complex))
            sups[i] = float(np.max(vals))
            heights[i] = h1

    finite = sups[np.isfinite(sups)]
    if l_schedule is None:
        base = max(float(np.min(finite)) if finite.size else 1.0, 1.0)
        l_schedule = [base * 2.0**m for m in range(8)]
    slabs = []
    for l in l_schedule:
        ok = sups <= l
        if axis == 2:
            ok &= heights >= 1.0 / max(l, 1e-9)
        for lo, hi in _runs(xs, ok):
            sel = (xs >= lo) & (xs <= hi)
            ext = float(np.min(heights[sel]))
            if axis == 2:
                ext = min(ext, 1.0 / max(l, 1e-9))
            slabs.append(BoundedSlab(axis, Interval(lo, hi), float(l), ext))
    largest = max(l_schedule)
    if not any(s.bound == largest for s in slabs):
        raise ScanFailure(
            f"no axis-{axis} slab at the largest bound {largest:.4g}",
            sup_field=list(zip(xs.tolist(), sups.tolist())),
        )
    return slabs


def widest_slab(slabs, axis: int) -> BoundedSlab:
    cands = [s for s in slabs if s.axis == axis]
    if not cands:
        raise ScanFailure(f"no slabs for axis {axis}")
    return max(cands, key=lambda s: (s.interval.length, -s.bound))


# -- disc-based seed evaluator --------------------------------------------------


class SeedEvaluator:
    """F(z1, z2) at bi-complex points through attached analytic discs.

    Each target x + i lambda gets the disc with boundary
    (x - T0 y_lambda) + i y_lambda; the value is the boundary mean of f.
    Boundary nodes pair a complex coordinate with a real one, so only the
    declared separate extensions of f are ever evaluated.  Signed lambda
    components mirror the construction into the matching quadrant.
    """

    def __init__(self, oracle: SeparateOracle, grid_size: int = 512):
        self.oracle = oracle
        self.bumps = (default_bump(1, grid_size), default_bump(2, grid_size))
        self.y = np.stack([b.samples for b in self.bumps])  # (2, M)
        self.ty = np.stack([conjugate_samples(b) for b in self.bumps])
        self.m = grid_size
        self.peak_y = float(np.max(self.y))
        self.peak_t = float(np.max(np.abs(self.ty)))
        self.peak_mod = float(np.max(np.abs(-self.ty + 1j * self.y)))
        r = oracle.meta.z2_radius_min
        self._r2_floor = float(r) if r is not None else None

    def _boundaries(self, targets: np.ndarray):
        x = np.real(targets)
        lam = np.imag(targets)
        b1 = x[:, 0, None] - lam[:, 0, None] * self.ty[0][None, :] \
            + 1j * lam[:, 0, None] * self.y[0][None, :]
        b2 = x[:, 1, None] - lam[:, 1, None] * self.ty[1][None, :] \
            + 1j * lam[:, 1, None] * self.y[1][None, :]
        return b1, b2

    def check(self, targets: np.ndarray):
        """Raise ContainmentError if any disc boundary leaves the declared domains."""
        meta = self.oracle.meta
        b1, b2 = self._boundaries(targets)
        x2r = np.real(b2)
        x1r = np.real(b1)

        eps = meta.eps1_at(x2r.ravel()).reshape(x2r.shape)
        bad = np.abs(np.imag(b1)) >= eps
        if np.any(bad):
            b, m = np.argwhere(bad)[0]
            raise ContainmentError(
                f"disc node theta_{m} has |Im z1| = {abs(b1[b, m].imag):.3g} "
                f">= declared eps1 = {eps[b, m]:.3g}",
                theta=2 * np.pi * m / self.m,
                point=(complex(b1[b, m]), complex(b2[b, m])),
            )
        lo0 = meta.omega[0].lo - meta.omega_margin
        hi0 = meta.omega[0].hi + meta.omega_margin
        lo1 = meta.omega[1].lo - meta.omega_margin
        hi1 = meta.omega[1].hi + meta.omega_margin
        if np.any((x1r < lo0) | (x1r > hi0)) or np.any((x2r < lo1) | (x2r > hi1)):
            raise ContainmentError("disc boundary leaves the widened edge rectangle")

        c2, r2_first, kind = meta.z2_params(float(np.median(x1r)))
        r2 = self._r2_floor if self._r2_floor is not None else r2_first
        off = np.abs(b2 - c2)
        bad2 = off >= r2 * 0.995
        if kind.endswith("upper"):
            bad2 |= np.imag(b2) < -1e-12
        if np.any(bad2):
            b, m = np.argwhere(bad2)[0]
            raise ContainmentError(
                f"disc node theta_{m} has z2 = {b2[b, m]:.4g} outside the "
                f"declared slice domain (radius {r2:.3g})",
                theta=2 * np.pi * m / self.m,
                point=(complex(b1[b, m]), complex(b2[b, m])),
            )
        if meta.singular2 is not None:
            dist = self.oracle.singular2_dist(x1r.ravel(), b2.ravel()).reshape(x2r.shape)
            bad3 = dist <= meta.singular_margin
            if np.any(bad3):
                b, m = np.argwhere(bad3)[0]
                raise ContainmentError(
                    f"disc node theta_{m} within {dist[b, m]:.3g} of a declared "
                    f"singular point (margin {meta.singular_margin})",
                    theta=2 * np.pi * m / self.m,
                    point=(complex(b1[b, m]), complex(b2[b, m])),
                )

    def values(self, targets, check: bool = True, chunk: int = 2048) -> np.ndarray:
        """F at an array of targets (..., 2), via the disc boundary means."""
        targets = np.asarray(targets, dtype=complex)
        flat = targets.reshape(-1, 2)
        out = np.empty(flat.shape[0], dtype=complex)
        for a in range(0, flat.shape[0], chunk):
            part = flat[a : a + chunk]
            if check:
                self.check(part)
            b1, b2 = self._boundaries(part)
            out[a : a + chunk] = np.mean(
                np.asarray(self.oracle.eval(b1, b2), dtype=complex), axis=1
            )
        return out.reshape(targets.shape[:-1])


def seed_quadrant(oracle: SeparateOracle, slabs, delta: float, disc_params=None) -> dict:
    """Seed field F(x_o + i lambda) on a quadrant grid of disc centers.

    disc_params: n_x (edge grid per axis), n_lam (lambda grid per axis),
    grid_size (disc boundary resolution), signs (+-1, +-1 quadrant selector).
    """
    p = {"n_x": 5, "n_lam": 3, "grid_size": 512, "signs": (1, 1)}
    p.update(disc_params or {})
    slab = widest_slab(slabs, 1)
    ev = SeedEvaluator(oracle, p["grid_size"])
    margin = delta * (ev.peak_t + 1.0)
    x1 = np.linspace(slab.interval.lo + margin, slab.interval.hi - margin, p["n_x"])
    om2 = oracle.meta.omega[1]
    x2 = np.linspace(0.5 * om2.lo, 0.5 * om2.hi, p["n_x"])
    lam = np.linspace(0.0, delta, p["n_lam"] + 1)[:-1]
    s1, s2 = p["signs"]
    targets = np.empty((p["n_x"], p["n_x"], p["n_lam"], p["n_lam"], 2), dtype=complex)
    for i, a in enumerate(x1):
        for j, b in enumerate(x2):
            for k, l1 in enumerate(lam):
                for m, l2 in enumerate(lam):
                    targets[i, j, k, m] = (a + 1j * s1 * l1, b + 1j * s2 * l2)
    vals = ev.values(targets)
    return {
        "x1": x1,
        "x2": x2,
        "lam1": s1 * lam,
        "lam2": s2 * lam,
        "values": vals,
        "delta": delta,
        "slab": slab,
    }


# -- local polynomial derivatives along the x1-grid ---------------------------


def _local_derivatives(f: np.ndarray, dx: float, degree: int = 8, n_der: int = 4):
    """Derivatives 0..n_der of rows of f along a uniform grid (last axis).

    Least-squares degree-`degree` fits on sliding windows of degree+1 points;
    windows clamp at the ends.  Returns shape (n_der+1,) + f.shape.
    """
    nx = f.shape[-1]
    w = degree + 1
    if nx < w:
        raise ValueError(f"grid too short for degree {degree} windows")
    half = degree // 2
    offs = (np.arange(w) - half) * dx
    v = np.vander(offs, degree + 1, increasing=True)
    pinv = np.linalg.pinv(v)  # (degree+1, w)
    fact = np.array([math.factorial(d) for d in range(n_der + 1)])

    flat = f.reshape(-1, nx)
    out = np.empty((n_der + 1, flat.shape[0], nx), dtype=complex)
    windows = np.lib.stride_tricks.sliding_window_view(flat, w, axis=1)
    core = np.einsum("dw,bxw->dbx", pinv[: n_der + 1], windows)
    out[:, :, half : nx - half] = core * fact[:, None, None]
    for i in list(range(half)) + list(range(nx - half, nx)):
        j = 0 if i < half else nx - w
        shift = (i - (j + half)) * dx
        coef = np.einsum("dw,bw->bd", pinv, flat[:, j : j + w])
        for d in range(n_der + 1):
            der = np.zeros(flat.shape[0], dtype=complex)
            for m in range(d, degree + 1):
                der += coef[:, m] * (math.factorial(m) / math.factorial(m - d)) * shift ** (m - d)
            out[d, :, i] = der
    return out.reshape((n_der + 1,) + f.shape)


# -- charts and atlases --------------------------------------------------------


@dataclass
class Chart:
    chart_id: str
    z2_center: complex
    z2_radius: float
    strip_height: float
    x1_extent: Interval
    x1_grid: np.ndarray
    rows: np.ndarray  # y1 levels, ascending
    series: np.ndarray  # (n_rows, n_x, n_modes) complex
    quad_radius: float
    row_routes: tuple
    cert: HartogsCertificate | None = None

    def contains(self, z1: complex, z2: complex) -> bool:
        return (
            abs(z1.imag) <= self.strip_height
            and self.x1_extent.lo <= z1.real <= self.x1_extent.hi
            and abs(z2 - self.z2_center) < self.z2_radius
        )

    def eval(self, z1: complex, z2: complex):
        """Bilinear interpolation in (Re z1, Im z1) of the per-node series values."""
        x, y = z1.real, z1.imag
        gx, gy = self.x1_grid, self.rows
        i = int(np.clip(np.searchsorted(gx, x) - 1, 0, gx.size - 2))
        j = int(np.clip(np.searchsorted(gy, y) - 1, 0, gy.size - 2))
        tx = (x - gx[i]) / (gx[i + 1] - gx[i])
        uy = (y - gy[j]) / (gy[j + 1] - gy[j])
        d = z2 - self.z2_center
        corners = []
        tails = []
        for jj in (j, j + 1):
            for ii in (i, i + 1):
                c = self.series[jj, ii]
                corners.append(complex(np.polyval(c[::-1], d)))
                tails.append(_chart_tail(c, abs(d), self.quad_radius))
        val = (
            (1 - tx) * (1 - uy) * corners[0]
            + tx * (1 - uy) * corners[1]
            + (1 - tx) * uy * corners[2]
            + tx * uy * corners[3]
        )
        return val, float(max(tails))

    def to_json(self) -> dict:
        return {
            "chart_id": self.chart_id,
            "z2_center": [self.z2_center.real, self.z2_center.imag],
            "z2_radius": self.z2_radius,
            "strip_height": self.strip_height,
            "x1_extent": [self.x1_extent.lo, self.x1_extent.hi],
            "x1_grid": [float(v) for v in self.x1_grid],
            "rows": [float(v) for v in self.rows],
            "series": [
                [[[c.real, c.imag] for c in node] for node in row] for row in self.series
            ],
            "quad_radius": self.quad_radius,
            "row_routes": list(self.row_routes),
            "cert": self.cert.to_json() if self.cert else None,
        }

    @staticmethod
    def from_json(doc: dict) -> "Chart":
        series = np.array(
            [[[complex(a, b) for a, b in node] for node in row] for row in doc["series"]]
        )
        cert = None
        if doc.get("cert"):
            c = doc["cert"]
            cert = HartogsCertificate(
                nu_threshold=c["nu_threshold"],
                kappa=c["kappa"],
                max_violation=c["max_violation"],
                passed=c["pass"],
                l=c["l"],
                L=c["L"],
                alpha=c["alpha"],
                eta=c["eta"],
                nu_range=tuple(c["nu_range"]),
                grid_size=c["grid"]["size"],
                domain=c["grid"]["domain"],
            )
        return Chart(
            chart_id=doc["chart_id"],
            z2_center=complex(doc["z2_center"][0], doc["z2_center"][1]),
            z2_radius=float(doc["z2_radius"]),
            strip_height=float(doc["strip_height"]),
            x1_extent=Interval(*doc["x1_extent"]),
            x1_grid=np.asarray(doc["x1_grid"], dtype=float),
            rows=np.asarray(doc["rows"], dtype=float),
            series=series,
            quad_radius=float(doc["quad_radius"]),
            row_routes=tuple(doc["row_routes"]),
            cert=cert,
        )


def _chart_tail(coeffs: np.ndarray, dist: float, r_q: float) -> float:
    n = coeffs.size - 1
    if n < 1 or dist == 0.0:
        return 0.0
    c = float(np.max(np.abs(coeffs) * r_q ** np.arange(n + 1)))
    q = dist / r_q
    if q >= 1.0:
        return c * q ** (n + 1) * 10.0
    return c * q ** (n + 1) / (1.0 - q)


@dataclass
class ExtensionAtlas:
    charts: list
    job_echo: dict
    overlaps: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    wedge: Wedge | None = None

    def to_json(self) -> dict:
        return {
            "job": self.job_echo,
            "charts": [c.to_json() for c in self.charts],
            "overlaps": self.overlaps,
            "diagnostics": self.diagnostics,
            "wedge": geo_to_json(self.wedge) if self.wedge else None,
        }

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(doc: dict) -> "ExtensionAtlas":
        return ExtensionAtlas(
            charts=[Chart.from_json(c) for c in doc["charts"]],
            job_echo=doc["job"],
            overlaps=doc.get("overlaps", []),
            diagnostics=doc.get("diagnostics", {}),
            wedge=geo_from_json(doc["wedge"]) if doc.get("wedge") else None,
        )

    @staticmethod
    def load(path) -> "ExtensionAtlas":
        with open(path) as fh:
            return ExtensionAtlas.from_json(json.load(fh))


def evaluate_extension(atlas: ExtensionAtlas, z) -> tuple:
    """(value, chart_id, tail_bound) at z = (z1, z2), nearest containing chart."""
    z1, z2 = complex(z[0]), complex(z[1])
    best = None
    for c in atlas.charts:
        if c.contains(z1, z2):
            d = abs(z2 - c.z2_center)
            if best is None or d < best[0]:
                best = (d, c)
    if best is None:
        near = min(atlas.charts, key=lambda c: abs(z2 - c.z2_center)) if atlas.charts else None
        raise CoverageError(
            f"point ({z1:.4g}, {z2:.4g}) outside every chart",
            nearest=near.chart_id if near else None,
        )
    val, tail = best[1].eval(z1, z2)
    return val, best[1].chart_id, tail


def evaluate_union(atlases, z) -> tuple:
    last = None
    for atlas in atlases:
        try:
            return evaluate_extension(atlas, z)
        except CoverageError as exc:
            last = exc
    raise last if last else CoverageError("no atlases given")


# -- coefficient row construction ----------------------------------------------


def _fresh_radius(oracle: SeparateOracle, c2: complex, x_grid: np.ndarray,
                  want: float) -> float:
    """Largest safe quadrature radius around c2 for real-slice extraction."""
    meta = oracle.meta
    r2 = oracle.z2_radius_at(x_grid[:: max(1, x_grid.size // 16)])
    cen, _, kind = meta.z2_params(float(x_grid[x_grid.size // 2]))
    room = [float(np.min(r2)) * 0.98 - abs(c2 - cen)]
    if kind.endswith("upper"):
        room.append(c2.imag * 0.95)
    if meta.singular2 is not None:
        dist = oracle.singular2_dist(x_grid, np.full(x_grid.shape, c2))
        room.append(float(np.min(dist)) - meta.singular_margin * 1.05)
    return float(min(want, min(room)))


def _extract_real_row(oracle, c2: complex, x_grid: np.ndarray, r_q: float,
                      n_coeffs: int, quad_points: int, noise_floor: float):
    """Per-slice circle quadrature around c2 at every real grid point.

    Returns coefficient fields (n_x, keep+1) with trailing modes below the
    quadrature noise floor dropped grid-wide.
    """
    m = max(quad_points, 4 * (n_coeffs + 1))
    theta = 2.0 * np.pi * np.arange(m) / m
    nodes = c2 + r_q * np.exp(1j * theta)
    vals = np.asarray(oracle.eval(x_grid[:, None], nodes[None, :]), dtype=complex)
    if not np.all(np.isfinite(vals)):
        bad = np.argwhere(~np.isfinite(vals))[0]
        raise taylor.ExtractionError(
            f"oracle non-finite at (x1={x_grid[bad[0]]}, z2={nodes[bad[1]]})",
            point=(x_grid[bad[0]], nodes[bad[1]]),
        )
    modes = np.fft.fft(vals, axis=1)[:, : n_coeffs + 1] / m
    keep = _resolved_modes(modes, float(np.max(np.abs(vals))), noise_floor)
    return modes[:, : keep + 1] * r_q ** -np.arange(keep + 1)[None, :]


def _resolved_modes(modes: np.ndarray, scale: float, noise_floor: float) -> int:
    resolved = np.abs(modes) >= noise_floor * max(scale, 1e-300)
    keep = 0
    for j in range(modes.shape[0]):
        nz = np.nonzero(resolved[j])[0]
        keep = max(keep, int(nz[-1]) if nz.size else 0)
    return min(keep, modes.shape[1] - 1)


def _taylor_rows(real_coeffs: np.ndarray, dx: float, heights, order: int = 4):
    """Coefficient fields at z1 = x + i y by vertical Taylor from the real row."""
    der = _local_derivatives(real_coeffs.T, dx, degree=8, n_der=order)
    rows = []
    for y in heights:
        acc = np.zeros_like(real_coeffs.T)
        f = 1.0
        for p in range(order + 1):
            if p:
                f *= p
            acc += der[p] * (1j * y) ** p / f
        rows.append(acc.T)
    return rows


def _disc_rows(ev: SeedEvaluator, c2: complex, x_grid: np.ndarray, heights,
               r_q: float, n_coeffs: int, noise_floor: float):
    """Coefficient fields at complex z1 rows through disc-based circle quadrature."""
    m = max(4 * (n_coeffs + 1), 64)
    theta = 2.0 * np.pi * np.arange(m) / m
    nodes = c2 + r_q * np.exp(1j * theta)
    rows = []
    for y in heights:
        targets = np.empty((x_grid.size, m, 2), dtype=complex)
        targets[:, :, 0] = (x_grid + 1j * y)[:, None]
        targets[:, :, 1] = nodes[None, :]
        vals = ev.values(targets)
        modes = np.fft.fft(vals, axis=1)[:, : n_coeffs + 1] / m
        keep = _resolved_modes(modes, float(np.max(np.abs(vals))), noise_floor)
        rows.append(modes[:, : keep + 1] * r_q ** -np.arange(keep + 1)[None, :])
    return rows


def _row_levels(height: float, n_rows: int) -> list:
    """Symmetric row heights including 0, spanning +-0.9 height, ascending."""
    k = n_rows // 2
    pos = [0.9 * height * (i + 1) / k for i in range(k)]
    return [-p for p in reversed(pos)] + [0.0] + pos


def _pad_rows(rows):
    width = max(r.shape[1] for r in rows)
    out = []
    for r in rows:
        if r.shape[1] < width:
            r = np.pad(r, ((0, 0), (0, width - r.shape[1])))
        out.append(r)
    return out


def _phi_from_rows(x_grid, heights, row_coeffs, nu_range, shift: float):
    """CoeffLogSequence of (1/nu) log|a_nu| + shift over the stacked row grid."""
    nu_min, nu_max = nu_range
    grid = np.concatenate([x_grid + 1j * y for y in heights])
    vals = np.full((nu_max - nu_min + 1, grid.size), taylor.NEG_INF)
    for r, coeffs in enumerate(row_coeffs):
        for i, nu in enumerate(range(nu_min, nu_max + 1)):
            if nu < coeffs.shape[1]:
                with np.errstate(divide="ignore"):
                    col = np.log(np.abs(coeffs[:, nu])) / nu + shift
                vals[i, r * x_grid.size : (r + 1) * x_grid.size] = col
    return taylor.CoeffLogSequence(grid, vals, (nu_min, nu_max))


def _disc_route_radius(ev: SeedEvaluator, c2: complex, x_grid, lam1: float,
                       want: float) -> float | None:
    """Largest quadrature radius (from a fixed ladder) with feasible disc probes."""
    xs = (float(x_grid[0]), float(x_grid[-1]))
    for frac in (1.0, 0.7, 0.5, 0.35, 0.25, 0.18, 0.12, 0.08, 0.05):
        r = want * frac
        if r < 1e-9:
            return None
        probes = []
        for x in xs:
            for node in (c2 + r, c2 - r, c2 + 1j * r, c2 - 1j * r):
                for s in (+1.0, -1.0):
                    probes.append((x + 1j * s * lam1, node))
        try:
            ev.check(np.asarray(probes, dtype=complex))
            return r
        except ContainmentError:
            continue
    return None


def _build_chart(oracle, ev, job, chart_id, c2, radius, x_grid, height_req,
                 cert_ctx=None) -> Chart:
    """One z2-chart: fresh real row plus Taylor- or disc-route rows off axis.

    The achieved strip height can be smaller than requested when only the
    vertical-Taylor route is available; it is recorded on the chart.
    cert_ctx = (l, shift, kappa, eta_frac) adds the per-chart certificate.
    """
    g, tol = job.grids, job.tolerances
    dx = float(x_grid[1] - x_grid[0])
    floor = tol["noise_floor"]

    r_q = _fresh_radius(oracle, c2, x_grid, want=1.2 * radius)
    if r_q <= max(1e-9, 0.05 * radius):
        raise ContainmentError(
            f"chart {chart_id}: no admissible quadrature circle around {c2:.4g} "
            f"(radius budget {r_q:.3g})"
        )
    real = _extract_real_row(oracle, c2, x_grid, r_q, job.n_coeffs,
                             g["quad_points"], floor)

    # Taylor-route validity height: the vertical step must stay well inside
    # the z1-analyticity radius of the coefficient fields over the circle.
    seg = Interval(float(x_grid[0]), float(x_grid[-1]))
    th = np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False)
    r1 = oracle.singular1_segment_dist(c2 + r_q * np.exp(1j * th), seg)
    eps_min = float(np.min(oracle.meta.eps1_at(
        np.linspace(-abs(c2.real) - r_q, abs(c2.real) + r_q, 33))))
    r1 = min(r1, eps_min) if eps_min > 0 else r1
    taylor_cap = 0.9 * r1 * tol["taylor_route_tol"] ** 0.2 if np.isfinite(r1) else height_req

    if height_req <= taylor_cap:
        route, height = "taylor", height_req
    else:
        lam1 = 0.9 * height_req
        r_off = _disc_route_radius(ev, c2, x_grid, lam1, want=r_q)
        if r_off is not None:
            route, height = "disc", height_req
        else:
            route, height = "taylor", min(height_req, taylor_cap)
            if height <= 0:
                raise ContainmentError(
                    f"chart {chart_id}: no admissible off-axis row construction"
                )

    levels = _row_levels(height, g["rows_per_chart"])
    off = [y for y in levels if y != 0.0]
    if route == "taylor":
        off_rows = _taylor_rows(real, dx, off)
        r_off_used = r_q
    else:
        off_rows = _disc_rows(ev, c2, x_grid, off, r_off, job.n_coeffs, floor)
        r_off_used = r_off
    k = len(off) // 2
    rows = off_rows[:k] + [real] + off_rows[k:]
    rows = _pad_rows(rows)
    routes = ["disc" if route == "disc" else "taylor"] * k + ["fresh"] + \
        ["disc" if route == "disc" else "taylor"] * k

    cert = None
    if cert_ctx is not None:
        l_const, shift, kappa, eta_frac = cert_ctx
        nu_max = max(2, min(r.shape[1] for r in rows) - 1)
        seq = _phi_from_rows(x_grid, [abs(y) for y in levels], rows, (1, nu_max), shift)
        finite = seq.values[np.isfinite(seq.values)]
        big_l = float(np.max(finite)) + 1.0 if finite.size else 1.0
        hyp = HartogsHypotheses(
            l=l_const,
            L=max(big_l, l_const),
            alpha=job.alpha / 2.0,
            eta=eta_frac * height,
            tol=tol["cert_tol"],
            diameter_height=1e-15,
        )
        dom = Strip(seg, height, UPPER)
        cert = verify_hartogs(seq, hyp, dom, kappa=kappa)

    series = np.stack(rows)
    return Chart(
        chart_id=chart_id,
        z2_center=complex(c2),
        z2_radius=float(radius),
        strip_height=float(height),
        x1_extent=seg,
        x1_grid=np.asarray(x_grid, dtype=float),
        rows=np.asarray(levels, dtype=float),
        series=series,
        quad_radius=float(min(r_q, r_off_used) if route == "disc" else r_q),
        row_routes=tuple(routes),
        cert=cert,
    )


# -- pipelines ----------------------------------------------------------------


def _x_grid(oracle, slab, shrink: float, n: int) -> np.ndarray:
    om = oracle.meta.omega[0]
    base = Interval(max(slab.interval.lo, om.lo), min(slab.interval.hi, om.hi))
    base = base.shrink(shrink)
    return np.linspace(base.lo, base.hi, n)


def _height_schedule(job, h0: float, n_steps: int, half_width: float):
    """Certified strip heights h_1..h_n and the kappa each step used."""
    heights = [h0]
    kappas = []
    num = math.log(1.0 - job.alpha) + job.alpha / 2.0
    for _ in range(n_steps):
        kap = kappa_estimate_strip(heights[-1], half_width).kappa
        eps = num / (kap * math.log(job.sigma))
        kappas.append(kap)
        heights.append(float(min(eps, heights[-1])))
    return heights, kappas


def march(job: ContinuationJob) -> ExtensionAtlas:
    """One-sided continuation: seed chart plus the certified center march.

    Marches the z2-expansion center through c_j = j (delta' - sigma) + i delta,
    delta' = (1 - alpha) delta, forward and backward until N (delta' - sigma)
    exceeds 1, verifying the coefficient-bound certificate per step with
    l = -log sigma and the real-axis clause shifted by log delta.  On a failed
    certificate the partial atlas keeps the failure record for that direction.
    """
    if job.mode != MODE_ONE_SIDED_UP:
        raise ConfigError("march requires mode=one_sided_up")
    oracle = job.oracle
    g, tol = job.grids, job.tolerances
    delta, sigma, alpha = job.delta, job.sigma, job.alpha
    dprime = (1.0 - alpha) * delta

    slabs = bounded_slab_scan(oracle, 1, probe_grid=g["probe_points"])
    slab = widest_slab(slabs, 1)
    x_grid = _x_grid(oracle, slab, tol["shrink"], g["x1_points"])
    ev = SeedEvaluator(oracle, g["disc_grid"])

    charts = [
        _build_chart(oracle, ev, job, "seed", 1j * delta, 0.9 * delta, x_grid,
                     0.9 * delta)
    ]
    h0 = charts[0].strip_height
    n_steps = int(math.floor(1.0 / (dprime - sigma))) + 1
    heights, kappas = _height_schedule(job, h0, n_steps, (x_grid[-1] - x_grid[0]) / 2)
    shift = math.log(delta)
    l_const = -math.log(sigma)

    failures = []
    for direction in (+1, -1):
        for j in range(1, n_steps + 1):
            cj = direction * j * (dprime - sigma) + 1j * delta
            try:
                chart = _build_chart(
                    oracle, ev, job, f"step{direction * j:+d}", cj, dprime,
                    x_grid, heights[j],
                    cert_ctx=(l_const, shift, kappas[j - 1], 0.4),
                )
            except (ContainmentError, taylor.ExtractionError) as exc:
                failures.append({"chart": f"step{direction * j:+d}", "error": str(exc)})
                break
            charts.append(chart)
            if chart.cert is not None and not chart.cert.passed:
                failures.append(
                    {"chart": chart.chart_id, "certificate": chart.cert.to_json()}
                )
                break

    atlas = ExtensionAtlas(
        charts=charts,
        job_echo=job.echo(),
        diagnostics={
            "slab": slab.to_json(),
            "seed_route": charts[0].row_routes[0],
            "seed_height": h0,
            "heights": [float(h) for h in heights],
            "kappas": [float(k) for k in kappas],
            "n_steps": n_steps,
            "reach": n_steps * (dprime - sigma),
            "failures": failures,
        },
    )
    _check_overlaps(atlas, tol["chart_agreement"])
    return atlas


def two_sided_fill(job: ContinuationJob) -> ExtensionAtlas:
    """Two-sided pipeline: a single chart on the strip-times-disc domain.

    Provisional coefficient rows on the delta-scale strip feed one
    certificate per half-strip with l = -log delta; the certified growth rate
    fixes the strip height epsilon through the convergence-factor condition,
    and the returned chart covers |z2| < 1 - alpha on that strip.
    """
    if job.mode != MODE_TWO_SIDED:
        raise ConfigError("two_sided_fill requires mode=two_sided")
    oracle = job.oracle
    g, tol = job.grids, job.tolerances
    delta, alpha = job.delta, job.alpha

    slabs = bounded_slab_scan(oracle, 1, probe_grid=g["probe_points"])
    slabs += bounded_slab_scan(oracle, 2, probe_grid=g["probe_points"])
    slab = widest_slab(slabs, 1)

    # radius-collapse guard: restrict to x1 where extraction circles fit
    om = oracle.meta.omega[0]
    xs = np.linspace(om.lo, om.hi, 4 * g["probe_points"] + 1)[1:-1]
    r2 = oracle.z2_radius_at(xs)
    usable = r2 >= 0.3
    uncovered = _runs(xs, ~usable)
    runs = _runs(xs, usable & (xs >= slab.interval.lo) & (xs <= slab.interval.hi))
    if not runs:
        raise AtlasError(
            "no x1 range with a usable declared z2 radius",
            diagnostics={"uncovered_x1": [[a, b] for a, b in uncovered]},
        )
    lo, hi = max(runs, key=lambda ab: ab[1] - ab[0])
    seg = Interval(lo, hi).shrink(tol["shrink"])
    x_grid = np.linspace(seg.lo, seg.hi, g["x1_points"])
    ev = SeedEvaluator(oracle, g["disc_grid"])

    eps_min = float(np.min(oracle.meta.eps1_at(np.linspace(seg.lo, seg.hi, 65))))
    h_prov = 0.9 * min(delta, 0.98 * eps_min / ev.peak_y)
    if h_prov < 1e-6:
        raise AtlasError(
            "declared per-slice z1 height collapses on the requested window",
            diagnostics={
                "eps1_min": eps_min,
                "uncovered_x1": [[a, b] for a, b in uncovered],
            },
        )
    prov = _build_chart(oracle, ev, job, "prov", 0.0 + 0.0j, 1.0 - alpha,
                        x_grid, h_prov)
    h_prov = prov.strip_height

    kap = kappa_estimate_strip(h_prov, (seg.hi - seg.lo) / 2.0).kappa
    l_const = -math.log(delta)
    certs = {}
    for side, sign in (("upper", 1.0), ("lower", -1.0)):
        sel = [r for r in range(prov.rows.size) if sign * prov.rows[r] >= 0.0]
        heights = [abs(float(prov.rows[r])) for r in sel]
        coeffs = [prov.series[r] for r in sel]
        nu_max = max(2, prov.series.shape[2] - 1)
        seq = _phi_from_rows(x_grid, heights, coeffs, (1, nu_max), 0.0)
        finite = seq.values[np.isfinite(seq.values)]
        big_l = float(np.max(finite)) + 1.0 if finite.size else 1.0
        hyp = HartogsHypotheses(
            l=l_const, L=max(big_l, l_const), alpha=alpha / 2.0,
            eta=0.4 * h_prov, tol=tol["cert_tol"], diameter_height=1e-15,
        )
        certs[side] = verify_hartogs(seq, hyp, Strip(seg, h_prov, UPPER), kappa=kap)
        if not certs[side].passed:
            raise AtlasError(
                f"{side} half-strip certificate failed", certificate=certs[side]
            )

    eps = (math.log(1.0 - alpha) + alpha / 2.0) / (kap * math.log(delta))
    eps = float(min(eps, h_prov))
    chart = _build_chart(oracle, ev, job, "fill", 0.0 + 0.0j, 1.0 - alpha,
                         x_grid, eps)
    chart.cert = certs["upper"]

    return ExtensionAtlas(
        charts=[chart],
        job_echo=job.echo(),
        diagnostics={
            "slabs": [s.to_json() for s in slabs],
            "provisional_height": h_prov,
            "kappa_strip": kap,
            "epsilon": eps,
            "certs": {k: v.to_json() for k, v in certs.items()},
            "uncovered_x1": [[a, b] for a, b in uncovered],
        },
    )


def _check_overlaps(atlas: ExtensionAtlas, tolerance: float):
    """Sample pairwise chart overlaps; reject the atlas above tolerance."""
    worst = None
    records = []
    charts = atlas.charts
    for a in range(len(charts)):
        for b in range(a + 1, len(charts)):
            ca, cb = charts[a], charts[b]
            d = abs(ca.z2_center - cb.z2_center)
            if d < 1e-12:
                continue
            mid = 0.5 * (ca.z2_center + cb.z2_center)
            if abs(mid - ca.z2_center) > 0.85 * ca.z2_radius or abs(
                mid - cb.z2_center
            ) > 0.85 * cb.z2_radius:
                continue
            xs = np.linspace(ca.x1_extent.lo, ca.x1_extent.hi, 5)[1:-1]
            sample_worst = 0.0
            for x in xs:
                z1 = complex(x, 0.0)
                va, _ = ca.eval(z1, mid)
                vb, _ = cb.eval(z1, mid)
                rel = abs(va - vb) / (1.0 + abs(va))
                sample_worst = max(sample_worst, rel)
                if worst is None or rel > worst["disagreement"]:
                    worst = {
                        "charts": [ca.chart_id, cb.chart_id],
                        "z1": [z1.real, z1.imag],
                        "z2": [mid.real, mid.imag],
                        "disagreement": rel,
                    }
            records.append(
                {
                    "charts": [ca.chart_id, cb.chart_id],
                    "z2": [mid.real, mid.imag],
                    "worst": sample_worst,
                }
            )
    atlas.overlaps = records
    if worst and worst["disagreement"] > tolerance:
        raise AtlasError(
            f"chart overlap disagreement {worst['disagreement']:.3e} above "
            f"tolerance {tolerance:.1e}",
            overlap=worst,
        )


def assemble_wedge(atlases, edge=None) -> tuple:
    """Fit the largest vertical-axis cone whose truncated wedge the charts cover.

    Needs at least two atlases (a height schedule).  Samples directions and
    magnitudes, returns (Wedge or None, report); the report labels the result
    as the pre-Kashiwara fitted cone since no cone enlargement is performed,
    and carries the verified magnitude range.
    """
    if len(atlases) < 2:
        raise ConfigError("assemble_wedge needs at least two atlases")
    charts = [c for a in atlases for c in a.charts]
    if edge is None:
        lo = max(c.x1_extent.lo for c in charts)
        hi = min(c.x1_extent.hi for c in charts)
        edge = (Interval(lo, hi), Interval(lo, hi))

    tops = [c.z2_center.imag + 0.8 * c.z2_radius for c in charts]
    bots = [c.z2_center.imag - 0.8 * c.z2_radius for c in charts]
    r_max = max(tops) * 0.95
    pos = [b for b in bots if b > 0.0]
    r_min = min(pos) * 1.1 if pos else r_max / 100.0
    rs = np.geomspace(max(r_min, 1e-12), r_max, 8)
    x1s = np.linspace(edge[0].lo, edge[0].hi, 5)[1:-1]
    x2s = np.linspace(edge[1].lo, edge[1].hi, 5)[1:-1]

    def covered(y1: float, y2: float) -> bool:
        for a in x1s:
            for b in x2s:
                z1, z2 = complex(a, y1), complex(b, y2)
                if not any(c.contains(z1, z2) for c in charts):
                    return False
        return True

    def feasible(t: float) -> bool:
        for r in rs:
            for phi in (-t, -t / 2, 0.0, t / 2, t):
                if not covered(r * math.sin(phi), r * math.cos(phi)):
                    return False
        return True

    if not feasible(0.0):
        return None, {
            "label": "pre-Kashiwara fitted cone",
            "degenerate": True,
            "note": "axis direction not covered by the chart union",
            "r_range": [float(rs[0]), float(rs[-1])],
        }
    aperture = 0.0
    for k in range(600):
        t = (math.pi / 3.0) * 0.5**k
        if t < 1e-300:
            break
        if feasible(t):
            aperture = t
            break
    report = {
        "label": "pre-Kashiwara fitted cone",
        "aperture": aperture,
        "r_range": [float(rs[0]), float(rs[-1])],
        "edge": [geo_to_json(edge[0]), geo_to_json(edge[1])],
        "n_atlases": len(atlases),
        "n_charts": len(charts),
        "note": "verified on sampled magnitudes only; the thin y1 profile is "
        "inherent to the construction before any cone enlargement",
    }
    if aperture <= 0.0:
        report["degenerate"] = True
        return None, report
    wedge = Wedge(edge, Cone((0.0, 1.0), aperture), float(rs[-1]))
    for a in atlases:
        a.wedge = wedge
    return wedge, report

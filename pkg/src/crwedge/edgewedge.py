"""Analytic-disc attachment and boundary-value identity checks.

A disc here is the holomorphic map A(tau) = x_o + i Lambda H(tau) of the unit
disc into C^2, where H_j is the holomorphic function whose boundary real part
is the bump y_j and whose imaginary part is the normalized conjugate T0 y_j.
On the boundary this reads (x_o - T0 y_lambda) + i y_lambda, the center is
x_o + i lambda, and with the standard half-circle bump supports each boundary
point has at most one non-real coordinate.

The module also carries the smooth cutoffs with dbar chi = O(|y|^k) used by
the half-plane Cauchy-area identity, the identity's residual evaluator, and
a boundary uniform-continuity probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Interval, Strip
from .harmonic import CIRCLE, BoundaryFunction, hilbert_transform

CENTER_TOL = 1e-8


class TransformResolutionError(RuntimeError):
    """Disc center drifted from x_o + i lambda beyond tolerance."""


@dataclass(frozen=True)
class BumpProfile:
    """Nonnegative circle function supported on a half circle, unit circle mean."""

    support: tuple  # (theta_lo, theta_hi)
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if np.any(s < -1e-14):
            raise ValueError("bump samples must be nonnegative")
        if abs(float(np.mean(s)) - 1.0) > 1e-10:
            raise ValueError("bump must have unit mean over the circle")
        object.__setattr__(self, "samples", s)

    @property
    def grid_size(self) -> int:
        return self.samples.size

    @property
    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.grid_size) / self.grid_size


def default_bump(j: int, grid_size: int = 1024) -> BumpProfile:
    """Raised-cosine bump: (1 - cos 2 theta) on [0, pi] (j=1) or [pi, 2 pi] (j=2).

    Vanishes to second order at the support endpoints; samples are rescaled
    so the discrete circle mean is exactly 1.
    """
    if j not in (1, 2):
        raise ValueError("bump index must be 1 or 2")
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    theta = 2.0 * np.pi * np.arange(grid_size) / grid_size
    if j == 1:
        mask = theta <= np.pi
        support = (0.0, np.pi)
    else:
        mask = theta >= np.pi
        support = (np.pi, 2.0 * np.pi)
    vals = np.where(mask, 1.0 - np.cos(2.0 * theta), 0.0)
    vals /= np.mean(vals)
    return BumpProfile(support, vals)


@dataclass(frozen=True)
class AnalyticDisc:
    """Attached disc: boundary samples in C^2 plus base point, lift and center."""

    base_point: tuple
    lam: tuple
    boundary: np.ndarray  # shape (M, 2) complex
    center: tuple

    @property
    def grid_size(self) -> int:
        return self.boundary.shape[0]

    @property
    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.grid_size) / self.grid_size

    def to_json(self) -> dict:
        return {
            "base_point": list(self.base_point),
            "lambda": list(self.lam),
            "center": [[c.real, c.imag] for c in self.center],
            "boundary": [[[z.real, z.imag] for z in row] for row in self.boundary],
        }


def conjugate_samples(bump: BumpProfile) -> np.ndarray:
    """T0 of the bump on its own grid."""
    bf = BoundaryFunction(CIRCLE, bump.thetas, bump.samples)
    return np.asarray(hilbert_transform(bf).values, dtype=float)


def attach_disc(x_o, lam, bumps=None, grid_size: int = 1024) -> AnalyticDisc:
    """Build the disc with boundary (x_o - T0 y_lambda) + i y_lambda.

    lam components are normally in [0, delta); negative values mirror the
    construction into the opposite half-plane of that coordinate.  The center
    is the theta-mean of the boundary and is checked against x_o + i lambda.
    """
    x_o = (float(x_o[0]), float(x_o[1]))
    lam = (float(lam[0]), float(lam[1]))
    if bumps is None:
        bumps = (default_bump(1, grid_size), default_bump(2, grid_size))
    if bumps[0].grid_size != bumps[1].grid_size:
        raise ValueError("bump profiles must share a grid")
    m = bumps[0].grid_size
    boundary = np.empty((m, 2), dtype=complex)
    for j in (0, 1):
        y = bumps[j].samples
        ty = conjugate_samples(bumps[j])
        boundary[:, j] = x_o[j] - lam[j] * ty + 1j * lam[j] * y
    center = (complex(np.mean(boundary[:, 0])), complex(np.mean(boundary[:, 1])))
    target = (x_o[0] + 1j * lam[0], x_o[1] + 1j * lam[1])
    drift = max(abs(center[0] - target[0]), abs(center[1] - target[1]))
    if drift > CENTER_TOL:
        raise TransformResolutionError(
            f"disc center off by {drift:.3e} (> {CENTER_TOL}); raise the grid size"
        )
    return AnalyticDisc(x_o, lam, boundary, center)


def boundary_in_union(disc: AnalyticDisc, delta: float, tol: float = 1e-12) -> bool:
    """Check the boundary lies in (halfdisc x I_delta) U (I_delta x halfdisc).

    The half-discs are the unit ones closed on the real axis, on the side
    selected by the sign of the corresponding lambda.
    """
    z = disc.boundary
    in_half = []
    for j in (0, 1):
        sgn = 1.0 if disc.lam[j] >= 0 else -1.0
        in_half.append(
            (np.abs(z[:, j]) <= 1.0 + tol) & (sgn * np.imag(z[:, j]) >= -tol)
        )
    in_interval = [
        (np.abs(np.real(z[:, j])) < delta) & (np.abs(np.imag(z[:, j])) <= tol)
        for j in (0, 1)
    ]
    ok = (in_half[0] & in_interval[1]) | (in_interval[0] & in_half[1])
    return bool(np.all(ok))


def extend_at_center(disc: AnalyticDisc, f_boundary) -> complex:
    """Cauchy mean (1/2pi) int f(A(e^{i theta})) d theta = value at the center."""
    vals = np.asarray(f_boundary, dtype=complex)
    if vals.shape != (disc.grid_size,):
        raise ValueError(f"need {disc.grid_size} boundary values, got {vals.shape}")
    return complex(np.mean(vals))


# -- smooth cutoffs with controlled dbar -------------------------------------

def _smoothstep_coeffs(order: int) -> np.ndarray:
    """Polynomial s with s(0)=0, s(1)=1 and `order` vanishing derivatives at both ends."""
    p = order
    # s'(u) ~ u^p (1-u)^p, integrated and normalized
    c = np.zeros(2 * p + 2)
    for k in range(p + 1):
        c[p + k + 1] = (-1) ** k * math.comb(p, k) / (p + k + 1)
    c /= np.polynomial.polynomial.polyval(1.0, c)
    return c


@dataclass(frozen=True)
class CutoffSpec:
    """chi(z): 1 on inner, supported in outer x i(-height, height), dbar chi = O(|y|^k).

    chi(x + iy) = psi(y) * sum_{j<=k} chi0^{(j)}(x) (iy)^j / j!  with chi0 a
    polynomial-smoothstep plateau, so

        dbar chi = psi(y) chi0^{(k+1)}(x) (iy)^k / (2 k!) + (i/2) psi'(y) * (sum ...),

    and both derivative factors are exact polynomials.
    """

    inner: Interval
    outer: Interval
    decay_order: int
    height: float = 1.0
    smooth_order: int = 7

    def __post_init__(self):
        if not (self.outer.lo < self.inner.lo < self.inner.hi < self.outer.hi):
            raise ValueError("need inner strictly inside outer")
        if self.decay_order < 0:
            raise ValueError("decay_order must be >= 0")
        if self.height <= 0:
            raise ValueError("height must be positive")

    def _chi0_derivatives(self, x: np.ndarray, max_order: int) -> np.ndarray:
        """chi0 and derivatives up to max_order, shape (max_order + 1, len(x))."""
        s = _smoothstep_coeffs(self.smooth_order + self.decay_order)
        out = np.zeros((max_order + 1, x.size))
        la, lb = self.outer.lo, self.inner.lo
        ra, rb = self.inner.hi, self.outer.hi
        mid = (x >= lb) & (x <= ra)
        out[0][mid] = 1.0
        for (lo, hi, sign) in ((la, lb, +1), (ra, rb, -1)):
            sel = (x > lo) & (x < hi)
            if not np.any(sel):
                continue
            w = hi - lo
            u = (x[sel] - lo) / w
            c = s.copy()
            for d in range(max_order + 1):
                val = np.polynomial.polynomial.polyval(u, c)
                if d == 0:
                    out[0][sel] = val if sign > 0 else 1.0 - val
                else:
                    out[d][sel] = (val if sign > 0 else -val) / w**d
                c = np.polynomial.polynomial.polyder(c)
        return out

    def _psi(self, y: np.ndarray):
        """Vertical plateau cutoff (1 for |y| <= h/2, 0 for |y| >= h) and derivative."""
        s = _smoothstep_coeffs(self.smooth_order)
        h = self.height
        a = np.abs(y)
        psi = np.ones_like(a)
        dpsi = np.zeros_like(a)
        outside = a >= h
        psi[outside] = 0.0
        band = (a > h / 2) & (a < h)
        if np.any(band):
            u = (a[band] - h / 2) / (h / 2)
            psi[band] = 1.0 - np.polynomial.polynomial.polyval(u, s)
            ds = np.polynomial.polynomial.polyder(s)
            dpsi[band] = -np.sign(y[band]) * np.polynomial.polynomial.polyval(u, ds) / (h / 2)
        return psi, dpsi

    def chi(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        x, y = np.real(z), np.imag(z)
        der = self._chi0_derivatives(x, self.decay_order)
        psi, _ = self._psi(y)
        acc = np.zeros_like(z)
        fact = 1.0
        for j in range(self.decay_order + 1):
            if j:
                fact *= j
            acc += der[j] * (1j * y) ** j / fact
        return psi * acc

    def dbar_chi(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        x, y = np.real(z), np.imag(z)
        k = self.decay_order
        der = self._chi0_derivatives(x, k + 1)
        psi, dpsi = self._psi(y)
        lead = psi * der[k + 1] * (1j * y) ** k / (2.0 * math.factorial(k))
        acc = np.zeros_like(z)
        f = 1.0
        for j in range(k + 1):
            if j:
                f *= j
            acc += der[j] * (1j * y) ** j / f
        return lead + 0.5j * dpsi * acc


def _simpson_weights(n: int, a: float, b: float):
    """Composite Simpson nodes/weights on [a, b] with n (even) intervals."""
    n = max(2, n + (n % 2))
    x = np.linspace(a, b, n + 1)
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (b - a) / (3.0 * n)
    return x, w


def cauchy_formula_terms(f, chi: CutoffSpec, x_n: float, y_n: float,
                         quad_points: int = 2000):
    """Evaluate the three pieces of the half-plane Cauchy-area identity.

    With F holomorphic above the real axis and continuous up to it,

        (chi f)(x_n + i y_n) = (1/pi) int (chi f)(x_n + xi y_n) / (xi^2 + 1) dxi
                               - (2 i y_n / pi) iint_{Im z > 0}
                                 f dbar chi / ((z - x_n)^2 + y_n^2) dA(z).

    Returns (lhs, boundary_term, area_term).  Quadrature is composite Simpson
    split at the cutoff breakpoints; the area integral covers the two strips
    where chi0' is active plus the horizontal band where psi' is active.
    """
    if not 0 < y_n:
        raise ValueError("need y_n > 0")
    z0 = complex(x_n, y_n)
    lhs = complex(chi.chi(z0)[0]) * complex(f(z0))

    # boundary term over the support of chi, split at the transition breakpoints
    n = int(quad_points)
    brk = sorted({chi.outer.lo, chi.inner.lo, chi.inner.hi, chi.outer.hi})
    boundary = 0.0
    total = brk[-1] - brk[0]
    for a, b in zip(brk[:-1], brk[1:]):
        seg = max(8, int(n * (b - a) / total))
        x, w = _simpson_weights(seg, a, b)
        xi = (x - x_n) / y_n
        vals = chi.chi(x) * np.array([complex(f(complex(t, 0.0))) for t in x])
        boundary += np.sum(w * vals / (xi**2 + 1.0)) / (np.pi * y_n)

    # area term over supp(dbar chi) in the upper half plane
    def patch(ax, bx, ay, by, nx, ny):
        xs, wx = _simpson_weights(nx, ax, bx)
        ys, wy = _simpson_weights(ny, ay, by)
        zz = xs[:, None] + 1j * ys[None, :]
        fv = np.array([[complex(f(z)) for z in row] for row in zz])
        db = chi.dbar_chi(zz.ravel()).reshape(zz.shape)
        ker = 1.0 / ((zz - x_n) ** 2 + y_n**2)
        return np.sum(wx[:, None] * wy[None, :] * fv * db * ker)

    ny = max(16, n // 12)
    nx = max(16, n // 12)
    area = 0j
    # vertical transition strips, full height of the cutoff
    area += patch(chi.outer.lo, chi.inner.lo, 0.0, chi.height, nx, ny)
    area += patch(chi.inner.hi, chi.outer.hi, 0.0, chi.height, nx, ny)
    # psi' band over the plateau (the strips above already cover their x-range)
    area += patch(chi.inner.lo, chi.inner.hi, chi.height / 2, chi.height, nx, ny)
    area_term = complex(-2j * y_n / np.pi * area)
    return lhs, complex(boundary), area_term


def cauchy_formula_residual(f, chi: CutoffSpec, x_n: float, y_n: float,
                            quad_points: int = 2000) -> float:
    """|lhs - boundary - area| for the half-plane identity above."""
    lhs, boundary, area = cauchy_formula_terms(f, chi, x_n, y_n, quad_points)
    return float(abs(lhs - boundary - area))


def uniform_continuity_modulus(f, region: Strip, y_sequence, n_x: int = 201):
    """sup_x |f(x + iy) - f(x)| along a decreasing height sequence.

    Returns ([(y, gap), ...], monotone_flag).
    """
    xs = np.linspace(region.real_extent.lo, region.real_extent.hi, n_x)
    base = np.array([complex(f(complex(x, 0.0))) for x in xs])
    out = []
    for y in y_sequence:
        if not 0 <= y < region.height:
            raise ValueError(f"height {y} outside the region")
        vals = np.array([complex(f(complex(x, y))) for x in xs])
        out.append((float(y), float(np.max(np.abs(vals - base)))))
    gaps = [g for _, g in out]
    monotone = all(b <= a + 1e-15 for a, b in zip(gaps[:-1], gaps[1:]))
    return out, monotone

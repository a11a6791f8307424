"""Truncated Taylor models in one complex variable.

Coefficients come from trapezoid quadrature on a circle (spectrally accurate
for holomorphic integrands), evaluation carries a geometric tail estimate,
and recentering uses the stable Pascal-style recurrence for the shifted
binomial weights.  The nu-th root log-magnitudes of a coefficient field over
a z1-grid form the subharmonic sequence consumed by the half-disc/strip
verifier in :mod:`crwedge.harmonic`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NEG_INF = float("-inf")
DEFAULT_TAIL_FRACTION = 0.25
TAIL_SHRINK = 0.97  # radius shrink inside tail estimates; absorbs the
# finite-window overshoot of the root test so the bound stays one-sided


class ExtractionError(RuntimeError):
    """Oracle evaluation failed (or went non-finite) on the quadrature circle."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class DivergenceError(ArithmeticError):
    """Evaluation requested outside the estimated convergence disc."""


class OutOfRadiusError(ValueError):
    """Recenter shift reaches or exceeds the root-test radius."""


@dataclass(frozen=True)
class TaylorSeries:
    """Truncated series sum a_nu (z - center)^nu, nu = 0..N."""

    center: complex
    coeffs: np.ndarray
    declared_radius: float | None = None

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.size == 0:
            raise ValueError("coefficient list must be nonempty")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def to_json(self) -> dict:
        return {
            "center": [self.center.real, self.center.imag],
            "coeffs": [[a.real, a.imag] for a in self.coeffs],
            "declared_radius": self.declared_radius,
        }

    @staticmethod
    def from_json(doc: dict) -> "TaylorSeries":
        c = complex(doc["center"][0], doc["center"][1])
        coeffs = np.array([complex(a, b) for a, b in doc["coeffs"]], dtype=complex)
        return TaylorSeries(c, coeffs, doc.get("declared_radius"))


@dataclass(frozen=True)
class CoeffLogSequence:
    """Sampled sequence phi_nu(z1) = (1/nu) log |a_nu(z1)| over a z1-grid.

    Zero (or floor-truncated) coefficients are recorded as -inf sentinels so
    the (nu, grid) table stays rectangular.
    """

    grid: np.ndarray
    values: np.ndarray  # shape (n_nu, n_grid)
    nu_range: tuple = field(default=(1, 1))

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=complex)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.nu_range[1] - self.nu_range[0] + 1, g.size):
            raise ValueError(
                f"values shape {v.shape} does not match nu_range {self.nu_range} "
                f"and grid size {g.size}"
            )
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    @property
    def nus(self) -> np.ndarray:
        return np.arange(self.nu_range[0], self.nu_range[1] + 1)

    def to_csv(self) -> str:
        lines = ["nu,z1_re,z1_im,phi"]
        for i, nu in enumerate(self.nus):
            for j, z in enumerate(self.grid):
                lines.append(f"{nu},{z.real!r},{z.imag!r},{self.values[i, j]!r}")
        return "\n".join(lines) + "\n"


def coeffs_from_oracle(oracle, center, circle_radius, n_coeffs, quad_points=None,
                       noise_floor=None) -> TaylorSeries:
    """Extract a_0..a_N by trapezoid quadrature on |z - center| = circle_radius.

    a_nu = (1/M) sum_m f(center + r e^{i theta_m}) e^{-i nu theta_m} r^{-nu}.

    With ``noise_floor`` set, trailing coefficients whose contribution on the
    quadrature circle falls below noise_floor * max|f| are dropped: they sit
    at the quadrature noise level and carry no information.
    """
    center = complex(center)
    r = float(circle_radius)
    if r <= 0:
        raise ValueError("circle_radius must be positive")
    n = int(n_coeffs)
    m = int(quad_points) if quad_points else max(4 * (n + 1), 64)
    if m < 4 * (n + 1):
        raise ValueError(f"need quad_points >= 4(N+1) = {4 * (n + 1)}, got {m}")

    theta = 2.0 * np.pi * np.arange(m) / m
    nodes = center + r * np.exp(1j * theta)
    try:
        vals = np.asarray(oracle(nodes), dtype=complex)
        if vals.shape != nodes.shape:
            raise TypeError
    except Exception:
        try:
            vals = np.array([complex(oracle(z)) for z in nodes])
        except Exception as exc:  # pinpoint the failing node
            for z in nodes:
                try:
                    complex(oracle(z))
                except Exception:
                    raise ExtractionError(f"oracle failed at {z}", point=z) from exc
            raise ExtractionError("oracle failed on the quadrature circle") from exc
    bad = ~np.isfinite(vals)
    if np.any(bad):
        raise ExtractionError(
            f"oracle returned non-finite value at {nodes[np.argmax(bad)]}",
            point=nodes[np.argmax(bad)],
        )

    modes = np.fft.fft(vals)[: n + 1] / m
    if noise_floor is not None:
        scale = float(np.max(np.abs(vals)))
        resolved = np.abs(modes) >= noise_floor * max(scale, 1e-300)
        keep = int(np.max(np.nonzero(resolved)[0])) if np.any(resolved) else 0
        modes = modes[: keep + 1]
    coeffs = modes * r ** -np.arange(modes.size)

    return TaylorSeries(center, coeffs, declared_radius=None)


def _tail_window(n_coeffs: int, tail_fraction: float) -> int:
    start = int(np.floor((1.0 - tail_fraction) * n_coeffs))
    return min(max(start, 1), n_coeffs)


def _root_test(coeffs: np.ndarray, tail_fraction: float) -> float:
    if coeffs.size < 2:
        return float("inf")
    start = _tail_window(coeffs.size - 1, tail_fraction)
    nus = np.arange(start, coeffs.size)
    tail = coeffs[start:]
    nz = tail != 0
    if not np.any(nz):
        return float("inf")
    phi = np.log(np.abs(tail[nz])) / nus[nz]
    return float(np.exp(-np.max(phi)))


def radius_root_test(s: TaylorSeries, tail_fraction: float = DEFAULT_TAIL_FRACTION) -> float:
    """Conservative finite-N radius surrogate exp(-max phi_nu) over the tail window.

    Returns +inf when every tail coefficient vanishes (polynomial input).
    """
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError("tail_fraction must lie in (0, 1]")
    start = _tail_window(s.order, tail_fraction)
    if s.order + 1 - start < 8 and np.any(s.coeffs[start:] != 0):
        raise ValueError(
            f"tail window holds {s.order + 1 - start} coefficients, need at least 8"
        )
    return _root_test(s.coeffs, tail_fraction)


def evaluate(s: TaylorSeries, z) -> tuple:
    """Horner evaluation with a geometric tail estimate.

    Returns (value, tail_bound); tail_bound is C q^{N+1} / (1-q) with
    q = |z - center| / r_est and C calibrated on the last quarter of indices.
    """
    z = complex(z)
    d = z - s.center
    value = complex(np.polyval(s.coeffs[::-1], d))
    if d == 0:
        return complex(s.coeffs[0]), 0.0

    r_est = _root_test(s.coeffs, DEFAULT_TAIL_FRACTION)
    if not np.isfinite(r_est):
        return value, 0.0
    if abs(d) / r_est >= 1.0:
        raise DivergenceError(
            f"|z - center| = {abs(d):.3g} reaches the estimated radius {r_est:.3g}"
        )
    r_eff = TAIL_SHRINK * r_est
    q = min(abs(d) / r_eff, 1.0 - 1e-12)
    start = _tail_window(s.order, DEFAULT_TAIL_FRACTION)
    nus = np.arange(start, s.order + 1)
    c = float(np.max(np.abs(s.coeffs[start:]) * r_eff ** nus)) if start <= s.order else 0.0
    tail = c * q ** (s.order + 1) / (1.0 - q)
    return value, float(tail)


def recenter(s: TaylorSeries, new_center) -> TaylorSeries:
    """Re-expand around new_center (same truncation order).

    b_mu = sum_{nu >= mu} a_nu binom(nu, mu) d^{nu-mu}; the weights
    w[nu, mu] = binom(nu, mu) d^{nu-mu} follow the Pascal recurrence
    w[nu, mu] = w[nu-1, mu-1] + d w[nu-1, mu], which keeps magnitudes tame.
    """
    new_center = complex(new_center)
    d = new_center - s.center
    if d == 0:
        return TaylorSeries(s.center, s.coeffs.copy(), s.declared_radius)
    r_est = _root_test(s.coeffs, DEFAULT_TAIL_FRACTION)
    if abs(d) >= r_est:
        raise OutOfRadiusError(
            f"shift {abs(d):.3g} reaches the root-test radius {r_est:.3g}"
        )
    n = s.order
    b = np.zeros(n + 1, dtype=complex)
    w = np.zeros(n + 1, dtype=complex)  # w[mu] = binom(nu, mu) d^{nu-mu} at current nu
    for nu in range(n + 1):
        if nu == 0:
            w[0] = 1.0
        else:
            w[1 : nu + 1], w[0] = w[0:nu] + d * w[1 : nu + 1], w[0] * d
        b[: nu + 1] += s.coeffs[nu] * w[: nu + 1]
    return TaylorSeries(new_center, b, s.declared_radius)


def phi_sequence(grid, series_list, nu_range) -> CoeffLogSequence:
    """Assemble phi_nu(z1) = (1/nu) log |a_nu(z1)| over the grid.

    ``series_list`` holds one TaylorSeries per grid point (shared center);
    coefficients absent or equal to zero map to the -inf sentinel.
    """
    nu_min, nu_max = int(nu_range[0]), int(nu_range[1])
    if nu_min < 1 or nu_max < nu_min:
        raise ValueError(f"bad nu_range {nu_range}")
    grid = np.asarray(grid, dtype=complex)
    if grid.size != len(series_list):
        raise ValueError("grid and series list lengths differ")
    vals = np.full((nu_max - nu_min + 1, grid.size), NEG_INF)
    for j, s in enumerate(series_list):
        for i, nu in enumerate(range(nu_min, nu_max + 1)):
            if nu <= s.order and s.coeffs[nu] != 0:
                vals[i, j] = np.log(abs(s.coeffs[nu])) / nu
    return CoeffLogSequence(grid, vals, (nu_min, nu_max))

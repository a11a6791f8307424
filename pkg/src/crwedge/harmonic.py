"""Harmonic machinery on the disc, half-disc and strip.

Contents:

* Poisson integral on the unit circle (trapezoid rule).
* Dirichlet solver on the upper half-disc.  The arc data is handled by odd
  reflection of the boundary function to the full circle; the diameter data
  uses the kernel obtained by reflecting the disc Green's function across the
  real axis,

      P(z, t) = (Im z / pi) * (1/|t - z|^2 - 1/|1 - conj(z) t|^2),

  so the solver is exact (to quadrature) for arbitrary mixed data and reduces
  to the pure odd reflection when the diameter data vanish.
* The linear-growth constant kappa = sup u(z)/Im z for the 0/1 step data
  (0 on the diameter, 1 on the arc), on the half-disc and on strips.
* The circle Hilbert transform as the Fourier multiplier -i sign(n),
  normalized to kill the mean.
* A certificate-producing verifier for uniform bounds on sampled subharmonic
  sequences phi_nu over half-discs and one-sided strips.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .geometry import UPPER, HalfDisc, Interval, Strip
from .taylor import NEG_INF, CoeffLogSequence

CIRCLE = "circle"
HALFDISC_BOUNDARY = "halfdisc_boundary"
STRIP_BOUNDARY = "strip_boundary"


class ConditioningWarning(UserWarning):
    """Evaluation point close enough to the boundary to degrade the kernel."""


class HypothesisViolation(ValueError):
    """An empirical hypothesis check failed; .clause names the failing one."""

    def __init__(self, clause, detail):
        super().__init__(f"hypothesis clause {clause!r} violated: {detail}")
        self.clause = clause


@dataclass(frozen=True)
class BoundaryFunction:
    """Sampled boundary data.

    Circles use the uniform angle parameter; the half-disc boundary is
    arc-length: s in [0, pi] is the arc e^{is}, s in [pi, pi + 2] is the
    diameter from -1 to 1.
    """

    domain: str
    params: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.params, dtype=float)
        v = np.asarray(self.values)
        if p.size < 16:
            raise ValueError("need at least 16 boundary samples")
        if p.size != v.size:
            raise ValueError("params and values lengths differ")
        if np.any(np.diff(p) <= 0):
            raise ValueError("params must be strictly increasing")
        object.__setattr__(self, "params", p)
        object.__setattr__(self, "values", v)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values) or np.all(np.imag(self.values) == 0)


def circle_boundary(fn, n: int) -> BoundaryFunction:
    """Uniform circle samples of fn(theta) (callable or array of length n)."""
    theta = 2.0 * np.pi * np.arange(n) / n
    vals = fn(theta) if callable(fn) else np.asarray(fn)
    return BoundaryFunction(CIRCLE, theta, np.broadcast_to(vals, theta.shape).copy())


def halfdisc_boundary(arc_fn, diam_fn, n: int) -> BoundaryFunction:
    """Half-disc boundary samples: arc values arc_fn(theta), diameter diam_fn(t).

    The arc carries n+1 uniform samples on [0, pi] inclusive; the diameter
    carries n samples at t in (-1, 1] (the t = -1 corner coincides with the
    arc endpoint and every half-disc kernel vanishes there anyway).
    """
    theta = np.linspace(0.0, np.pi, n + 1)
    t = np.linspace(-1.0, 1.0, n + 1)[1:]
    s_diam = np.pi + (t + 1.0)
    va = arc_fn(theta) if callable(arc_fn) else np.broadcast_to(arc_fn, theta.shape)
    vd = diam_fn(t) if callable(diam_fn) else np.broadcast_to(diam_fn, t.shape)
    return BoundaryFunction(
        HALFDISC_BOUNDARY,
        np.concatenate([theta, s_diam]),
        np.concatenate([np.asarray(va, dtype=float), np.asarray(vd, dtype=float)]),
    )


def poisson_disc(bf: BoundaryFunction, z):
    """Poisson integral of circle data at |z| < 1 (trapezoid rule)."""
    if bf.domain != CIRCLE:
        raise ValueError("poisson_disc needs circle boundary data")
    z = complex(z)
    if abs(z) > 0.999:
        if abs(z) >= 1.0:
            raise ValueError(f"|z| = {abs(z):.4f} is not inside the disc")
        warnings.warn(
            f"|z| = {abs(z):.4f} close to 1: Poisson kernel poorly resolved",
            ConditioningWarning,
            stacklevel=2,
        )
    zeta = np.exp(1j * bf.params)
    ker = (1.0 - abs(z) ** 2) / np.abs(zeta - z) ** 2
    return float(np.mean(ker * np.real(bf.values))) if bf.is_real else complex(
        np.mean(ker * bf.values)
    )


def _split_halfdisc(bf: BoundaryFunction):
    arc = bf.params <= np.pi + 1e-12
    theta = bf.params[arc]
    g = np.real(bf.values[arc])
    t = bf.params[~arc] - np.pi - 1.0
    h = np.real(bf.values[~arc])
    return theta, g, t, h


def poisson_halfdisc(bf: BoundaryFunction, z) -> float:
    """Harmonic extension of half-disc boundary data at z in the open upper half-disc.

    The arc part is the full-disc Poisson integral of the odd reflection of
    the arc data (corner nodes take the odd-symmetric value 0), evaluated by
    the uniform-node trapezoid rule, which is spectrally accurate here.  The
    diameter part uses the kernel of the reflected Green's function.
    """
    if bf.domain != HALFDISC_BOUNDARY:
        raise ValueError("poisson_halfdisc needs half-disc boundary data")
    z = complex(z)
    if z.imag < 1e-4:
        raise ValueError(f"Im z = {z.imag:.2e} on or below the diameter")
    if abs(z) > 0.999:
        raise ValueError(f"|z| = {abs(z):.4f} not inside the half-disc")
    theta, g, t, h = _split_halfdisc(bf)

    n_arc = theta.size - 1
    step = np.pi / n_arc
    if np.max(np.abs(np.diff(theta) - step)) > 1e-9 * step:
        raise ValueError("arc samples must be uniform in theta")
    full = np.zeros(2 * n_arc)
    full[1:n_arc] = g[1:n_arc]
    full[n_arc + 1 :] = -g[1:n_arc][::-1]  # odd reflection, corners at 0
    zeta = np.exp(1j * step * np.arange(2 * n_arc))
    u_arc = float(np.mean((1.0 - abs(z) ** 2) / np.abs(zeta - z) ** 2 * full))

    # diameter data via the reflected Green kernel; it vanishes at t = +-1,
    # so re-attaching the t = -1 corner with value 0 completes the trapezoid.
    if t.size:
        tt = np.concatenate([[-1.0], t])
        hh = np.concatenate([[0.0], h])
        ker = (1.0 / np.abs(tt - z) ** 2) - (1.0 / np.abs(1.0 - np.conj(z) * tt) ** 2)
        u_diam = z.imag / np.pi * float(np.trapezoid(ker * hh, tt))
    else:
        u_diam = 0.0
    return u_arc + u_diam


@dataclass(frozen=True)
class KappaEstimate:
    """sup of u(z)/Im z over the reported grid, u = extension of the 0/1 step data."""

    kappa: float
    domain: str
    resolution: int
    grid: dict
    argmax: tuple

    def __float__(self):
        return self.kappa


def kappa_estimate(resolution: int = 128) -> KappaEstimate:
    """Half-disc linear-growth constant for data 0 on the diameter, 1 on the arc.

    The supremum is taken over the grid Im z in [1e-3, 0.5], |Re z| <= 0.9,
    |z| <= 0.96 so doubling the resolution only sharpens the quadrature.
    """
    resolution = int(resolution)
    if resolution < 64:
        raise ValueError("resolution must be >= 64")
    bf = halfdisc_boundary(lambda th: np.ones_like(th), lambda t: np.zeros_like(t), 4 * resolution)
    xs = np.linspace(-0.9, 0.9, 37)
    ys = np.linspace(1e-3, 0.5, 25)
    best, arg = 0.0, (0.0, 0.0)
    for x in xs:
        for y in ys:
            z = complex(x, y)
            if abs(z) > 0.96:
                continue
            ratio = poisson_halfdisc(bf, z) / y
            if ratio > best:
                best, arg = ratio, (float(x), float(y))
    return KappaEstimate(
        kappa=float(best),
        domain="half_disc",
        resolution=resolution,
        grid={"re": [-0.9, 0.9, 37], "im": [1e-3, 0.5, 25], "max_abs": 0.96},
        argmax=arg,
    )


def _strip_step_extension(x, y, half_width: float, height: float, n_modes: int):
    """Harmonic u on (-w, w) x (0, h) with u = 0 on the bottom, 1 on top and sides.

    Separation of variables; both series are written with overflow-safe
    exponential ratios.
    """
    w, h = half_width, height
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u = np.zeros(np.broadcast(x, y).shape)
    # top data: sum over odd k of (4/k pi) sin(k pi (x+w) / 2w) sinh(k pi y/2w)/sinh(k pi h/2w)
    for k in range(1, n_modes, 2):
        a = k * np.pi / (2.0 * w)
        ratio = (np.exp(a * (y - h)) - np.exp(-a * (y + h))) / (1.0 - np.exp(-2.0 * a * h))
        u += (4.0 / (k * np.pi)) * np.sin(a * (x + w)) * ratio
    # side data: sum over odd m of (4/m pi) sin(m pi y / h) cosh(m pi x/h)/cosh(m pi w/h)
    for m in range(1, n_modes, 2):
        b = m * np.pi / h
        ratio = (np.exp(b * (x - w)) + np.exp(-b * (x + w))) / (1.0 + np.exp(-2.0 * b * w))
        u += (4.0 / (m * np.pi)) * np.sin(b * y) * ratio
    return u


def kappa_estimate_strip(height: float, half_width: float = 1.0,
                         resolution: int = 128) -> KappaEstimate:
    """Linear-growth constant for the one-sided strip of the given height.

    For thin strips (height <= 0.02 half_width) the step extension is y/height
    up to exponentially small side corrections on |x| <= 0.9 w, so kappa is
    1/height there; otherwise the separated series is evaluated on a grid.
    """
    h = float(height)
    if h <= 0:
        raise ValueError("height must be positive")
    if h <= 0.02 * half_width:
        return KappaEstimate(
            kappa=1.0 / h,
            domain="strip",
            resolution=int(resolution),
            grid={"height": h, "half_width": half_width, "thin_asymptotic": True},
            argmax=(0.0, h),
        )
    n_modes = max(64, int(resolution))
    xs = np.linspace(-0.9 * half_width, 0.9 * half_width, 31)
    ys = np.linspace(0.05 * h, 0.9 * h, 18)
    vals = _strip_step_extension(xs[:, None], ys[None, :], half_width, h, n_modes)
    ratios = vals / ys[None, :]
    i, j = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
    return KappaEstimate(
        kappa=float(ratios[i, j]),
        domain="strip",
        resolution=n_modes,
        grid={"height": h, "half_width": half_width, "re": [-0.9, 0.9, 31], "im_frac": [0.05, 0.9, 18]},
        argmax=(float(xs[i]), float(ys[j])),
    )


def hilbert_transform(bf: BoundaryFunction) -> BoundaryFunction:
    """Normalized circle Hilbert transform T0 (harmonic conjugate, zero at 0).

    Fourier multiplier -i sign(n); the zero mode (and the unsigned Nyquist
    mode) map to zero.  Sample counts that are not powers of two are first
    resampled by trigonometric interpolation.
    """
    if bf.domain != CIRCLE:
        raise ValueError("hilbert_transform needs circle boundary data")
    if not bf.is_real:
        raise TypeError("hilbert_transform expects real-valued boundary data")
    vals = np.real(np.asarray(bf.values, dtype=float))
    n = vals.size
    if n & (n - 1):
        m = 1 << (n - 1).bit_length()
        spec = np.fft.rfft(vals)
        pad = np.zeros(m // 2 + 1, dtype=complex)
        pad[: spec.size] = spec
        vals = np.fft.irfft(pad * (m / n), m)
        theta = 2.0 * np.pi * np.arange(m) / m
    else:
        theta = bf.params
    spec = np.fft.rfft(vals)
    spec[0] = 0.0
    spec[1:] *= -1j
    if vals.size % 2 == 0:
        spec[-1] = 0.0
    return BoundaryFunction(CIRCLE, theta, np.fft.irfft(spec, vals.size))


@dataclass(frozen=True)
class HartogsHypotheses:
    """Constants for the uniform-bound theorem on a sampled subharmonic sequence.

    l bounds the limiting boundary sups, L the global sup, alpha is the slack
    in the conclusion and eta the height above which it is asserted.  The
    trailing max over ``window_fraction`` of the nu-range stands in for the
    limsups; ``tol`` is the absolute tolerance on the log scale and
    ``diameter_height`` classifies grid points as real-axis samples.
    """

    l: float
    L: float
    alpha: float
    eta: float
    tol: float = 1e-6
    window_fraction: float = 0.4
    diameter_height: float = 1e-9

    def __post_init__(self):
        if self.L < self.l:
            raise ValueError(f"need L >= l, got L={self.L} < l={self.l}")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must lie in (0, 1)")


@dataclass(frozen=True)
class HartogsCertificate:
    """Checkable outcome: phi_nu(tau) <= alpha + l kappa Im(tau) for nu >= nu_threshold."""

    nu_threshold: int
    kappa: float
    max_violation: float
    passed: bool
    l: float
    L: float
    alpha: float
    eta: float
    nu_range: tuple
    grid_size: int
    domain: str = "half_disc"

    def to_json(self) -> dict:
        return {
            "nu_threshold": self.nu_threshold,
            "kappa": self.kappa,
            "l": self.l,
            "L": self.L,
            "alpha": self.alpha,
            "eta": self.eta,
            "max_violation": self.max_violation,
            "pass": self.passed,
            "nu_range": list(self.nu_range),
            "grid": {"size": self.grid_size, "domain": self.domain},
        }


def _window_start(nus: np.ndarray, fraction: float) -> int:
    span = nus.size
    return max(0, span - max(1, int(math.ceil(fraction * span))))


def verify_hartogs(seq: CoeffLogSequence, hyp: HartogsHypotheses, domain,
                   kappa: float | None = None) -> HartogsCertificate:
    """Check the hypotheses and conclusion of the uniform bound on a grid.

    Hypotheses (trailing-window surrogates for the limsups): the window max of
    the per-nu sups stays <= l, the window max over real-axis grid points
    stays <= 0, and the global sup stays <= L.  The certificate then reports
    the smallest nu_threshold such that

        phi_nu(tau) <= alpha + l * kappa * Im(tau)   for Im(tau) >= eta

    holds for every nu >= nu_threshold on the grid, with the signed worst
    slack.  kappa defaults to the computed constant of the domain.
    """
    if isinstance(domain, HalfDisc):
        dom_name = "half_disc"
        if kappa is None:
            kappa = kappa_estimate(128).kappa
    elif isinstance(domain, Strip):
        if domain.side != UPPER:
            raise ValueError("strip domain for the verifier must be one-sided upper")
        dom_name = "strip"
        if kappa is None:
            kappa = kappa_estimate_strip(domain.height, domain.real_extent.length / 2).kappa
    else:
        raise ValueError("domain must be a HalfDisc or an upper Strip")
    kappa = float(kappa)

    y = np.imag(seq.grid)
    vals = seq.values
    nus = seq.nus
    if not np.any(y >= hyp.eta):
        raise ValueError(f"grid has no points with Im tau >= eta = {hyp.eta}")
    w0 = _window_start(nus, hyp.window_fraction)

    finite = np.where(np.isfinite(vals), vals, NEG_INF)
    diam = np.abs(y) <= hyp.diameter_height
    if not np.any(diam):
        raise HypothesisViolation("diameter", "grid carries no real-axis samples")
    diam_sup = float(np.max(finite[w0:][:, diam]))
    if diam_sup > hyp.tol:
        raise HypothesisViolation(
            "diameter", f"trailing-window sup on the real axis is {diam_sup:.6g} > 0"
        )
    sup_nu = np.max(finite, axis=1)  # per-nu global sup
    window_sup = float(np.max(sup_nu[w0:]))
    if window_sup > hyp.l + hyp.tol:
        raise HypothesisViolation(
            "boundary_sup", f"trailing-window sup {window_sup:.6g} exceeds l = {hyp.l:.6g}"
        )
    global_sup = float(np.max(finite))
    if global_sup > hyp.L + hyp.tol:
        raise HypothesisViolation(
            "global_bound", f"global sup {global_sup:.6g} exceeds L = {hyp.L:.6g}"
        )

    above = y >= hyp.eta
    bound = hyp.alpha + hyp.l * kappa * y[above]
    slack = finite[:, above] - bound[None, :]  # (n_nu, n_above)
    per_nu_worst = np.max(slack, axis=1)
    suffix_worst = np.maximum.accumulate(per_nu_worst[::-1])[::-1]
    ok = suffix_worst <= hyp.tol
    if np.any(ok):
        idx = int(np.argmax(ok))
        return HartogsCertificate(
            nu_threshold=int(nus[idx]),
            kappa=kappa,
            max_violation=float(suffix_worst[idx]),
            passed=True,
            l=hyp.l,
            L=hyp.L,
            alpha=hyp.alpha,
            eta=hyp.eta,
            nu_range=(int(nus[0]), int(nus[-1])),
            grid_size=int(seq.grid.size),
            domain=dom_name,
        )
    return HartogsCertificate(
        nu_threshold=-1,
        kappa=kappa,
        max_violation=float(suffix_worst[-1]),
        passed=False,
        l=hyp.l,
        L=hyp.L,
        alpha=hyp.alpha,
        eta=hyp.eta,
        nu_range=(int(nus[0]), int(nus[-1])),
        grid_size=int(seq.grid.size),
        domain=dom_name,
    )


def harmonic_measure_mc(z, n_walks: int = 1_000_000, seed: int = 0,
                        shell: float = 1e-4):
    """Walk-on-spheres estimate of the harmonic measure of the arc at z.

    Walks jump uniformly on the largest circle inside the upper half-disc and
    absorb in a boundary shell: the diameter scores 0, the arc scores 1.
    Returns (estimate, standard_error); the shell bias is O(shell), well below
    the standard error at the default sizes.
    """
    z = complex(z)
    if not (abs(z) < 1.0 and z.imag > 0.0):
        raise ValueError("z must lie in the open upper half-disc")
    rng = np.random.default_rng(seed)
    pos = np.full(n_walks, z, dtype=complex)
    alive = np.ones(n_walks, dtype=bool)
    hits_arc = np.zeros(n_walks, dtype=bool)
    for _ in range(10_000):
        if not np.any(alive):
            break
        p = pos[alive]
        d_diam = np.imag(p)
        d_arc = 1.0 - np.abs(p)
        absorbed_diam = d_diam < shell
        absorbed_arc = d_arc < shell
        done = absorbed_diam | absorbed_arc
        idx = np.flatnonzero(alive)
        hits_arc[idx[absorbed_arc & ~absorbed_diam]] = True
        alive[idx[done]] = False
        live = idx[~done]
        if live.size == 0:
            continue
        r = np.minimum(d_diam[~done], d_arc[~done])
        ang = rng.uniform(0.0, 2.0 * np.pi, live.size)
        pos[live] = pos[live] + r * np.exp(1j * ang)
    p_hat = float(np.mean(hits_arc))
    se = math.sqrt(max(p_hat * (1.0 - p_hat), 1e-12) / n_walks)
    return p_hat, se


def kappa_field_csv(resolution: int = 128) -> str:
    """u(z)/Im z samples for the half-disc step data, for external plotting."""
    bf = halfdisc_boundary(lambda th: np.ones_like(th), lambda t: np.zeros_like(t), 4 * resolution)
    lines = ["re,im,u,u_over_im"]
    for x in np.linspace(-0.9, 0.9, 37):
        for y in np.linspace(1e-3, 0.5, 25):
            z = complex(x, y)
            if abs(z) > 0.96:
                continue
            u = poisson_halfdisc(bf, z)
            lines.append(f"{x!r},{y!r},{u!r},{u / y!r}")
    return "\n".join(lines) + "\n"

"""Built-in oracles with known analytic structure, plus failure-mode probes.

Registry:

* ``good2s``   1/(3 - z1 - z2): bounded on the closed unit bidisc, extends in
  both variables (real part of the denominator stays >= 1 there).
* ``entire``   exp(z1 z2).
* ``onesided`` 1/(z2 - z1 - i/2): per real x1, a pole sheet at Im z2 = 1/2;
  extends upward below it.
* ``cordaro``  x1 sin(x2/x1), continuous, entire in z2 per slice, but blows
  up faster than any power of 1/|y2| along (1/nu^2, x2 + i/nu).
* ``flat``     x1 x2 exp(-1/(x1^2 + x2^2)): separately real analytic, but the
  per-slice radius collapses like |x| toward the origin.

The probes quantify the two failure modes: power-law growth fitting for
temperedness, and root-test radius tracking along a path for extendibility.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .continuation import SeparateOracle, OracleMeta
from .geometry import Disc, HalfDisc, Interval
from .taylor import coeffs_from_oracle, radius_root_test

TWO_SIDED = "two_sided"
ONE_SIDED_UP = "one_sided_up"
NOT_CR_EXTENDIBLE = "not_cr_extendible"
NOT_TEMPERED = "not_tempered"


@dataclass(frozen=True)
class OracleSpec:
    name: str
    params: tuple
    expected: str
    description: str


def _good2s_eval(z1, z2):
    return 1.0 / (3.0 - np.asarray(z1, dtype=complex) - np.asarray(z2, dtype=complex))


def _entire_eval(z1, z2):
    return np.exp(np.asarray(z1, dtype=complex) * np.asarray(z2, dtype=complex))


_ONESIDED_HEIGHT = 0.5


def _onesided_eval(z1, z2):
    return 1.0 / (np.asarray(z2, dtype=complex) - np.asarray(z1, dtype=complex) - 1j * _ONESIDED_HEIGHT)


def _cordaro_eval(z1, z2):
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    out = np.where(z1 == 0, 0.0 + 0j, z1 * np.sin(np.divide(z2, np.where(z1 == 0, 1.0, z1))))
    return out if out.shape else complex(out)


def _flat_eval(z1, z2):
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    den = z1 * z1 + z2 * z2
    safe = np.where(den == 0, 1.0, den)
    out = np.where(den == 0, 0.0 + 0j, z1 * z2 * np.exp(-1.0 / safe))
    return out if out.shape else complex(out)


_I = Interval(-1.0, 1.0)

_REGISTRY: dict = {}


def _register(name, params, expected, description, eval_fn, meta):
    _REGISTRY[name] = (OracleSpec(name, params, expected, description), eval_fn, meta)


_register(
    "good2s", (), TWO_SIDED,
    "1/(3 - z1 - z2), bounded two-sided extender",
    _good2s_eval,
    OracleMeta(
        omega=(_I, _I),
        eps1=lambda x2: 0.9 * (2.0 - np.abs(x2)),
        z2_domain=lambda x1: Disc(0.0, 1.4),
        continuity=True,
        singular1=lambda z2: np.array([3.0 - np.asarray(z2, dtype=complex)]),
        singular2=lambda x1: np.array([3.0 - np.asarray(x1, dtype=complex)]),
        singular_margin=0.3,
        omega_margin=0.5,
        z2_radius_min=1.4,
    ),
)
_register(
    "entire", (), TWO_SIDED,
    "exp(z1 z2), entire",
    _entire_eval,
    OracleMeta(
        omega=(_I, _I),
        eps1=4.0,
        z2_domain=lambda x1: Disc(0.0, 4.0),
        continuity=True,
        omega_margin=0.5,
        z2_radius_min=4.0,
    ),
)
_register(
    "onesided", (_ONESIDED_HEIGHT,), ONE_SIDED_UP,
    "1/(z2 - z1 - i/2), pole sheet at Im z2 = 1/2 over real z1",
    _onesided_eval,
    OracleMeta(
        omega=(_I, _I),
        eps1=0.45,  # z1-pole of the slice sits at Im z1 = -1/2
        z2_domain=lambda x1: HalfDisc(0.0, 1.25, "upper"),
        continuity=True,
        singular1=lambda z2: np.array(
            [np.asarray(z2, dtype=complex) - 1j * _ONESIDED_HEIGHT]
        ),
        singular2=lambda x1: np.array(
            [np.asarray(x1, dtype=complex) + 1j * _ONESIDED_HEIGHT]
        ),
        singular_margin=0.1,
        omega_margin=0.5,
        z2_radius_min=1.25,
    ),
)
_register(
    "cordaro", (), NOT_TEMPERED,
    "x1 sin(x2/x1): entire per z2-slice, not tempered near x1 = 0",
    _cordaro_eval,
    OracleMeta(
        omega=(_I, _I),
        eps1=0.0,
        z2_domain=lambda x1: Disc(0.0, 50.0),
        continuity=True,
        singular1=lambda z2: np.zeros((1,) + np.asarray(z2).shape, dtype=complex),
        omega_margin=0.5,
        z2_radius_min=50.0,
    ),
)
_register(
    "flat", (), NOT_CR_EXTENDIBLE,
    "x1 x2 exp(-1/(x1^2+x2^2)): per-slice radius collapses at the origin",
    _flat_eval,
    OracleMeta(
        omega=(_I, _I),
        eps1=lambda x2: 0.9 * np.abs(x2),
        z2_domain=lambda x1: Disc(0.0, max(0.9 * abs(x1), 1e-12)),
        continuity=True,
        singular1=lambda z2: np.array([
            1j * np.asarray(z2, dtype=complex), -1j * np.asarray(z2, dtype=complex)
        ]),
        singular2=lambda x1: np.array([
            1j * np.asarray(x1, dtype=complex), -1j * np.asarray(x1, dtype=complex)
        ]),
        singular_margin=0.0,
        omega_margin=0.5,
        z2_radius_min=0.0,
    ),
)


def list_oracles():
    return [spec for spec, _, _ in (_REGISTRY[k] for k in sorted(_REGISTRY))]


def oracle(name: str) -> SeparateOracle:
    """Look up a registered oracle by name."""
    if name not in _REGISTRY:
        raise KeyError(f"unknown oracle {name!r}; registered: {sorted(_REGISTRY)}")
    spec, fn, meta = _REGISTRY[name]
    return SeparateOracle(name=spec.name, eval=fn, meta=meta, expected=spec.expected)


def temperedness_probe(orc: SeparateOracle, x2: float = 0.0, k_max: int = 8,
                       nu_max: int = 12) -> dict:
    """Growth of |f| along (1/nu^2, x2 + i/nu) against power laws |y|^{-k}.

    Least-squares fit of log|f| versus log(1/y); the verdict is not_tempered
    when the fitted exponent exceeds k_max or the log-log residuals trend
    superlinearly (the growth beats every fixed power).
    """
    nus = np.arange(2, nu_max + 1)
    ys = 1.0 / nus
    pts = [(1.0 / nu**2, complex(x2, 1.0 / nu)) for nu in nus]
    mags = np.array([abs(complex(orc.eval(p[0], p[1]))) for p in pts])
    logy = np.log(1.0 / ys)
    logf = np.log(np.maximum(mags, 1e-300))
    k_fit, intercept = np.polyfit(logy, logf, 1)
    resid = logf - (k_fit * logy + intercept)
    # superlinear growth shows as a convex residual trend
    second = np.diff(resid, 2)
    superlinear = second.size > 0 and float(np.mean(second)) > 0.05
    not_tempered = bool(k_fit > k_max or superlinear)
    return {
        "oracle": orc.name,
        "x2": float(x2),
        "nu": nus.tolist(),
        "abs_f": mags.tolist(),
        "fitted_k": float(k_fit),
        "k_max": int(k_max),
        "superlinear": superlinear,
        "verdict": NOT_TEMPERED if not_tempered else "tempered",
        "k": 0 if (not not_tempered and k_fit < 0.5) else (None if not_tempered else float(k_fit)),
    }


def radius_collapse_probe(orc: SeparateOracle, axis: int, path, n_coeffs: int = 384) -> dict:
    """Root-test radius of the per-slice series along a path of real points.

    For axis=2 the series is in z2 around the path point's x2 with the other
    coordinate frozen; quadrature circles use 95% of the declared per-slice
    radius, and trailing modes below the quadrature noise floor are dropped
    before the root test.  Verdict not_cr_extendible when the radius decays
    toward zero along the path.
    """
    if axis != 2:
        raise ValueError("only z2-slices are probed (axis=2)")
    estimates = []
    failures = []
    floor = 1e-13
    for p in path:
        x1, x2 = float(p[0]), float(p[1])
        dom = orc.meta.z2_domain(x1)
        r_c = 0.95 * dom.radius
        try:
            m = 4 * (n_coeffs + 1)
            theta = 2.0 * np.pi * np.arange(m) / m
            vals = np.asarray(
                orc.eval(np.full(m, x1), x2 + r_c * np.exp(1j * theta)), dtype=complex
            )
            if not np.all(np.isfinite(vals)):
                raise ValueError("oracle non-finite on the quadrature circle")
            modes = np.fft.fft(vals)[: n_coeffs + 1] / m
            scale = float(np.max(np.abs(vals)))
            resolved = np.abs(modes) >= floor * max(scale, 1e-300)
            keep = int(np.max(np.nonzero(resolved)[0])) if np.any(resolved) else 0
            # a polynomial drops from O(1) modes to rounding noise in one
            # step; an analytic slice decays geometrically into the floor
            nxt = np.abs(modes[keep + 1 : keep + 5])
            cliff = keep + 1 >= modes.size or float(np.max(nxt, initial=0.0)) <= 1e-6 * abs(
                modes[keep]
            )
            if cliff and keep + 8 < 0.75 * n_coeffs:
                estimates.append((p, float("inf")))
                continue
            from .taylor import TaylorSeries

            s = TaylorSeries(x2, modes[: keep + 1] * r_c ** -np.arange(keep + 1.0))
            window = s.order + 1 - max(1, int(np.floor(0.75 * s.order)))
            rad = radius_root_test(s) if window >= 8 else _short_radius(s)
            estimates.append((p, float(rad)))
        except Exception as exc:
            failures.append({"point": list(p), "error": str(exc)})
    radii = [r for _, r in estimates]
    collapsing = (
        len(radii) >= 2
        and all(b <= a * 1.05 for a, b in zip(radii[:-1], radii[1:]))
        and radii[-1] < 0.5 * radii[0]
    )
    return {
        "oracle": orc.name,
        "path": [list(p) for p in path],
        "radii": radii,
        "failures": failures,
        "verdict": NOT_CR_EXTENDIBLE if collapsing else "radius_bounded",
    }


def _short_radius(s):
    from .taylor import _root_test

    return _root_test(s.coeffs, 0.5)

"""Domain geometry: intervals, discs, half-discs, strips, cones and wedges.

All types are immutable values with open-set membership semantics (boundary
points excluded), except the half-disc which keeps its diameter, and the
wedge whose edge membership is opt-in via ``include_edge``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UPPER = "upper"
LOWER = "lower"
TWO_SIDED = "two_sided"


class GeometryError(ValueError):
    """Invalid geometric value or degenerate sampling request."""


@dataclass(frozen=True)
class Interval:
    """Open real interval (lo, hi)."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise GeometryError(f"interval needs lo < hi, got ({self.lo}, {self.hi})")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, t) -> bool:
        return bool(np.all((self.lo < np.real(t)) & (np.real(t) < self.hi) & (np.imag(t) == 0.0)))

    def shrink(self, factor: float) -> "Interval":
        half = 0.5 * self.length * factor
        return Interval(self.mid - half, self.mid + half)


@dataclass(frozen=True)
class Disc:
    """Open disc |z - center| < radius."""

    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise GeometryError(f"disc radius must be positive, got {self.radius}")

    def contains(self, z) -> bool:
        return bool(np.all(np.abs(np.asarray(z, dtype=complex) - self.center) < self.radius))


@dataclass(frozen=True)
class HalfDisc:
    """Half-disc |tau - center| < radius on one side of the real axis.

    The diameter is part of the set: membership is |tau - center| < radius
    and sign * Im(tau) >= 0.
    """

    center: float
    radius: float
    side: str = UPPER

    def __post_init__(self):
        if not self.radius > 0:
            raise GeometryError(f"half-disc radius must be positive, got {self.radius}")
        if self.side not in (UPPER, LOWER):
            raise GeometryError(f"half-disc side must be upper/lower, got {self.side!r}")

    def contains(self, z) -> bool:
        z = np.asarray(z, dtype=complex)
        sgn = 1.0 if self.side == UPPER else -1.0
        return bool(np.all((np.abs(z - self.center) < self.radius) & (sgn * np.imag(z) >= 0.0)))


@dataclass(frozen=True)
class Strip:
    """Rectangle real_extent x i(-height, height), or the one-sided half of it."""

    real_extent: Interval
    height: float
    side: str = TWO_SIDED

    def __post_init__(self):
        if not self.height > 0:
            raise GeometryError(f"strip height must be positive, got {self.height}")
        if self.side not in (TWO_SIDED, UPPER, LOWER):
            raise GeometryError(f"strip side must be two_sided/upper/lower, got {self.side!r}")

    def contains(self, z) -> bool:
        z = np.asarray(z, dtype=complex)
        x, y = np.real(z), np.imag(z)
        ok = (self.real_extent.lo < x) & (x < self.real_extent.hi)
        if self.side == TWO_SIDED:
            ok &= np.abs(y) < self.height
        elif self.side == UPPER:
            ok &= (0.0 < y) & (y < self.height)
        else:
            ok &= (-self.height < y) & (y < 0.0)
        return bool(np.all(ok))


@dataclass(frozen=True)
class Cone:
    """Open circular cone {y != 0 : angle(y, axis) < aperture} in the y-plane."""

    axis: tuple
    aperture: float

    def __post_init__(self):
        norm = math.hypot(*self.axis)
        if norm == 0.0:
            raise GeometryError("cone axis must be a nonzero vector")
        if abs(norm - 1.0) > 1e-12:
            object.__setattr__(self, "axis", (self.axis[0] / norm, self.axis[1] / norm))
        if not 0.0 < self.aperture < math.pi / 2:
            raise GeometryError(f"cone aperture must lie in (0, pi/2), got {self.aperture}")

    def contains(self, y) -> bool:
        y = np.asarray(y, dtype=float)
        if y.ndim == 1:
            y = y[None, :]
        r = np.hypot(y[..., 0], y[..., 1])
        if np.any(r == 0.0):
            return False
        cosang = (y[..., 0] * self.axis[0] + y[..., 1] * self.axis[1]) / r
        ang = np.arccos(np.clip(cosang, -1.0, 1.0))
        return bool(np.all(ang < self.aperture))


@dataclass(frozen=True)
class Wedge:
    """Edge rectangle + i (cone truncated by |y| < epsilon) in C^2."""

    edge: tuple  # (Interval, Interval)
    cone: Cone
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise GeometryError(f"wedge epsilon must be positive, got {self.epsilon}")
        if len(self.edge) != 2 or not all(isinstance(e, Interval) for e in self.edge):
            raise GeometryError("wedge edge must be a pair of Intervals")

    def contains(self, p, include_edge: bool = False) -> bool:
        """Membership of p = (z1, z2); include_edge admits y = 0 over the closed edge."""
        z1, z2 = complex(p[0]), complex(p[1])
        x_ok = self.edge[0].contains(z1.real) and self.edge[1].contains(z2.real)
        y = (z1.imag, z2.imag)
        r = math.hypot(*y)
        if r == 0.0:
            return bool(include_edge and x_ok)
        return bool(x_ok and r < self.epsilon and self.cone.contains(y))


def contains(domain, p, **kw) -> bool:
    """Membership test dispatching on the geometry type."""
    return domain.contains(p, **kw)


def angle_between(u, v) -> float:
    du = math.hypot(*u)
    dv = math.hypot(*v)
    c = (u[0] * v[0] + u[1] * v[1]) / (du * dv)
    return math.acos(max(-1.0, min(1.0, c)))


def is_proper_subcone(inner: Cone, outer: Cone) -> bool:
    """True iff closure(inner) minus the origin lies inside outer."""
    return angle_between(inner.axis, outer.axis) + inner.aperture < outer.aperture


def _axis_points(iv: Interval, n: int) -> np.ndarray:
    # n interior points of a uniform subdivision into n+1 cells: endpoints excluded.
    return np.linspace(iv.lo, iv.hi, n + 2)[1:-1]


def _pair_resolution(resolution):
    if np.isscalar(resolution):
        return int(resolution), int(resolution)
    nx, ny = resolution
    return int(nx), int(ny)


def sample_grid(domain, resolution) -> np.ndarray:
    """Deterministic uniform grid of interior points of the domain.

    Intervals return real arrays; discs, half-discs and strips return complex
    arrays; cones return (n, 2) direction samples with |y| < 1; wedges return
    (n, 2) complex points.
    """
    if isinstance(domain, Interval):
        n = int(resolution)
        if n < 2:
            raise GeometryError("resolution must be >= 2 per axis")
        return _axis_points(domain, n)

    nx, ny = _pair_resolution(resolution)
    if nx < 2 or ny < 2:
        raise GeometryError("resolution must be >= 2 per axis")

    if isinstance(domain, Disc):
        c, r = domain.center, domain.radius
        xs = _axis_points(Interval(c.real - r, c.real + r), nx)
        ys = _axis_points(Interval(c.imag - r, c.imag + r), ny)
        pts = (xs[:, None] + 1j * ys[None, :]).ravel()
        pts = pts[np.abs(pts - c) < r]
        if pts.size == 0:
            raise GeometryError("degenerate domain: no interior grid points")
        return pts

    if isinstance(domain, HalfDisc):
        c, r = domain.center, domain.radius
        xs = _axis_points(Interval(c - r, c + r), nx)
        lo, hi = (0.0, r) if domain.side == UPPER else (-r, 0.0)
        ys = _axis_points(Interval(lo, hi), ny)
        pts = (xs[:, None] + 1j * ys[None, :]).ravel()
        pts = pts[np.abs(pts - c) < r]
        if pts.size == 0:
            raise GeometryError("degenerate domain: no interior grid points")
        return pts

    if isinstance(domain, Strip):
        xs = _axis_points(domain.real_extent, nx)
        if domain.side == TWO_SIDED:
            ys = _axis_points(Interval(-domain.height, domain.height), ny)
        elif domain.side == UPPER:
            ys = _axis_points(Interval(0.0, domain.height), ny)
        else:
            ys = _axis_points(Interval(-domain.height, 0.0), ny)
        return (xs[:, None] + 1j * ys[None, :]).ravel()

    if isinstance(domain, Cone):
        # directions within the unit truncation {y in cone, |y| < 1}
        angs = _axis_points(Interval(-domain.aperture, domain.aperture), nx)
        rads = _axis_points(Interval(0.0, 1.0), ny)
        base = math.atan2(domain.axis[1], domain.axis[0])
        out = np.empty((nx * ny, 2))
        k = 0
        for a in angs:
            for r in rads:
                out[k] = (r * math.cos(base + a), r * math.sin(base + a))
                k += 1
        return out

    if isinstance(domain, Wedge):
        x1 = _axis_points(domain.edge[0], nx)
        x2 = _axis_points(domain.edge[1], nx)
        ys = sample_grid(domain.cone, (ny, ny)) * domain.epsilon
        ys = ys[np.hypot(ys[:, 0], ys[:, 1]) < domain.epsilon]
        pts = []
        for a in x1:
            for b in x2:
                for y in ys:
                    pts.append((a + 1j * y[0], b + 1j * y[1]))
        if not pts:
            raise GeometryError("degenerate domain: no interior grid points")
        return np.asarray(pts, dtype=complex)

    raise GeometryError(f"cannot sample a {type(domain).__name__}")


# -- JSON round trip ---------------------------------------------------------

def to_json(obj) -> dict:
    """Serialize a geometry value to a JSON-compatible dict with a kind tag."""
    if isinstance(obj, Interval):
        return {"kind": "interval", "lo": obj.lo, "hi": obj.hi}
    if isinstance(obj, Disc):
        return {"kind": "disc", "center": [obj.center.real, obj.center.imag], "radius": obj.radius}
    if isinstance(obj, HalfDisc):
        return {"kind": "half_disc", "center": [obj.center, 0.0], "radius": obj.radius, "side": obj.side}
    if isinstance(obj, Strip):
        return {
            "kind": "strip",
            "real_extent": to_json(obj.real_extent),
            "height": obj.height,
            "side": obj.side,
        }
    if isinstance(obj, Cone):
        return {"kind": "cone", "axis": [obj.axis[0], obj.axis[1]], "aperture": obj.aperture}
    if isinstance(obj, Wedge):
        return {
            "kind": "wedge",
            "edge": [to_json(obj.edge[0]), to_json(obj.edge[1])],
            "cone": to_json(obj.cone),
            "epsilon": obj.epsilon,
        }
    raise GeometryError(f"cannot serialize a {type(obj).__name__}")


def from_json(doc: dict):
    """Inverse of :func:`to_json`."""
    kind = doc.get("kind")
    if kind == "interval":
        return Interval(float(doc["lo"]), float(doc["hi"]))
    if kind == "disc":
        re, im = doc["center"]
        return Disc(complex(re, im), float(doc["radius"]))
    if kind == "half_disc":
        return HalfDisc(float(doc["center"][0]), float(doc["radius"]), doc["side"])
    if kind == "strip":
        return Strip(from_json(doc["real_extent"]), float(doc["height"]), doc["side"])
    if kind == "cone":
        return Cone(tuple(doc["axis"]), float(doc["aperture"]))
    if kind == "wedge":
        return Wedge(
            (from_json(doc["edge"][0]), from_json(doc["edge"][1])),
            from_json(doc["cone"]),
            float(doc["epsilon"]),
        )
    raise GeometryError(f"unknown geometry kind {kind!r}")

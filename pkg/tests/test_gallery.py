from __future__ import annotations

import math

import numpy as np
import pytest

from crwedge import gallery
from crwedge.taylor import coeffs_from_oracle, evaluate


CLOSED_FORMS = {
    "good2s": lambda z1, z2: 1.0 / (3.0 - z1 - z2),
    "entire": lambda z1, z2: np.exp(z1 * z2),
    "onesided": lambda z1, z2: 1.0 / (z2 - z1 - 0.5j),
    "cordaro": lambda z1, z2: 0.0 if z1 == 0 else z1 * np.sin(z2 / z1),
    "flat": lambda z1, z2: 0.0 if z1 == z2 == 0 else z1 * z2 * np.exp(-1.0 / (z1**2 + z2**2)),
}

RATIONAL_POINTS = [
    (p / 8.0, q / 8.0)
    for p in (-7, -5, -3, -1, 1, 3, 5)
    for q in (-6, -2, 2, 6)
][:25]


def test_registry_lists_five():
    names = [s.name for s in gallery.list_oracles()]
    assert names == ["cordaro", "entire", "flat", "good2s", "onesided"]


def test_unknown_name():
    with pytest.raises(KeyError):
        gallery.oracle("mystery")


@pytest.mark.parametrize("name", sorted(CLOSED_FORMS))
def test_eval_matches_closed_form_on_rational_points(name):
    orc = gallery.oracle(name)
    assert len(RATIONAL_POINTS) == 25
    for x1, x2 in RATIONAL_POINTS:
        want = complex(CLOSED_FORMS[name](x1, x2))
        assert abs(complex(orc.eval(x1, x2)) - want) <= 1e-12 * max(1.0, abs(want))


def test_good2s_at_origin():
    assert abs(gallery.oracle("good2s").eval(0, 0) - 1.0 / 3.0) < 1e-15


def test_cordaro_vanishes_on_axis():
    orc = gallery.oracle("cordaro")
    for x1 in (-0.7, -0.1, 0.0, 0.3, 1.0):
        assert orc.eval(x1, 0.0) == 0.0


def test_cordaro_continuity_bound():
    # |x1 sin(x2/x1)| <= |x1| on the reals
    orc = gallery.oracle("cordaro")
    rng = np.random.default_rng(0)
    for _ in range(200):
        x1, x2 = rng.uniform(-1, 1, 2)
        assert abs(orc.eval(x1, x2)) <= abs(x1) + 1e-15


def test_flat_diagonal_value():
    val = gallery.oracle("flat").eval(1.0, 1.0)
    assert abs(val - math.exp(-0.5)) < 1e-12
    assert abs(complex(val).real - 0.6065306597) < 1e-9


def test_flat_separately_real_analytic():
    # the extracted slice series reproduces slice values within its tail
    # bound on half the estimated radius
    orc = gallery.oracle("flat")
    for t in (0.6, 0.35):
        dom = orc.meta.z2_domain(t)
        s = coeffs_from_oracle(lambda z2: orc.eval(t, z2), 0.0, 0.8 * dom.radius,
                               96, 512, noise_floor=1e-13)
        from crwedge.taylor import radius_root_test

        r_est = radius_root_test(s, 0.5)
        for x2 in np.linspace(-0.5, 0.5, 7) * r_est:
            v, tail = evaluate(s, x2)
            assert abs(v - orc.eval(t, x2)) <= tail + 1e-12


class TestTemperedness:
    def test_cordaro_not_tempered(self):
        rep = gallery.temperedness_probe(gallery.oracle("cordaro"), x2=0.0, nu_max=12)
        assert rep["verdict"] == "not_tempered"
        # |f| at nu = 10 equals sinh(10)/100
        i = rep["nu"].index(10)
        assert abs(rep["abs_f"][i] - math.sinh(10) / 100.0) < 1e-6
        assert abs(rep["abs_f"][i] - 110.1323) < 1e-3

    def test_good2s_tempered(self):
        rep = gallery.temperedness_probe(gallery.oracle("good2s"))
        assert rep["verdict"] == "tempered"

    def test_constant_tempered_k0(self):
        from crwedge.continuation import OracleMeta, SeparateOracle
        from crwedge.geometry import Disc, Interval

        const = SeparateOracle(
            name="const",
            eval=lambda z1, z2: 1.5 + 0.0 * (np.asarray(z1) + np.asarray(z2)),
            meta=OracleMeta(
                omega=(Interval(-1, 1), Interval(-1, 1)),
                eps1=1.0,
                z2_domain=lambda x1: Disc(0.0, 2.0),
            ),
        )
        rep = gallery.temperedness_probe(const)
        assert rep["verdict"] == "tempered"
        assert rep["k"] == 0


class TestRadiusCollapse:
    def test_flat_collapse(self):
        path = [(0.5, 0.0), (0.25, 0.0), (0.125, 0.0)]
        rep = gallery.radius_collapse_probe(gallery.oracle("flat"), 2, path)
        assert rep["verdict"] == "not_cr_extendible"
        for (t, _), r in zip(path, rep["radii"]):
            assert abs(r - t) / t < 0.3
        assert rep["radii"][0] > rep["radii"][1] > rep["radii"][2]

    def test_good2s_bounded_below(self):
        rep = gallery.radius_collapse_probe(
            gallery.oracle("good2s"), 2, [(0.5, 0.0), (0.0, 0.0), (-0.5, 0.0)]
        )
        assert rep["verdict"] == "radius_bounded"
        assert all(r >= 1.0 for r in rep["radii"])

    def test_polynomial_slice_flag(self):
        from crwedge.continuation import OracleMeta, SeparateOracle
        from crwedge.geometry import Disc, Interval

        poly = SeparateOracle(
            name="poly",
            eval=lambda z1, z2: np.asarray(z1) ** 2 * np.asarray(z2)
            + np.asarray(z2) ** 3,
            meta=OracleMeta(
                omega=(Interval(-1, 1), Interval(-1, 1)),
                eps1=2.0,
                z2_domain=lambda x1: Disc(0.0, 2.0),
            ),
        )
        rep = gallery.radius_collapse_probe(poly, 2, [(0.5, 0.0), (0.25, 0.0)])
        assert all(r == float("inf") for r in rep["radii"])
        assert rep["verdict"] == "radius_bounded"

    def test_extraction_failure_recorded_probe_continues(self):
        from crwedge.continuation import OracleMeta, SeparateOracle
        from crwedge.geometry import Disc, Interval

        def patchy(z1, z2):
            if np.any(np.abs(np.asarray(z1, dtype=complex) - 0.25) < 1e-9):
                raise RuntimeError("dead slice")
            return np.asarray(z2, dtype=complex) * 2.0

        orc = SeparateOracle(
            name="patchy",
            eval=patchy,
            meta=OracleMeta(
                omega=(Interval(-1, 1), Interval(-1, 1)),
                eps1=1.0,
                z2_domain=lambda x1: Disc(0.0, 1.0),
            ),
        )
        rep = gallery.radius_collapse_probe(orc, 2, [(0.5, 0.0), (0.25, 0.0)])
        assert len(rep["failures"]) == 1
        assert len(rep["radii"]) == 1

from __future__ import annotations

import json

import numpy as np
import pytest

from crwedge import continuation as co
from crwedge import gallery
from crwedge.geometry import Disc, Interval


def make_poly_oracle():
    return co.SeparateOracle(
        name="poly",
        eval=lambda z1, z2: np.asarray(z1, dtype=complex) ** 2 * np.asarray(z2, dtype=complex)
        + np.asarray(z2, dtype=complex) ** 3
        + 0.5,
        meta=co.OracleMeta(
            omega=(Interval(-1, 1), Interval(-1, 1)),
            eps1=2.0,
            z2_domain=lambda x1: Disc(0.0, 2.0),
            omega_margin=0.5,
            z2_radius_min=2.0,
        ),
    )


class TestJobValidation:
    def test_sigma_guard(self):
        with pytest.raises(co.ConfigError):
            co.ContinuationJob(
                oracle=gallery.oracle("entire"), mode="one_sided_up",
                delta=0.2, sigma=0.05, alpha=0.25,
            )

    def test_alpha_zero_rejected(self):
        with pytest.raises(co.ConfigError):
            co.job_from_json(
                {"oracle": "entire", "mode": "two_sided", "delta": 0.2,
                 "sigma": 0.02, "alpha": 0},
                gallery.oracle,
            )

    def test_unknown_field_rejected(self):
        with pytest.raises(co.ConfigError):
            co.job_from_json(
                {"oracle": "entire", "mode": "two_sided", "delta": 0.2,
                 "sigma": 0.02, "alpha": 0.25, "bogus": 1},
                gallery.oracle,
            )

    def test_unknown_oracle_rejected(self):
        with pytest.raises(co.ConfigError):
            co.job_from_json(
                {"oracle": "nope", "mode": "two_sided", "delta": 0.2,
                 "sigma": 0.02, "alpha": 0.25},
                gallery.oracle,
            )

    def test_mode_mismatch(self):
        job = co.ContinuationJob(
            oracle=gallery.oracle("entire"), mode="two_sided",
            delta=0.2, sigma=0.02, alpha=0.25,
        )
        with pytest.raises(co.ConfigError):
            co.march(job)


class TestSlabScan:
    def test_good2s_full_interval(self):
        orc = gallery.oracle("good2s")
        slabs = co.bounded_slab_scan(orc, 1)
        best = co.widest_slab(slabs, 1)
        om = orc.meta.omega[0]
        assert best.interval.length > 0.9 * om.length
        # sampled sup on the kept slab really is below the bound
        assert best.bound >= 1.0 / (3.0 - 2.0)

    def test_constant_oracle(self):
        const = co.SeparateOracle(
            name="c",
            eval=lambda z1, z2: 2.5 + 0.0 * (np.asarray(z1) + np.asarray(z2)),
            meta=co.OracleMeta(
                omega=(Interval(-1, 1), Interval(-1, 1)),
                eps1=1.0,
                z2_domain=lambda x1: Disc(0.0, 1.0),
                z2_radius_min=1.0,
            ),
        )
        slabs = co.bounded_slab_scan(const, 1, l_schedule=[2.5])
        assert len(slabs) == 1
        assert slabs[0].interval.length > 1.5

    def test_flat_axis2_excludes_origin(self):
        slabs = co.bounded_slab_scan(gallery.oracle("flat"), 2)
        top = max(s.bound for s in slabs)
        for s in slabs:
            if s.bound == top:
                assert not s.interval.contains(0.0)

    def test_scan_failure_carries_sups(self):
        orc = gallery.oracle("good2s")
        with pytest.raises(co.ScanFailure) as err:
            co.bounded_slab_scan(orc, 1, l_schedule=[1e-6])
        assert err.value.sup_field is not None


class TestSeedQuadrant:
    def test_product_oracle_exact(self):
        prod = co.SeparateOracle(
            name="prod",
            eval=lambda z1, z2: np.asarray(z1, dtype=complex)
            * np.asarray(z2, dtype=complex),
            meta=co.OracleMeta(
                omega=(Interval(-1, 1), Interval(-1, 1)),
                eps1=2.0,
                z2_domain=lambda x1: Disc(0.0, 2.0),
                omega_margin=0.5,
                z2_radius_min=2.0,
            ),
        )
        slabs = co.bounded_slab_scan(prod, 1)
        out = co.seed_quadrant(prod, slabs, 0.15, {"n_x": 3, "n_lam": 3})
        for i, a in enumerate(out["x1"]):
            for j, b in enumerate(out["x2"]):
                for k, l1 in enumerate(out["lam1"]):
                    for m, l2 in enumerate(out["lam2"]):
                        want = (a + 1j * l1) * (b + 1j * l2)
                        assert abs(out["values"][i, j, k, m] - want) < 1e-8

    def test_zero_lambda_equals_oracle(self):
        orc = gallery.oracle("good2s")
        out = co.seed_quadrant(orc, co.bounded_slab_scan(orc, 1), 0.1,
                               {"n_x": 3, "n_lam": 2})
        for i, a in enumerate(out["x1"]):
            for j, b in enumerate(out["x2"]):
                assert abs(out["values"][i, j, 0, 0] - orc.eval(a, b)) < 1e-12

    def test_good2s_closed_form(self):
        orc = gallery.oracle("good2s")
        out = co.seed_quadrant(orc, co.bounded_slab_scan(orc, 1), 0.15,
                               {"n_x": 5, "n_lam": 3})
        worst = 0.0
        for i, a in enumerate(out["x1"]):
            for j, b in enumerate(out["x2"]):
                for k, l1 in enumerate(out["lam1"]):
                    for m, l2 in enumerate(out["lam2"]):
                        want = orc.eval(a + 1j * l1, b + 1j * l2)
                        worst = max(worst, abs(out["values"][i, j, k, m] - want))
        assert worst < 1e-7

    def test_containment_error_names_theta(self):
        orc = gallery.oracle("onesided")
        ev = co.SeedEvaluator(orc, 256)
        bad = np.array([[0.0 + 0.0j, 0.0 + 0.4j]])  # lambda2 * peak exceeds the sheet
        with pytest.raises(co.ContainmentError) as err:
            ev.check(bad)
        assert err.value.theta is not None


class TestTwoSided:
    def test_good2s_atlas(self, good2s_atlas):
        atlas = good2s_atlas
        assert len(atlas.charts) == 1
        ch = atlas.charts[0]
        assert ch.cert is not None and ch.cert.passed
        assert atlas.diagnostics["certs"]["upper"]["pass"]
        assert atlas.diagnostics["certs"]["lower"]["pass"]
        assert ch.z2_radius == 0.75
        f = gallery.oracle("good2s").eval
        worst = 0.0
        for x in ch.x1_grid[::20]:
            for y in (ch.rows[1], 0.0, ch.rows[-2]):
                for z2 in (0.4, -0.3 + 0.2j, 0.5j, -0.45 - 0.35j):
                    v, _, _ = co.evaluate_extension(atlas, (complex(x, y), z2))
                    worst = max(worst, abs(v - f(complex(x, y), z2)) / abs(f(complex(x, y), z2)))
        assert worst < 1e-6

    def test_polynomial_oracle_exact(self):
        job = co.ContinuationJob(
            oracle=make_poly_oracle(), mode="two_sided",
            delta=0.2, sigma=0.02, alpha=0.25,
            grids={"x1_points": 41, "probe_points": 9},
        )
        atlas = co.two_sided_fill(job)
        ch = atlas.charts[0]
        f = job.oracle.eval
        for x in ch.x1_grid[::10]:
            for z2 in (0.3, -0.2 + 0.4j, 0.6j):
                v, _, _ = co.evaluate_extension(atlas, (complex(x, 0), z2))
                assert abs(v - f(x, z2)) < 1e-9

    def test_flat_reports_nonextendibility_at_origin(self):
        job = co.ContinuationJob(
            oracle=gallery.oracle("flat"), mode="two_sided",
            delta=0.2, sigma=0.02, alpha=0.25,
            grids={"x1_points": 41, "probe_points": 9},
        )
        with pytest.raises(co.AtlasError) as err:
            co.two_sided_fill(job)
        unc = err.value.diagnostics.get("uncovered_x1", [])
        assert any(a < 0.0 < b for a, b in unc)

    def test_real_edge_matches_oracle(self, good2s_atlas):
        f = gallery.oracle("good2s").eval
        ch = good2s_atlas.charts[0]
        for x in ch.x1_grid[::40]:
            for t in (-0.5, 0.0, 0.3):
                v, cid, tail = co.evaluate_extension(good2s_atlas, (complex(x), complex(t)))
                assert abs(v - f(x, t)) < 1e-6


class TestMarch:
    def test_entire_completes(self, entire_march):
        atlas = entire_march
        d = atlas.diagnostics
        assert d["reach"] > 1.0
        assert not d["failures"]
        certs = [c.cert for c in atlas.charts if c.cert]
        assert len(certs) == 2 * d["n_steps"]
        assert all(c.passed for c in certs)

    def test_onesided_completes(self, onesided_march):
        d = onesided_march.diagnostics
        assert d["reach"] > 1.0 and not d["failures"]
        assert all(c.cert.passed for c in onesided_march.charts if c.cert)

    def test_heights_shrink_geometrically(self, onesided_march):
        h = onesided_march.diagnostics["heights"]
        assert all(b < a for a, b in zip(h[:-1], h[1:]))
        assert h[3] < h[0] * 1e-3

    def test_chart_overlap_agreement(self, entire_march, onesided_march):
        for atlas in (entire_march, onesided_march):
            assert atlas.overlaps
            assert max(o["worst"] for o in atlas.overlaps) < 1e-5

    def test_evaluation_matches_closed_form(self, entire_march, onesided_march):
        for atlas, name in ((entire_march, "entire"), (onesided_march, "onesided")):
            f = gallery.oracle(name).eval
            worst = 0.0
            for c in atlas.charts:
                x = c.x1_grid[c.x1_grid.size // 3]
                for y in (0.0, c.rows[-1]):
                    for off in (0.4 * c.z2_radius, -0.4j * c.z2_radius + 0.1 * c.z2_radius):
                        z1, z2 = complex(x, y), c.z2_center + off
                        v, _, _ = co.evaluate_extension(atlas, (z1, z2))
                        worst = max(worst, abs(v - f(z1, z2)) / max(1.0, abs(f(z1, z2))))
            assert worst < 1e-6

    def test_march_reaches_past_one(self, onesided_march):
        # charts exist with |Re z2| beyond the unit interval
        res = [abs(c.z2_center.real) for c in onesided_march.charts]
        assert max(res) > 1.0

    def test_partial_atlas_on_failure(self):
        # an oracle whose real-axis radius dies at the clause: pole height
        # below delta makes the shifted diameter clause fail at step 1
        bad = co.SeparateOracle(
            name="lowpole",
            eval=lambda z1, z2: 1.0
            / (np.asarray(z2, dtype=complex) - np.asarray(z1, dtype=complex) - 0.23j),
            meta=co.OracleMeta(
                omega=(Interval(-1, 1), Interval(-1, 1)),
                eps1=0.2,
                z2_domain=lambda x1: co.HalfDisc(0.0, 1.25, "upper"),
                singular1=lambda z2: np.array(
                    [np.asarray(z2, dtype=complex) - 0.23j]
                ),
                singular2=lambda x1: np.array(
                    [np.asarray(x1, dtype=complex) + 0.23j]
                ),
                singular_margin=0.01,
                omega_margin=0.5,
                z2_radius_min=1.25,
            ),
        )
        job = co.ContinuationJob(
            oracle=bad, mode="one_sided_up", delta=0.2, sigma=0.02, alpha=0.25,
            grids={"x1_points": 41, "probe_points": 9},
        )
        atlas = co.march(job)
        assert atlas.diagnostics["failures"]
        failed = [c for c in atlas.charts if c.cert and not c.cert.passed]
        assert failed  # partial atlas keeps the failing certificate


class TestEvaluate:
    def test_coverage_error(self, entire_march):
        with pytest.raises(co.CoverageError) as err:
            co.evaluate_extension(entire_march, (0.0 + 0.0j, 5.0 + 5.0j))
        assert err.value.nearest is not None

    def test_tail_bound_reported(self, entire_march):
        c = entire_march.charts[0]
        z = (complex(c.x1_grid[5], 0.0), c.z2_center + 0.3 * c.z2_radius)
        v, cid, tail = co.evaluate_extension(entire_march, z)
        assert tail >= 0.0 and np.isfinite(tail)

    def test_alpha_monotone_chart_radius(self):
        # decreasing alpha never shrinks the chart radius delta' = (1-alpha) delta
        radii = [(1 - a) * 0.2 for a in (0.4, 0.25, 0.1)]
        assert radii[0] < radii[1] < radii[2]


class TestWedge:
    def test_needs_two_atlases(self, entire_march):
        with pytest.raises(co.ConfigError):
            co.assemble_wedge([entire_march])

    def test_fit_positive_aperture(self, entire_schedule):
        wedge, report = co.assemble_wedge(entire_schedule)
        assert wedge is not None
        assert report["aperture"] > 0.0
        assert report["label"] == "pre-Kashiwara fitted cone"
        assert entire_schedule[0].wedge is wedge

    def test_onesided_epsilon_below_pole(self, onesided_march):
        job = co.ContinuationJob(
            oracle=gallery.oracle("onesided"), mode="one_sided_up",
            delta=0.1, sigma=0.01, alpha=0.25,
        )
        second = co.march(job)
        wedge, report = co.assemble_wedge([onesided_march, second])
        assert wedge is not None
        # coverage cannot cross the pole sheet at height 1/2
        assert wedge.epsilon < 0.5


class TestDeterminism:
    def test_byte_identical_atlases(self):
        def run():
            job = co.ContinuationJob(
                oracle=gallery.oracle("entire"), mode="one_sided_up",
                delta=0.2, sigma=0.02, alpha=0.25,
                grids={"x1_points": 41, "probe_points": 9},
            )
            return json.dumps(co.march(job).to_json(), sort_keys=True)

        assert run() == run()

    def test_json_roundtrip(self, onesided_march):
        doc = onesided_march.to_json()
        back = co.ExtensionAtlas.from_json(doc)
        z = (complex(onesided_march.charts[1].x1_grid[7], 0.0),
             onesided_march.charts[1].z2_center + 0.05)
        v1, c1, t1 = co.evaluate_extension(onesided_march, z)
        v2, c2, t2 = co.evaluate_extension(back, z)
        assert v1 == v2 and c1 == c2 and t1 == t2

from __future__ import annotations

import pytest

from crwedge import continuation as co
from crwedge import gallery


@pytest.fixture(scope="session")
def good2s_atlas():
    job = co.ContinuationJob(
        oracle=gallery.oracle("good2s"), mode="two_sided",
        delta=0.2, sigma=0.02, alpha=0.25,
        grids={"rows_per_chart": 11},
    )
    return co.two_sided_fill(job)


@pytest.fixture(scope="session")
def entire_march():
    job = co.ContinuationJob(
        oracle=gallery.oracle("entire"), mode="one_sided_up",
        delta=0.2, sigma=0.02, alpha=0.25,
    )
    return co.march(job)


@pytest.fixture(scope="session")
def onesided_march():
    job = co.ContinuationJob(
        oracle=gallery.oracle("onesided"), mode="one_sided_up",
        delta=0.2, sigma=0.02, alpha=0.25,
    )
    return co.march(job)


@pytest.fixture(scope="session")
def entire_schedule(entire_march):
    atlases = [entire_march]
    for delta in (0.1, 0.05, 0.025):
        job = co.ContinuationJob(
            oracle=gallery.oracle("entire"), mode="one_sided_up",
            delta=delta, sigma=delta / 10, alpha=0.25,
        )
        atlases.append(co.march(job))
    return atlases

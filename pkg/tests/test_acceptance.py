"""The ten acceptance criteria at their stated bounds.

Each test runs one suite, prints a PASS/FAIL line and checks the time limit.
"""

import pytest

from equicyclic.suites import SUITES

CRITERIA = [
    (1, "burnside", {"nmax": 36}, 10),
    (2, "box", {"ns": (4, 6, 9, 12), "pairs": 50}, 120),
    (3, "ro-zero", {"ns": (4, 6, 9, 15), "count": 25}, 300),
    (4, "hz-cone", {"ns": (4, 8, 9, 12, 36), "max_dim": 8}, 600),
    (5, "ha-cone", {"prime_powers": (3, 4, 8, 9), "square_free": (6, 15), "max_dim": 6}, 900),
    (6, "gold", {"ns": (4, 6, 9, 12)}, 60),
    (7, "geofix", {"ns": (6, 12, 30), "max_degree": 10}, 300),
    (8, "negative-cone", {"ns": (9, 27, 4, 8), "bound": 5}, 900),
    (9, "many-zeros", {"ns": (15, 35), "per_case": 10}, 600),
    (10, "torsion-free", {"ns": (4, 9, 6), "count": 40}, 300),
]


@pytest.mark.parametrize("num,suite,kw,limit", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(num, suite, kw, limit, capsys):
    res = SUITES[suite](**kw)
    ok = res.ok and res.seconds < limit
    with capsys.disabled():
        print("\n%s criterion %d (%s): %d checks, %d failures, %.1fs (limit %ds)" % (
            "PASS" if ok else "FAIL", num, suite, res.checked, len(res.failures),
            res.seconds, limit))
    assert res.checked > 0
    assert res.ok, res.failures[:5]
    assert res.seconds < limit

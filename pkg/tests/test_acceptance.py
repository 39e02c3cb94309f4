"""All acceptance criteria at their stated tolerances, one line per criterion."""

import pytest

from secant_dynamics import acceptance


@pytest.mark.parametrize("name", list(acceptance.CHECKS))
def test_criterion(name):
    res = acceptance.run_check(name)
    print(res.line())
    assert res.passed, res.line()
    limit = acceptance.TIME_LIMITS.get(name)
    if limit is not None:
        assert res.seconds <= limit, res.line()


def test_whole_suite_runs_within_a_minute():
    import io

    results = acceptance.run_all(out=io.StringIO())
    assert all(r.passed for r in results)
    assert sum(r.seconds for r in results) < 60.0

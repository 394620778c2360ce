"""The ten end-to-end acceptance criteria, one test each.

Each test prints its one-line pass/fail summary and asserts the
criterion outcome at the stated tolerances.  Shared artifacts (the 513^2
oracle scans, the 1D profile, the 257^2 box field, the blow-down table)
are computed once per session.
"""

import pytest

from pslab import acceptance


@pytest.fixture(scope="session")
def ctx():
    return acceptance.Context()


def _run(fn, ctx):
    res = fn(ctx)
    print()
    print(res.summary())
    detail = "; ".join(
        f"{label}: value {value!r}, bound {bound!r}"
        for label, ok, value, bound in res.checks if not ok)
    assert res.passed, detail


@pytest.mark.parametrize("fn", acceptance.CRITERIA,
                         ids=[f"criterion_{i}" for i in range(1, 11)])
def test_criterion(fn, ctx):
    _run(fn, ctx)

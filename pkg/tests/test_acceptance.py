"""Acceptance gate: every check at its stated limit, one line each."""

import pytest

from orm.acceptance import CHECKS, run_all

RESULTS: dict = {}


@pytest.fixture(scope="module")
def results():
    if not RESULTS:
        for r in run_all():
            RESULTS[r.number] = r
    return RESULTS


@pytest.mark.parametrize("number", [c[0] for c in CHECKS],
                         ids=[f"{c[0]:02d}-{c[1].replace(' ', '-')}" for c in CHECKS])
def test_acceptance(results, number):
    r = results[number]
    print(r.line())
    for d in r.details:
        print("     ", d)
    assert r.passed, "\n".join(str(d) for d in r.details)

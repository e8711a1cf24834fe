"""Acceptance criteria 1-9, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line (shown even under
output capture).  Tolerances are exact equality throughout; the only numeric
budgets are 600 s for criterion 1 with reduction and 60 s per torus knot.
The same checks run from the command line with ``khlab reproduce``.
"""

import pytest

from khlab import acceptance


@pytest.fixture(scope="module")
def report(request):
    def emit(result):
        with request.config.pluginmanager.get_plugin("capturemanager").global_and_fixture_disabled():
            print("\n" + result.line())
        return result

    return emit


def check(result):
    assert result.passed, f"{result.line()} failures: {result.failures[:5]}"


def test_criterion_1_dimension_law(report):
    result = report(acceptance.criterion_1())
    assert acceptance.DIMENSION_BUDGET == 600.0
    check(result)


def test_criterion_2_main_theorem(report):
    check(report(acceptance.criterion_2()))


def test_criterion_3_bar_natan_equals_lee(report):
    check(report(acceptance.criterion_3()))


def test_criterion_4_torus_knots(report):
    result = report(acceptance.criterion_4())
    assert acceptance.TORUS_BUDGET == 60.0
    assert {k: v[2] for k, v in result.data.items()} == {"T(2,3)": 2, "T(2,5)": 4, "T(2,7)": 6, "T(3,4)": 6}
    check(result)


def test_criterion_5_degenerate_theory(report):
    check(report(acceptance.criterion_5()))


def test_criterion_6_torsion(report):
    result = report(acceptance.criterion_6())
    assert 2 in [o for orders in result.data["3_1 khovanov"].values() for o in orders]
    check(result)


def test_criterion_7_reidemeister_invariance(report):
    check(report(acceptance.criterion_7()))


def test_criterion_8_oracle_equivalence(report):
    check(report(acceptance.criterion_8()))


def test_criterion_9_structural_suites(report):
    check(report(acceptance.criterion_9()))

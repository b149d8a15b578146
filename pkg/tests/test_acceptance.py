"""Acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line (also collected into the terminal summary)
and then every measured quantity against its tolerance.
"""

import pytest

from ellipsoid_traj import acceptance

from conftest import ACCEPTANCE_LINES

CRITERIA = {
    1: ("rotation isometry", acceptance.criterion_1),
    2: ("closed form vs exponential", acceptance.criterion_2),
    3: ("mixed-product identity", acceptance.criterion_3),
    4: ("frame equations", acceptance.criterion_4),
    5: ("Lorentz matrix", acceptance.criterion_5),
    6: ("curvature ODE: tanh branch and axis trajectories", acceptance.criterion_6),
    7: ("conservation on magnetic trajectories", acceptance.criterion_7),
    8: ("cot identity and negative control", acceptance.criterion_8),
    9: ("frame_integrate round trip", acceptance.criterion_9),
    10: ("isometry invariance of k_g", acceptance.criterion_10),
    11: ("family identities", acceptance.criterion_11),
    12: ("round-sphere oracle equivalence", acceptance.criterion_12),
    13: ("recorded discrepancy in the circle report", acceptance.criterion_13),
    14: ("gallery reproduction", acceptance.criterion_14),
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    title, fn = CRITERIA[number]
    report = fn()
    worst = max(report.checks, key=lambda c: (not c.passed, c.value / c.tolerance if c.mode == "max" and c.tolerance else 0))
    line = f"{'PASS' if report.passed else 'FAIL'}  criterion {number:2d}: {title}  [worst: {worst.line()}]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    for check in report.checks:
        print("    " + check.line())
    assert report.passed, report.format()

"""Acceptance gate: every criterion at its stated tolerance.

Run with `pytest -s tests/test_acceptance.py` to see the one-line
pass/fail report per criterion (the same table `twinprep verify`
prints).
"""

import pytest

from twinprep import acceptance

IDS = [cid for cid, _, _, _ in acceptance.CRITERIA]


@pytest.mark.parametrize("cid", IDS)
def test_criterion(cid):
    result = acceptance.run_criteria([cid])[0]
    status = "PASS" if result.passed else "FAIL"
    print(f"[{status}] criterion {result.cid:2d} ({result.seconds:6.2f}s): "
          f"{result.label} -- {result.detail}")
    assert result.passed, f"criterion {cid}: {result.detail}"

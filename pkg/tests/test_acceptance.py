"""Acceptance criteria 1-9, one test each; every test prints a PASS/FAIL line."""

import pytest

from trustlogic.acceptance import CASES, CRITERIA


def _run(n):
    result = CASES[CRITERIA[n]]()
    line = f"criterion {n} [{result.case_id}]: {'PASS' if result.ok else 'FAIL'} {result.detail}"
    print(line)
    return result, line


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, acceptance_log):
    result, line = _run(n)
    acceptance_log.append(line)
    assert result.ok, line


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        _run(n)

"""
Unit tests for the identity suite.
"""

import sys
from pathlib import Path
from unittest.mock import patch

import pytest  # type: ignore[import-untyped]

sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from core.verify import IdentityCheck, VerifyReport, constants_of, identity_suite, run_identities
from utils.error_handler import NotPrime, PrimeTooSmall


class TestIdentitySuite:
    """Test the identities at small primes."""

    @pytest.mark.parametrize("p", [5, 7])
    def test_all_pass(self, p):
        checks = identity_suite(p)
        failed = [c.line() for c in checks if not c.passed]
        assert failed == []

    def test_diagram_checks_included(self):
        names = {c.name for c in identity_suite(5)}
        assert {'hopf_killing', 'cancelling_pair', 'kink_calibration', 'first_kirby'} <= names
        assert 'jw_idempotent[2]' in names
        assert 'jw_idempotent[3]' not in names

    def test_narrow_guard_drops_wide_checks(self):
        checks = identity_suite(5, guard=2)
        names = {c.name for c in checks}
        assert 'hopf_killing' not in names
        assert 'cancelling_pair' not in names
        assert all(c.passed for c in checks)

    def test_exception_becomes_failure(self):
        with patch('core.verify.gauss_sum_product', side_effect=RuntimeError("boom")):
            checks = identity_suite(5)
        bad = [c for c in checks if not c.passed]
        assert [c.name for c in bad] == ['gauss_product_form']
        assert bad[0].detail == "RuntimeError: boom"

    def test_invalid_primes(self):
        with pytest.raises(NotPrime):
            identity_suite(9)
        with pytest.raises(PrimeTooSmall):
            identity_suite(3)


class TestReports:
    """Test check lines and report serialization."""

    def test_line(self):
        assert IdentityCheck('gauss_square', 5, True).line() == "PASS  p=5   gauss_square"
        assert IdentityCheck('F_product', 11, False, 'fails at 3').line() == \
            "FAIL  p=11  F_product  (fails at 3)"

    def test_run_identities(self):
        report = run_identities([5])
        assert report.ok
        data = report.to_dict()
        assert set(data['constants']) == {'5'}
        assert data['failed'] == 0
        assert data['passed'] == len(report.checks)
        assert report.duration >= 0

    def test_constants(self):
        constants = constants_of(5)
        assert set(constants) == {'g1', 'X2', 'C_plus', 'C_minus'}

    def test_failures(self):
        report = VerifyReport(checks=[IdentityCheck('a', 5, True), IdentityCheck('b', 5, False)])
        assert not report.ok
        assert [c.name for c in report.failures] == ['b']
        assert report.to_dict()['failed'] == 1


@pytest.mark.slow
class TestLargerPrimes:
    """The suite at p = 11 and 13."""

    @pytest.mark.parametrize("p", [11, 13])
    def test_all_pass(self, p):
        assert all(c.passed for c in identity_suite(p))

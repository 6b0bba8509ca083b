import json
import math

import pytest
from hypothesis import given

from jacobinv import (
    FIXTURES,
    InvalidInput,
    JacobiMatrix,
    PoleResidueForm,
    SpectralData,
    TolerancePolicy,
    validate_jacobi,
    validate_spectral_data,
)
from strategies import jacobi_matrices


def test_valid_matrix_has_no_violations():
    assert validate_jacobi(JacobiMatrix([2, 2], [-1])).ok


def test_positive_offdiag_is_reported():
    report = validate_jacobi(JacobiMatrix([2, 2], [1]))
    assert not report.ok
    assert any("offdiag must be negative" in v for v in report.violations)


def test_wrong_offdiag_length_is_reported():
    report = validate_jacobi(JacobiMatrix([2], [-1]))
    assert any("length(b) != N-1" in v for v in report.violations)


def test_nonfinite_entries_are_reported():
    assert not validate_jacobi(JacobiMatrix([math.nan, 1.0], [-1.0])).ok


def test_spectral_data_fixture_a_is_valid():
    D = SpectralData([1, 3], [0.634, 2.366], 0.0, 0)
    assert validate_spectral_data(D).ok


def test_tied_spectrum_is_rejected():
    D = SpectralData([1, 1 + 1e-15], [0.5, 2.0], 0.0, 0)
    report = validate_spectral_data(D)
    assert any("not strictly increasing at tolerance" in v for v in report.violations)


@pytest.mark.parametrize("theta_sq", [0.0, 1.0, 1.5, -0.1])
def test_theta_outside_open_unit_interval_is_rejected(theta_sq):
    D = SpectralData([1, 3], [0.634, 2.366], 0.0, 0, theta_sq)
    assert any("thetaSq out of (0,1)" in v for v in validate_spectral_data(D).violations)


def test_site_out_of_range_is_rejected():
    D = SpectralData([1, 3], [0.634, 2.366], 0.0, 2)
    assert any("n out of range" in v for v in validate_spectral_data(D).violations)


def test_size_mismatch_is_rejected():
    assert not validate_spectral_data(SpectralData([1, 3], [0.5], 0.0, 0)).ok


def test_tolerance_ordering_is_enforced():
    with pytest.raises(InvalidInput):
        TolerancePolicy(rel_tol=1e-12, eigen_tol=1e-9)


def test_spread_floor_is_one():
    assert TolerancePolicy.spread([0.1, -0.2]) == 1.0
    assert TolerancePolicy.spread([0.1], [-7.0]) == 7.0


def test_pole_residue_form_value_and_derivative():
    f = PoleResidueForm([1.0, 3.0], [0.5, 0.5])
    assert f(-1.0) == pytest.approx(0.375)
    assert f.derivative(0.0) == pytest.approx(0.5 + 0.5 / 9)
    assert f.total() == pytest.approx(1.0)


def test_pole_residue_form_rejects_negative_residue():
    assert PoleResidueForm([1.0, 3.0], [0.5, -0.5]).violations()


def test_missing_json_field_is_named():
    with pytest.raises(InvalidInput, match="'b'"):
        JacobiMatrix.from_dict({"n": 2, "a": [2, 2]})
    with pytest.raises(InvalidInput, match="'sigma_hat'"):
        SpectralData.from_dict({"sigma": [1], "K": 0, "n": 0})


@given(jacobi_matrices())
def test_matrix_json_round_trip_is_bit_exact(J):
    back = JacobiMatrix.from_dict(json.loads(json.dumps(J.to_dict())))
    assert back == J


def test_fixture_matrices_match_closed_forms():
    r2 = math.sqrt(2)
    assert FIXTURES["A"].J_tilde.b[0] == pytest.approx(-r2 / 2, abs=1e-15)
    assert FIXTURES["B"].J_tilde.a == (2.0, 0.5, 2.0)
    assert FIXTURES["D"].J_tilde.a == (1.5, 2.0)


def test_tie_rule_is_symmetric_and_nearly_transitive():
    tol = TolerancePolicy()
    s = 10.0
    x, y, z = 1.0, 1.0 + 0.9e-9 * s, 1.0 + 1.8e-9 * s
    assert tol.close(x, y, s) and tol.close(y, x, s)
    assert tol.close(y, z, s)
    assert abs(x - z) <= 2 * tol.rel_tol * s

import numpy as np
import pytest

from steroid.exceptions import RangeError, ShapeError
from steroid.schemas import Decomposition, SteroidReport, Term
from steroid.services.oracle import (
    characteristic_eigenvalues,
    monomial_rank,
    monomial_rank_oracle,
    naive_kron_power,
    verify_decomposition,
)
from steroid.services.steroid import decompose
from steroid.services.symtensor import new_symmetric, random_symmetric


def test_naive_kron_power():
    np.testing.assert_array_equal(naive_kron_power(np.array([1.0, 0.0]), 3), np.eye(8)[0])
    np.testing.assert_array_equal(naive_kron_power(np.array([1.0, 1.0]), 2), np.ones(4))
    with pytest.raises(RangeError):
        naive_kron_power(np.ones(2), 0)


def test_example_decomposition_verifies(example1):
    report = verify_decomposition(example1, decompose(example1))
    assert report.reconstruction_error <= 1e-10
    assert report.max_symmetry_violation <= 1e-12
    assert report.monomial_rank_bound_holds


def test_empty_decomposition_of_zero_tensor():
    dec = Decomposition(order=3, dim=2, residual_norm=0.0, report=SteroidReport(r_max=4))
    report = verify_decomposition(new_symmetric(3, 2, []), dec)
    assert report.reconstruction_error == 0.0
    assert report.max_symmetry_violation == 0.0


def test_perturbed_coefficient_shows_up(example1):
    dec = decompose(example1)
    first = dec.terms[0]
    terms = [Term(coefficient=first.coefficient + 0.1, vector=first.vector), *dec.terms[1:]]
    perturbed = dec.model_copy(update={"terms": terms})
    assert verify_decomposition(example1, perturbed).reconstruction_error == pytest.approx(0.1, abs=1e-10)


def test_shape_mismatch(example1):
    dec = Decomposition(order=4, dim=2, residual_norm=0.0, report=SteroidReport(r_max=5))
    with pytest.raises(ShapeError):
        verify_decomposition(example1, dec)


@pytest.mark.parametrize("dim, order, expected", [(2, 2, 3), (2, 3, 4), (3, 4, 15)])
def test_monomial_rank(dim, order, expected):
    rng = np.random.default_rng(5)
    assert monomial_rank(dim, order, expected + 5, rng) == expected
    assert monomial_rank_oracle(dim, order, trials=3)


def test_monomial_rank_refuses_large_problems():
    with pytest.raises(RangeError):
        monomial_rank(10, 6, 3, np.random.default_rng(0))


def test_characteristic_eigenvalues():
    np.testing.assert_allclose(characteristic_eigenvalues(np.diag([3.0, -1.0, 2.0])), [3.0, 2.0, -1.0], atol=1e-12)


def test_oracle_agrees_with_main_path():
    rng = np.random.default_rng(99)
    for _ in range(50):
        order = int(rng.integers(2, 5))
        dim = int(rng.integers(1, 4))
        t = random_symmetric(order, dim, rng)
        dec = decompose(t)
        report = verify_decomposition(t, dec)
        assert abs(report.reconstruction_error - dec.residual_norm) <= 1e-9

import numpy as np
import pytest

from steroid.exceptions import NumericError, OrderError, RangeError, SymmetryError
from steroid.schemas import DecomposeOptions, Decomposition, HeadMode, PurePowerSet, SteroidReport, SymTensor, Term
from steroid.services.eiglsq import lstsq, numerical_zero_mask, sym_eig
from steroid.services.oracle import naive_kron_power
from steroid.services.steroid import build_x, decompose, harvest_pure_powers, r_max, reconstruct
from steroid.services.symtensor import (
    embed,
    frobenius_norm,
    new_symmetric,
    random_symmetric,
    rank_one,
    reshape_tensor_to_matrix,
    scale,
    subtract,
    vectorize,
)


def _unit(v):
    return v / np.linalg.norm(v)


def _matches_up_to_sign(vectors, expected, atol):
    return any(
        np.allclose(vectors[:, j], expected, atol=atol) or np.allclose(vectors[:, j], -expected, atol=atol)
        for j in range(vectors.shape[1])
    )


def _pure_powers(*vectors):
    vectors = np.column_stack(vectors)
    count = vectors.shape[1]
    return PurePowerSet(
        dim=vectors.shape[0],
        vectors=vectors,
        provenance=((),) * count,
        head_weights=np.zeros(count),
    )


@pytest.mark.parametrize("order, dim, expected", [(3, 2, 4), (4, 7, 210), (2, 2, 3), (1, 5, 5), (8, 4, 165)])
def test_r_max(order, dim, expected):
    assert r_max(order, dim) == expected


def test_r_max_out_of_range():
    with pytest.raises(RangeError):
        r_max(200, 200)
    with pytest.raises(RangeError):
        r_max(0, 3)


def test_harvest_example(example1):
    pp = harvest_pure_powers(embed(example1))
    assert pp.count == 4
    np.testing.assert_allclose(np.linalg.norm(pp.vectors, axis=0), np.ones(4), atol=1e-12)
    assert _matches_up_to_sign(pp.vectors, np.array([0.8396, 0.5431]), 1e-3)
    assert _matches_up_to_sign(pp.vectors, np.array([0.5431, -0.8396]), 1e-3)


def test_harvest_rank_one():
    a = _unit(np.array([1.0, -2.0, 0.5]))
    pp = harvest_pure_powers(rank_one(2.5, a, 4))
    assert pp.count == 1
    assert _matches_up_to_sign(pp.vectors, a, 1e-12)
    assert pp.head_weights[0] == pytest.approx(2.5, rel=1e-12)


def test_harvest_bounded_leaf_count(rng):
    t = random_symmetric(4, 4, rng)
    pp = harvest_pure_powers(t)
    assert 0 < pp.count <= 4 ** 2 * 4
    assert all(len(chain) == 2 for chain in pp.provenance)


def test_harvest_eigenvalues_match_full_reshape(rng):
    t = random_symmetric(4, 3, rng)
    eig = sym_eig(reshape_tensor_to_matrix(t))
    full = np.sort(eig.eigenvalues[~numerical_zero_mask(eig)])
    top = np.sort(np.unique([chain[0][1] for chain in harvest_pure_powers(t).provenance]))
    np.testing.assert_allclose(top, full, atol=1e-10)


def test_harvest_needs_power_of_two(example1):
    with pytest.raises(OrderError):
        harvest_pure_powers(example1)


def test_build_x_single_unit_vector():
    x = build_x(_pure_powers(np.array([1.0, 0.0])), 3)
    expected = np.zeros((8, 1))
    expected[0, 0] = 1.0
    np.testing.assert_array_equal(x, expected)


def test_build_x_matches_naive_kron_power(rng):
    vectors = [_unit(rng.standard_normal(3)) for _ in range(4)]
    x = build_x(_pure_powers(*vectors), 3)
    for j, v in enumerate(vectors):
        np.testing.assert_allclose(x[:, j], naive_kron_power(v, 3), rtol=0, atol=1e-14)


def test_build_x_rank_is_bounded(rng):
    vectors = [_unit(rng.standard_normal(2)) for _ in range(4)]
    x = build_x(_pure_powers(*vectors), 2)
    assert x.shape == (4, 4)
    assert lstsq(x, rng.standard_normal(4)).numerical_rank <= 3


def test_example_fit_residual(example1):
    pp = harvest_pure_powers(embed(example1))
    assert lstsq(build_x(pp, 3), vectorize(example1)).residual_norm <= 1e-10


def test_decompose_example(example1):
    dec = decompose(example1)
    assert dec.rank == 4
    assert dec.converged
    assert dec.iterations == 0
    assert dec.residual_norm <= 1e-10
    np.testing.assert_allclose(np.sort(np.abs(dec.coefficients)), [0.6922, 1.3916, 3.9934, 46.79], atol=1e-2)
    dominant = int(np.argmax(np.abs(dec.coefficients)))
    np.testing.assert_allclose(np.abs(dec.vectors[:, dominant]), [0.8396, 0.5431], atol=1e-3)
    assert frobenius_norm(subtract(example1, reconstruct(dec))) <= 1e-10


def test_decompose_comon(comon):
    dec = decompose(comon)
    assert dec.rank == 3
    np.testing.assert_allclose(np.sort(np.abs(dec.coefficients)), [np.sqrt(2), np.sqrt(2), 2.0], atol=1e-3)
    assert dec.residual_norm <= 1e-10


def test_decompose_zero_tensor():
    dec = decompose(new_symmetric(3, 2, []))
    assert dec.rank == 0
    assert dec.residual_norm == 0.0
    assert dec.iterations == 0
    assert dec.converged


def test_decompose_vector():
    dec = decompose(SymTensor.from_array([-3.0, -4.0]))
    assert dec.rank == 1
    assert dec.coefficients[0] == pytest.approx(-5.0)
    np.testing.assert_allclose(dec.vectors[:, 0], [0.6, 0.8])


def test_decompose_matrix_is_eigendecomposition(rng):
    a = rng.standard_normal((5, 5))
    a = a + a.T
    dec = decompose(SymTensor.from_array(a))
    assert dec.rank == 5
    np.testing.assert_allclose(np.sort(dec.coefficients), np.linalg.eigvalsh(a), atol=1e-10)
    assert dec.residual_norm <= 1e-10 * np.linalg.norm(a)


def test_residual_matches_reconstruction(rng):
    t = random_symmetric(4, 3, rng)
    dec = decompose(t)
    distance = frobenius_norm(subtract(t, reconstruct(dec)))
    assert distance == pytest.approx(dec.residual_norm, abs=1e-10)


def test_reconstruct_single_term():
    dec = Decomposition(
        order=3,
        dim=2,
        terms=[Term(coefficient=2.0, vector=np.array([1.0, 0.0]))],
        residual_norm=0.0,
        report=SteroidReport(r_max=4),
    )
    expected = np.zeros((2, 2, 2))
    expected[0, 0, 0] = 2.0
    np.testing.assert_array_equal(reconstruct(dec).data, expected)


@pytest.mark.parametrize("order, dim", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)])
def test_planted_low_rank_is_recovered(order, dim, rng):
    data = np.zeros((dim,) * order)
    for _ in range(3):
        data += rank_one(rng.uniform(1.0, 3.0), _unit(rng.standard_normal(dim)), order).data
    t = SymTensor(order=order, dim=dim, data=data)
    dec = decompose(t)
    assert dec.converged
    assert dec.residual_norm <= 1e-8 * frobenius_norm(t)


@pytest.mark.parametrize("factor", [-2.5, 1e3])
@pytest.mark.parametrize("order, dim", [(3, 2), (4, 3), (5, 2)])
def test_decomposition_scales_with_the_tensor(order, dim, factor, rng):
    t = random_symmetric(order, dim, rng)
    expected = factor * reconstruct(decompose(t)).data
    scaled = reconstruct(decompose(scale(t, factor))).data
    assert np.linalg.norm(scaled - expected) <= 1e-8 * np.linalg.norm(expected)


@pytest.mark.parametrize("order, dim", [(3, 2), (4, 2), (4, 3), (5, 2), (6, 2)])
def test_iteration_records_respect_bounds(order, dim, rng):
    t = random_symmetric(order, dim, rng)
    dec = decompose(t)
    bound = r_max(order, dim)
    assert dec.report.r_max == bound
    assert dec.report.records
    residuals = [record.residual for record in dec.report.records]
    for record in dec.report.records:
        assert record.rank <= bound
        assert record.head_asymmetry <= 1e-10
    assert all(later <= earlier + 1e-12 for earlier, later in zip(residuals, residuals[1:]))
    assert dec.residual_norm <= 1e-6 * max(1.0, frobenius_norm(t))


def test_eigenproduct_head(example1, rng):
    dec = decompose(example1, DecomposeOptions(head=HeadMode.eigenproduct))
    assert dec.rank == 4
    assert dec.residual_norm <= 1e-10

    t = random_symmetric(4, 3, rng, (24, 100))
    dec = decompose(t, DecomposeOptions(head=HeadMode.eigenproduct, max_tail_iters=3))
    assert all(record.rank <= r_max(4, 3) for record in dec.report.records)
    assert dec.residual_norm <= dec.report.records[0].residual + 1e-9


def test_unconverged_run_is_reported(rng):
    t = random_symmetric(4, 3, rng)
    dec = decompose(t, DecomposeOptions(tau=1e-300, max_tail_iters=0))
    assert not dec.converged
    assert dec.iterations == 0
    assert len(dec.report.records) == 1


def test_decompose_rejects_bad_input():
    with pytest.raises(SymmetryError):
        decompose(SymTensor(order=2, dim=2, data=[[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NumericError):
        decompose(SymTensor(order=2, dim=2, data=[[np.nan, 0.0], [0.0, 0.0]]))


def test_decompose_is_deterministic(rng):
    t = random_symmetric(5, 2, rng)
    first, second = decompose(t), decompose(t)
    assert first.coefficients.tobytes() == second.coefficients.tobytes()
    assert first.vectors.tobytes() == second.vectors.tobytes()


def test_options_validation():
    with pytest.raises(ValueError):
        DecomposeOptions(tau=0.0)
    with pytest.raises(ValueError):
        DecomposeOptions(max_tail_iters=-1)
    options = DecomposeOptions.from_settings(tau=1e-6, head=None)
    assert options.tau == 1e-6
    assert options.head == HeadMode.ls

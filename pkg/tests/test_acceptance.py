import numpy as np
import pytest

from steroid.schemas import DecomposeOptions
from steroid.services.steroid import decompose, r_max
from steroid.services.symtensor import frobenius_norm, random_symmetric
from steroid.utils.fileio import format_decomposition
from steroid.utils.time import Stopwatch


# first-pass run times reported for n=4 and the order d, in seconds
REFERENCE_TIMES = {5: 0.33, 6: 0.90, 7: 2.96, 8: 11.29}


def test_example_runs_fast(example1):
    stopwatch = Stopwatch()
    dec = decompose(example1)
    assert stopwatch.elapsed() < 1.0
    assert dec.rank == 4 and dec.residual_norm <= 1e-10


def test_comon_runs_fast(comon):
    stopwatch = Stopwatch()
    dec = decompose(comon)
    assert stopwatch.elapsed() < 1.0
    assert dec.rank == 3


@pytest.mark.slow
def test_random_integer_tensor_needs_tail_passes():
    t = random_symmetric(4, 7, np.random.default_rng(2024), (24, 100))
    norm = frobenius_norm(t)
    stopwatch = Stopwatch()
    dec = decompose(t)
    assert stopwatch.elapsed() < 60.0

    first = dec.report.records[0]
    assert first.residual > 1e-6 * norm
    assert first.rank <= r_max(4, 7) == 210
    assert dec.iterations >= 1
    assert dec.residual_norm <= 1e-8 * norm


@pytest.mark.slow
@pytest.mark.parametrize("order", sorted(REFERENCE_TIMES))
def test_scaling_with_order(order):
    t = random_symmetric(order, 4, np.random.default_rng(42 + order))
    dec = decompose(t, DecomposeOptions(tau=1e-10))
    assert dec.report.records[0].elapsed < 10 * REFERENCE_TIMES[order]
    assert dec.residual_norm <= 1e-6 * frobenius_norm(t)


@pytest.mark.slow
def test_generated_order_six_tensor():
    t = random_symmetric(6, 4, np.random.default_rng(42))
    dec = decompose(t)
    assert dec.report.records[0].residual < 1e-2 * frobenius_norm(t)
    assert dec.residual_norm <= 1e-6 * frobenius_norm(t)


def test_decomposition_files_are_deterministic():
    t = random_symmetric(4, 3, np.random.default_rng(7))
    assert format_decomposition(decompose(t)) == format_decomposition(decompose(t))


@pytest.mark.slow
def test_first_pass_time_increases_with_order():
    options = DecomposeOptions(max_tail_iters=0)
    times = []
    for order in sorted(REFERENCE_TIMES):
        t = random_symmetric(order, 4, np.random.default_rng(42 + order))
        times.append(min(decompose(t, options).report.records[0].elapsed for _ in range(3)))
    assert times == sorted(times)

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from wigner_lab import atoms
from wigner_lab.errors import InfeasibleMomentError, UnsupportedOrderError

THREE_POINT = atoms.symmetric_three_point(3.0)
RADEMACHER = atoms.discrete([(1.0, 0.5), (-1.0, 0.5)])


def gaussian_moment_quadrature(mean, variance, k):
    """Independent oracle: integrate x^k against the normal density."""
    sigma = math.sqrt(variance)

    def integrand(x):
        return x**k * math.exp(-((x - mean) ** 2) / (2 * variance)) / (sigma * math.sqrt(2 * math.pi))

    value, err = quad(integrand, mean - 12 * sigma, mean + 12 * sigma)
    assert err < 1e-10
    return value


def test_gaussian_fourth_moment_matches_quadrature():
    oracle = gaussian_moment_quadrature(0.0, 1.0, 4)
    assert abs(oracle - 3.0) < 1e-9
    assert atoms.moment(atoms.gaussian_real(0.0, 1.0), 4, 0) == pytest.approx(3.0, abs=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3, 5, 6, 8])
def test_gaussian_moments_nonzero_mean_match_quadrature(k):
    dist = atoms.gaussian_real(0.7, 2.3)
    oracle = gaussian_moment_quadrature(0.7, 2.3, k)
    assert atoms.moment(dist, k, 0) == pytest.approx(oracle, rel=1e-9)


def test_three_point_second_moment_direct_sum():
    # 2 * (1/6) * 3 = 1
    assert atoms.moment(THREE_POINT, 2, 0) == pytest.approx(1.0, abs=1e-15)
    assert atoms.moment(THREE_POINT, 4, 0) == pytest.approx(3.0, abs=1e-12)


@given(
    a=st.floats(min_value=0.1, max_value=50.0),
    p=st.floats(min_value=0.01, max_value=0.49),
    k=st.integers(min_value=0, max_value=5),
)
@settings(max_examples=50, deadline=None)
def test_sign_symmetric_discrete_odd_moments_vanish(a, p, k):
    dist = atoms.discrete([(a, p), (-a, p), (0.0, 1.0 - 2 * p)])
    assert atoms.moment(dist, 2 * k + 1, 0) == pytest.approx(0.0, abs=1e-9 * a ** (2 * k + 1))


def test_complex_gaussian_moment_convention():
    dist = atoms.gaussian_complex(1.0)
    assert atoms.moment(dist, 2, 0) == pytest.approx(0.5, abs=1e-15)
    assert atoms.moment(dist, 0, 2) == pytest.approx(0.5, abs=1e-15)
    assert atoms.moment(dist, 1, 1) == 0.0


def test_moment_order_ceiling():
    with pytest.raises(UnsupportedOrderError):
        atoms.moment(atoms.gaussian_real(), 13, 0)
    with pytest.raises(UnsupportedOrderError):
        atoms.moment(THREE_POINT, 7, 6)


def test_moment_zero_zero_is_one():
    for dist in (atoms.gaussian_real(), atoms.gaussian_complex(), THREE_POINT):
        assert atoms.moment(dist, 0, 0) == 1.0


def test_matches_to_order_three_point_vs_gaussian():
    assert atoms.matches_to_order(atoms.gaussian_real(0, 1), THREE_POINT, 4, 1e-12)
    assert not atoms.matches_to_order(atoms.gaussian_real(0, 1), THREE_POINT, 6, 1e-10)


def test_matches_to_order_rademacher():
    gauss = atoms.gaussian_real(0, 1)
    # fourth moments are 3 vs 1
    assert not atoms.matches_to_order(gauss, RADEMACHER, 4)
    assert atoms.matches_to_order(gauss, RADEMACHER, 3)


@given(m4=st.floats(min_value=1.0, max_value=30.0))
@settings(max_examples=40, deadline=None)
def test_matches_to_order_reflexive(m4):
    dist = atoms.symmetric_three_point(m4)
    assert atoms.matches_to_order(dist, dist, 8, 0.0)


def test_symmetric_three_point_construction():
    values = {complex(v): p for v, p in THREE_POINT.atoms}
    root3 = math.sqrt(3.0)
    assert values[complex(root3)] == pytest.approx(1 / 6)
    assert values[complex(-root3)] == pytest.approx(1 / 6)
    assert values[complex(0.0)] == pytest.approx(2 / 3)


def test_symmetric_three_point_degenerates_to_rademacher():
    dist = atoms.symmetric_three_point(1.0)
    assert len(dist.atoms) == 2
    assert {v.real for v, _ in dist.atoms} == {1.0, -1.0}
    assert all(p == 0.5 for _, p in dist.atoms)


def test_symmetric_three_point_infeasible():
    with pytest.raises(InfeasibleMomentError):
        atoms.symmetric_three_point(0.5)


@given(m4=st.floats(min_value=1.0, max_value=30.0))
@settings(max_examples=40, deadline=None)
def test_three_point_moment_targets(m4):
    dist = atoms.symmetric_three_point(m4)
    assert atoms.moment(dist, 1, 0) == pytest.approx(0.0, abs=1e-12)
    assert atoms.moment(dist, 2, 0) == pytest.approx(1.0, abs=1e-12)
    assert atoms.moment(dist, 3, 0) == pytest.approx(0.0, abs=1e-11)
    assert atoms.moment(dist, 4, 0) == pytest.approx(m4, rel=1e-12)


def test_three_point_matches_gaussian_only_at_m4_three():
    gauss = atoms.gaussian_real(0, 1)
    assert atoms.matches_to_order(atoms.symmetric_three_point(3.0), gauss, 4, 1e-12)
    for m4 in (1.0, 2.0, 2.9, 3.1, 5.0):
        assert not atoms.matches_to_order(atoms.symmetric_three_point(m4), gauss, 4, 1e-12)


def test_condition_c1_bound_values():
    assert atoms.condition_c1_bound(RADEMACHER, 4.0) == pytest.approx(1.0)
    # 2 * (1/6) * 9 = 3
    assert atoms.condition_c1_bound(THREE_POINT, 4.0) == pytest.approx(3.0)
    assert atoms.condition_c1_bound(atoms.gaussian_real(0, 1), 2.0) == pytest.approx(1.0)
    assert atoms.condition_c1_bound(atoms.gaussian_real(0, 1), 4.0) == pytest.approx(3.0)
    # Rayleigh: E|X|^2 equals the variance parameter
    assert atoms.condition_c1_bound(atoms.gaussian_complex(1.0), 2.0) == pytest.approx(1.0)


def test_condition_c1_bound_noncentral_gaussian_vs_quadrature():
    dist = atoms.gaussian_real(0.5, 1.5)

    def integrand(x):
        return abs(x) ** 3 * math.exp(-((x - 0.5) ** 2) / 3.0) / math.sqrt(3.0 * math.pi)

    oracle, _ = quad(integrand, -20, 20)
    assert atoms.condition_c1_bound(dist, 3.0) == pytest.approx(oracle, rel=1e-8)


def test_discrete_validation():
    with pytest.raises(ValueError):
        atoms.discrete([(1.0, 0.6), (-1.0, 0.6)])  # probs exceed 1
    with pytest.raises(ValueError):
        atoms.discrete([(1.0, 0.5), (1.0, 0.5)])  # duplicate values
    with pytest.raises(ValueError):
        atoms.discrete([(1.0, 1.0), (-1.0, 0.0)])  # zero prob
    with pytest.raises(ValueError):
        atoms.gaussian_real(0.0, -1.0)


def test_moment_table_entries():
    table = atoms.moment_table(THREE_POINT, 4)
    assert table[(0, 0)] == 1.0
    assert table[(2, 0)] == pytest.approx(1.0)
    # real-valued law: any entry touching the imaginary part vanishes
    assert all(v == 0.0 for (a, b), v in table.entries.items() if b >= 1)
    assert set(table.entries) == {(a, b) for a in range(5) for b in range(5 - a)}


def test_empirical_moments_agree_with_analytic():
    rng = np.random.default_rng(1234)
    draws = atoms.sample(THREE_POINT, 100_000, rng).real
    for k in (1, 2, 3, 4):
        analytic = atoms.moment(THREE_POINT, k, 0)
        se = draws.astype(float).__pow__(k).std(ddof=1) / math.sqrt(len(draws))
        assert abs(draws.__pow__(k).mean() - analytic) < 4 * se + 1e-12


def test_empirical_complex_gaussian_moments():
    rng = np.random.default_rng(99)
    draws = atoms.sample(atoms.gaussian_complex(1.0), 100_000, rng)
    sq = np.abs(draws) ** 2
    se = sq.std(ddof=1) / math.sqrt(len(sq))
    assert abs(sq.mean() - 1.0) < 4 * se


def test_sampling_deterministic_given_seed():
    for dist in (atoms.gaussian_real(0, 1), atoms.gaussian_complex(1.0), THREE_POINT):
        a = atoms.sample(dist, 257, np.random.default_rng(777))
        b = atoms.sample(dist, 257, np.random.default_rng(777))
        assert np.array_equal(a, b)


def test_discrete_sample_support():
    rng = np.random.default_rng(5)
    draws = atoms.sample(RADEMACHER, 4096, rng)
    assert set(np.unique(draws)) <= {-1.0, 1.0}


def test_json_round_trip():
    blob = json.dumps(atoms.to_json_dict(THREE_POINT))
    back = atoms.from_json_dict(json.loads(blob))
    assert back.atoms == THREE_POINT.atoms


def test_json_rejects_gaussian_and_malformed():
    with pytest.raises(ValueError):
        atoms.to_json_dict(atoms.gaussian_real())
    with pytest.raises(ValueError):
        atoms.from_json_dict({"atoms": [{"re": 1.0}]})
    with pytest.raises(ValueError):
        atoms.from_json_dict({})

import math

import numpy as np
import pytest
from scipy.integrate import quad

from wigner_lab import atoms, ensembles


def test_sampled_matrix_is_exactly_symmetric():
    ms = ensembles.sample(ensembles.goe_spec(8), seed=3)
    assert np.array_equal(ms.matrix, ms.matrix.T)
    assert ms.matrix.dtype == np.float64


def test_sampled_hermitian_matrix_is_exactly_hermitian():
    ms = ensembles.sample(ensembles.gue_spec(8), seed=3)
    assert np.array_equal(ms.matrix, ms.matrix.conj().T)
    assert ms.matrix.dtype == np.complex128


def test_rademacher_offdiagonal_support():
    ms = ensembles.sample(ensembles.rademacher_spec(3), seed=11)
    off = ms.matrix[~np.eye(3, dtype=bool)]
    assert set(np.unique(off)) <= {-1.0, 1.0}


def test_goe_scalar_case_has_diagonal_variance_two():
    spec = ensembles.goe_spec(1)
    draws = np.array([ensembles.sample(spec, s).matrix[0, 0] for s in range(10_000)])
    sq = draws**2
    se = sq.std(ddof=1) / math.sqrt(len(sq))
    assert abs(sq.mean() - 2.0) < 3 * se


def test_gue_offdiagonal_moment_convention():
    off = ensembles.gue_spec(4).off_diag
    assert atoms.moment(off, 2, 0) == pytest.approx(0.5)
    assert atoms.moment(off, 0, 2) == pytest.approx(0.5)


def test_matched_goe_matches_gaussian_entries():
    spec = ensembles.matched_goe_spec(10)
    assert atoms.matches_to_order(spec.off_diag, atoms.gaussian_real(0, 1), 4, 1e-10)
    # diagonal: mean 0, variance 2, matching N(0,2) to order 2
    assert atoms.moment(spec.diag, 1, 0) == pytest.approx(0.0, abs=1e-12)
    assert atoms.moment(spec.diag, 2, 0) == pytest.approx(2.0, rel=1e-12)
    assert atoms.matches_to_order(spec.diag, atoms.gaussian_real(0, 2), 2, 1e-10)


def test_spec_validation_rejects_bad_entry_laws():
    shifted = atoms.gaussian_real(0.5, 1.0)
    with pytest.raises(ValueError):
        ensembles.WignerSpec(4, ensembles.REAL_SYMMETRIC, shifted, atoms.gaussian_real(0, 2))
    wide = atoms.gaussian_real(0.0, 2.0)
    with pytest.raises(ValueError):
        ensembles.WignerSpec(4, ensembles.REAL_SYMMETRIC, wide, atoms.gaussian_real(0, 2))
    with pytest.raises(ValueError):
        ensembles.WignerSpec(
            4, ensembles.REAL_SYMMETRIC, atoms.gaussian_complex(1.0), atoms.gaussian_real(0, 2)
        )
    with pytest.raises(ValueError):
        ensembles.WignerSpec(
            4, ensembles.HERMITIAN, atoms.gaussian_complex(1.0), atoms.gaussian_complex(1.0)
        )
    with pytest.raises(ValueError):
        ensembles.goe_spec(0)


def test_rescale_identity():
    spec = ensembles.goe_spec(4)
    ms = ensembles.MatrixSample(matrix=np.eye(4), spec=spec, seed=0)
    assert np.allclose(ensembles.rescale(ms), 2.0 * np.eye(4))
    one = ensembles.MatrixSample(matrix=np.array([[3.0]]), spec=ensembles.goe_spec(1), seed=0)
    assert ensembles.rescale(one) == pytest.approx(3.0)


def test_rescale_scales_eigenvalues():
    ms = ensembles.sample(ensembles.goe_spec(12), seed=21)
    lam_m = np.linalg.eigvalsh(ms.matrix)
    lam_a = np.linalg.eigvalsh(ensembles.rescale(ms))
    assert np.abs(lam_a - math.sqrt(12) * lam_m).max() < 1e-10


def test_entry_independence_across_seeds():
    spec = ensembles.goe_spec(3)
    pairs = np.array(
        [
            (ensembles.sample(spec, s).matrix[0, 1], ensembles.sample(spec, s).matrix[0, 2])
            for s in range(10_000)
        ]
    )
    corr = np.corrcoef(pairs[:, 0], pairs[:, 1])[0, 1]
    assert abs(corr) < 4.0 / math.sqrt(len(pairs))


def test_semicircle_bulk_fraction():
    # Oracle: mass of the semicircle density on [-1, 1].
    target, err = quad(lambda x: math.sqrt(4 - x * x) / (2 * math.pi), -1, 1)
    assert err < 1e-10
    assert target == pytest.approx(0.6090, abs=5e-4)
    n = 400
    spec = ensembles.goe_spec(n)
    fractions = []
    for s in range(50):
        lam = np.linalg.eigvalsh(ensembles.rescale(ensembles.sample(spec, 9_000 + s))) / n
        fractions.append(np.mean(np.abs(lam) <= 1.0))
    assert abs(np.mean(fractions) - target) < 0.03


def test_sampling_deterministic_in_seed():
    spec = ensembles.matched_goe_spec(9)
    a = ensembles.sample(spec, 123).matrix
    b = ensembles.sample(spec, 123).matrix
    c = ensembles.sample(spec, 124).matrix
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_matrix_is_read_only():
    ms = ensembles.sample(ensembles.goe_spec(5), seed=1)
    with pytest.raises(ValueError):
        ms.matrix[0, 0] = 99.0

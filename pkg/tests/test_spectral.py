import math

import numpy as np
import pytest

from conftest import random_symmetric_loop
from pcurves.errors import ValidationError
from pcurves.spectral import AsymptoticOperator, discretized_spectrum

TWO_PI = 2 * math.pi


def test_sample_validation():
    with pytest.raises(ValidationError):
        AsymptoticOperator(tuple((0.0, 0.0, 0.0) for _ in range(8)))  # too few
    with pytest.raises(ValidationError):
        AsymptoticOperator.from_matrices([np.array([[0.0, 1.0], [0.0, 0.0]])] * 16)


def test_free_operator_spectrum():
    # S = 0: eigenvalues 2 pi k, winding k, multiplicity 2.
    op = AsymptoticOperator.constant(0.0, 0.0, 0.0)
    spec = discretized_spectrum(op, 32)
    for lam, w, mult in spec.eigenpairs:
        assert mult == 2
        assert abs(lam - TWO_PI * w) < 1e-9


def test_scalar_shift_spectrum():
    # S = pi * Id shifts everything: eigenvalues 2 pi k - pi, winding k.
    op = AsymptoticOperator.constant(math.pi, 0.0, math.pi)
    spec = discretized_spectrum(op, 32)
    for lam, w, mult in spec.eigenpairs:
        assert mult == 2
        assert abs(lam - (TWO_PI * w - math.pi)) < 1e-9


def test_diagonal_scalar_equivalence():
    a = 1.234
    diag = AsymptoticOperator.constant(a, 0.0, a)
    spec = discretized_spectrum(diag, 32)
    for lam, w, _ in spec.eigenpairs:
        assert abs(lam - (TWO_PI * w - a)) < 1e-9


def test_window_properties_random_loops():
    rng = np.random.default_rng(7)
    for _ in range(10):
        op = random_symmetric_loop(rng)
        spec = discretized_spectrum(op, 48)
        windings = [w for _, w, _ in spec.eigenpairs]
        assert windings == sorted(windings)
        counts = spec.winding_counts()
        interior = sorted(counts)[1:-1]  # edge windings may be cut by the window
        for w in interior:
            assert counts[w] == 2


def test_pulled_back_operator_scales_eigenvalues():
    rng = np.random.default_rng(11)
    op = random_symmetric_loop(rng, degree=2, scale=0.7)
    base = discretized_spectrum(op, 48)
    cover = discretized_spectrum(op.pulled_back(3), 96)
    # Every eigenvalue of the base appears tripled in the cover's spectrum
    # with tripled winding.
    cover_pairs = [(lam, w) for lam, w, _ in cover.eigenpairs]
    for lam, w, _ in base.eigenpairs:
        if abs(lam) > 4.0:
            continue
        assert any(
            abs(3 * lam - lam_c) < 1e-6 and w_c == 3 * w for lam_c, w_c in cover_pairs
        ), (lam, w)


def test_kernel_detection():
    op = AsymptoticOperator.constant(TWO_PI, 0.0, TWO_PI)
    spec = discretized_spectrum(op, 32)
    assert spec.kernel_dimension() == 2
    one_dim = AsymptoticOperator.constant(0.0, 0.0, 1.0)
    spec1 = discretized_spectrum(one_dim, 32)
    assert spec1.kernel_dimension() == 1


def test_doubling_truncation_stability():
    rng = np.random.default_rng(3)
    op = random_symmetric_loop(rng)
    s1 = discretized_spectrum(op, 48)
    s2 = discretized_spectrum(op, 96)
    assert s1.alpha_at(0.07) == s2.alpha_at(0.07)
    assert s1.alpha_at(-0.07) == s2.alpha_at(-0.07)

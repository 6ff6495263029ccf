"""Commutator inequality verification on finite-dimensional instances."""

import numpy as np
import pytest

from specgap.abstract import (
    OperatorTriple,
    admissible_ks,
    commutator,
    moment_inequality_check,
    random_instance,
    verify_corollary,
    verify_theorem,
)
from specgap.couples import FunctionCouple
from specgap.errors import GapHypothesisError, InputError


def two_by_two():
    A = np.diag([1.0, 2.0]).astype(complex)
    B = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    T = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
    return A, B, T


def const_couple(lam, alpha=0.0):
    return FunctionCouple("const-power", lam, (alpha,))


# ---------------------------------------------------------------------------
# commutator
# ---------------------------------------------------------------------------


def test_commutator_2x2():
    X = np.diag([1.0, 2.0])
    Y = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.array_equal(commutator(X, Y), np.array([[0.0, -1.0], [1.0, 0.0]]))


def test_commutator_self_and_identity():
    X = np.arange(9.0).reshape(3, 3)
    assert np.array_equal(commutator(X, X), np.zeros((3, 3)))
    assert np.array_equal(commutator(np.eye(3), X), np.zeros((3, 3)))


def test_commutator_shape_mismatch():
    with pytest.raises(InputError):
        commutator(np.eye(2), np.eye(3))


# ---------------------------------------------------------------------------
# main inequality
# ---------------------------------------------------------------------------


def test_theorem_2x2_equality():
    A, B, T = two_by_two()
    triple = OperatorTriple(A, (B,), (T,))
    rep = verify_theorem(triple, 1, const_couple(2.0))
    assert rep.passed
    assert abs(rep.lhs - 4.0) <= 1e-14
    assert abs(rep.rhs - 4.0) <= 1e-14
    assert rep.quad_coeff == pytest.approx(1.0, abs=1e-14)
    assert rep.gap == pytest.approx(1.0, abs=1e-15)


def test_theorem_zero_ts():
    A, B, _ = two_by_two()
    Z = np.zeros((2, 2), dtype=complex)
    triple = OperatorTriple(A, (B,), (Z,))
    rep = verify_theorem(triple, 1, const_couple(2.0))
    assert rep.passed
    assert rep.lhs == 0.0 and rep.rhs == 0.0


def test_theorem_random_instance_equal_power():
    triple = random_instance(8, 3, seed=42)
    lam = triple.spectral.lam
    rep = verify_theorem(triple, 4, FunctionCouple("equal-power", float(lam[4]), (2.0,)))
    assert rep.passed


def test_theorem_gap_hypothesis():
    A = np.diag([1.0, 1.0, 2.0]).astype(complex)
    B = np.eye(3, dtype=complex)
    T = np.zeros((3, 3), dtype=complex)
    triple = OperatorTriple(A, (B,), (T,))
    with pytest.raises(GapHypothesisError):
        verify_theorem(triple, 1, const_couple(1.0))


def test_theorem_z_between_gap_allowed():
    A, B, T = two_by_two()
    triple = OperatorTriple(A, (B,), (T,))
    rep = verify_theorem(triple, 1, const_couple(1.5), z=1.5)
    assert rep.z == 1.5
    assert rep.passed


def test_theorem_sign_flip_of_ts_invariant():
    triple = random_instance(6, 2, seed=3)
    lam = triple.spectral.lam
    flipped = OperatorTriple(triple.A, triple.Bs, tuple(-T for T in triple.Ts))
    for k in admissible_ks(triple):
        c = FunctionCouple("linear-power", float(lam[k]), (1.0,))
        a = verify_theorem(triple, k, c)
        b = verify_theorem(flipped, k, c)
        assert a.lhs == b.lhs and a.rhs == b.rhs


def test_theorem_matches_unweighted_two_sided_form():
    # with f = g = 1 the report must equal the independently coded
    # (sum <[T,B]u,u>)^2 <= 4 (sum <[A,B]u,Bu>) (sum ||Tu||^2/(z-lam)) form,
    # computed here directly from the matrices without the cached arrays
    triple = random_instance(7, 2, seed=11)
    w, U = np.linalg.eigh(triple.A)
    for k in admissible_ks(triple):
        z = float(w[k])
        lhs = 0.0
        quad = 0.0
        second = 0.0
        for p in range(triple.n):
            Tp, Bp = triple.Ts[p], triple.Bs[p]
            TB = Tp @ Bp - Bp @ Tp
            AB = triple.A @ Bp - Bp @ triple.A
            for i in range(k):
                u = U[:, i]
                lhs += np.real(np.vdot(u, TB @ u))
                quad += np.real(np.vdot(Bp @ u, AB @ u))
                second += np.linalg.norm(Tp @ u) ** 2 / (z - w[i])
        lhs = lhs**2
        rhs = 4.0 * quad * second
        rep = verify_theorem(triple, k, const_couple(z, 0.0))
        assert rep.lhs == pytest.approx(lhs, rel=1e-12, abs=1e-12)
        assert rep.rhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_quad_coeff_nonnegative_over_random_instances():
    for seed in range(40):
        triple = random_instance(int(2 + seed % 9), 1 + seed % 3, seed=seed)
        lam = triple.spectral.lam
        for k in admissible_ks(triple):
            rep = verify_theorem(triple, k, FunctionCouple("equal-power", float(lam[k]), (2.0,)))
            assert rep.quad_coeff >= -1e-9 * (1.0 + abs(rep.rhs))
            assert rep.passed


def test_commuting_diagnostic_ensemble_degenerates_to_zero():
    triple = random_instance(6, 2, seed=5, ensemble="commuting-diagnostic")
    lam = triple.spectral.lam
    for k in admissible_ks(triple):
        rep = verify_theorem(triple, k, const_couple(float(lam[k])))
        assert rep.passed
        assert rep.quad_coeff == pytest.approx(0.0, abs=1e-12)
        assert rep.lhs == pytest.approx(0.0, abs=1e-12)


# ---------------------------------------------------------------------------
# one-family corollary
# ---------------------------------------------------------------------------


def test_corollary_2x2():
    A, B, _ = two_by_two()
    rep = verify_corollary(A, (B,), 1, const_couple(2.0))
    assert rep.passed
    # the corollary form carries no factor 4: both sides are 1 here
    assert rep.lhs == pytest.approx(1.0, abs=1e-14)
    assert rep.rhs == pytest.approx(1.0, abs=1e-14)
    assert rep.identity_residual <= 1e-12


def test_corollary_identity_operator_trivial():
    A = np.diag([1.0, 2.0, 3.0]).astype(complex)
    rep = verify_corollary(A, (np.eye(3, dtype=complex),), 1, const_couple(2.0))
    assert rep.passed
    assert rep.lhs == 0.0 and rep.rhs == 0.0


def test_corollary_random():
    rng = np.random.default_rng(7)
    d = 10
    M = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    A = (M + M.conj().T) / 2
    A = A + (1.0 - np.linalg.eigvalsh(A)[0]) * np.eye(d)
    Bs = []
    for _ in range(2):
        Mb = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        Bs.append((Mb + Mb.conj().T) / 2)
    w = np.linalg.eigvalsh(A)
    rep = verify_corollary(A, tuple(Bs), 4, FunctionCouple("linear-power", float(w[4]), (1.0,)))
    assert rep.passed
    assert rep.identity_residual <= 1e-12


# ---------------------------------------------------------------------------
# moment inequality
# ---------------------------------------------------------------------------


def test_moment_identity_matrix():
    u = np.array([0.6, 0.8])
    for r, q in [(0, 0), (1, 2), (3, 5)]:
        assert moment_inequality_check(np.eye(2), u, r, q) == pytest.approx(0.0, abs=1e-14)


def test_moment_hand_value():
    u = np.array([1.0, 1.0]) / np.sqrt(2.0)
    margin = moment_inequality_check(np.diag([1.0, 4.0]), u, 1, 2)
    assert margin == pytest.approx(np.sqrt(8.5) - 2.5, rel=1e-13)


def test_moment_r_zero():
    rng = np.random.default_rng(1)
    W = rng.standard_normal((5, 5))
    Q = W @ W.T
    u = rng.standard_normal(5)
    u /= np.linalg.norm(u)
    assert moment_inequality_check(Q, u, 0, 4) == pytest.approx(0.0, abs=1e-12)


def test_moment_rejects_non_psd():
    with pytest.raises(InputError):
        moment_inequality_check(np.diag([1.0, -1.0]), np.array([1.0, 0.0]), 1, 2)


def test_moment_rejects_bad_exponents():
    with pytest.raises(InputError):
        moment_inequality_check(np.eye(2), np.array([1.0, 0.0]), 3, 2)


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------


def test_random_instance_deterministic():
    a = random_instance(8, 3, seed=42)
    b = random_instance(8, 3, seed=42)
    assert np.array_equal(a.A, b.A)
    for x, y in zip(a.Bs + a.Ts, b.Bs + b.Ts):
        assert np.array_equal(x, y)
    c = random_instance(8, 3, seed=43)
    assert not np.array_equal(a.A, c.A)


def test_random_instance_symmetry_residuals():
    for ensemble in ("dense-gaussian", "sparse", "commuting-diagnostic"):
        t = random_instance(9, 2, seed=1, ensemble=ensemble)
        assert np.abs(t.A - t.A.conj().T).max() == 0.0
        for B in t.Bs:
            assert np.abs(B - B.conj().T).max() == 0.0
        for T in t.Ts:
            assert np.abs(T + T.conj().T).max() == 0.0


def test_random_instance_positive_spectrum():
    t = random_instance(12, 3, seed=9)
    assert np.linalg.eigvalsh(t.A)[0] > 0


def test_operator_triple_rejects_non_hermitian():
    A = np.array([[1.0, 2.0], [0.0, 1.0]], dtype=complex)
    with pytest.raises(InputError):
        OperatorTriple(A, (np.eye(2, dtype=complex),), (np.zeros((2, 2), dtype=complex),))

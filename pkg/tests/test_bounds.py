"""Bound registry, solver kernels, constants, margins, orderings."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specgap import bounds
from specgap.bounds import (
    CHAIN,
    EUCLIDEAN,
    HEISENBERG,
    REGISTRY,
    SpectrumPrefix,
    chain_compare,
    chebyshev_sum_margin,
    check_general_poly,
    compute_bound,
    kohn_constant_c1,
    kohn_constant_c2,
    margin_at,
    registry_names,
    solve_largest_root_bound,
    solve_monotone_bound,
    solve_quadratic_bound,
    verify_margins,
)
from specgap.couples import FunctionCouple
from specgap.errors import (
    EmptyFeasibleSetError,
    InapplicableBoundError,
    InputError,
    NegativeDiscriminantError,
    SpectrumError,
    UnknownBoundError,
)

PI2 = math.pi**2


def euclid(values, n, l=1):
    return SpectrumPrefix(np.asarray(values, dtype=float), n=n, l=l, problem=EUCLIDEAN)


def kohn(values, n, l):
    return SpectrumPrefix(np.asarray(values, dtype=float), n=n, l=l, problem=HEISENBERG)


# ---------------------------------------------------------------------------
# SpectrumPrefix validation
# ---------------------------------------------------------------------------


def test_prefix_rejects_bad_input():
    with pytest.raises(SpectrumError):
        SpectrumPrefix(np.array([]), n=2)
    with pytest.raises(SpectrumError):
        SpectrumPrefix(np.array([1.0, 0.5]), n=2)
    with pytest.raises(SpectrumError):
        SpectrumPrefix(np.array([-1.0, 2.0]), n=2)
    with pytest.raises(SpectrumError):
        SpectrumPrefix(np.array([1.0]), n=0)
    with pytest.raises(SpectrumError):
        SpectrumPrefix(np.array([1.0]), n=2, problem="nope")


# ---------------------------------------------------------------------------
# quadratic kernel
# ---------------------------------------------------------------------------


def test_quadratic_trivial_roots():
    assert solve_quadratic_bound(1, 1.0, 1.0, 2.0) == pytest.approx(3.0, rel=1e-15)


def test_quadratic_derived_root():
    # oracle: larger root of 2 z^2 - 12 z + 15 by the quadratic formula
    oracle = max(np.roots([2.0, -12.0, 15.0]))
    assert oracle == pytest.approx((12 + math.sqrt(24)) / 4, rel=1e-15)
    assert solve_quadratic_bound(2, 3.0, 5.0, 2.0) == pytest.approx(oracle, rel=1e-14)


def test_quadratic_equality_case():
    assert solve_quadratic_bound(2, 2.0, 2.0, 1.0) == pytest.approx(2.0, rel=1e-14)


def test_quadratic_negative_discriminant():
    # k z^2 - (2+C) S1 z + (1+C) S2 with S2 huge has no real root
    with pytest.raises(NegativeDiscriminantError):
        bounds._larger_root(1.0, 1.0, 100.0)


# ---------------------------------------------------------------------------
# monotone kernel
# ---------------------------------------------------------------------------


def test_monotone_closed_form_inversion():
    root, iters, resid = solve_monotone_bound(lambda z: 2.0 / (z - 1.0), 1.0, 1.0)
    assert root == pytest.approx(3.0, rel=1e-12)
    assert resid <= 1e-12 * 1.0 * 10
    assert iters > 0


def test_monotone_single_term():
    root, _, _ = solve_monotone_bound(lambda z: 1.0 / (z - 1.0), 1.0, 0.5)
    assert root == pytest.approx(3.0, rel=1e-12)


def test_monotone_two_terms_equal_weights():
    # sum 1/(z - lam) = 1 over lam = (1, 4):  z^2 - 7z + 9 = 0
    oracle = max(np.roots([1.0, -7.0, 9.0]))
    assert oracle == pytest.approx((7 + math.sqrt(13)) / 2, rel=1e-15)
    root, _, resid = solve_monotone_bound(lambda z: 1.0 / (z - 1.0) + 1.0 / (z - 4.0), 4.0, 1.0)
    assert root == pytest.approx(oracle, rel=1e-12)


def test_monotone_sqrt_weights():
    # sum sqrt(lam)/(z - lam) = 1 over lam = (1, 4):  z^2 - 8z + 10 = 0
    oracle = max(np.roots([1.0, -8.0, 10.0]))
    root, _, _ = solve_monotone_bound(lambda z: 1.0 / (z - 1.0) + 2.0 / (z - 4.0), 4.0, 1.0)
    assert root == pytest.approx(oracle, rel=1e-12)


# ---------------------------------------------------------------------------
# largest-root kernel
# ---------------------------------------------------------------------------


def test_largest_root_trivial():
    def H(z):
        return (z - 1.0) - 2.0 * np.sqrt(z - 1.0)

    root, _, resid = solve_largest_root_bound(H, 1.0, 20.0)
    assert root == pytest.approx(5.0, rel=1e-11)


def test_largest_root_one_term_chengyang():
    # (z - 1) - c sqrt(z - 1) <= 0 iff z <= 1 + c^2, c^2 = 8(n+2)/n^2, n = 2
    c = math.sqrt(8.0 * 4.0 / 4.0)

    def H(z):
        return (z - 1.0) - c * np.sqrt(1.0 * (z - 1.0))

    root, _, _ = solve_largest_root_bound(H, 1.0, 30.0)
    assert root == pytest.approx(9.0, rel=1e-11)


def test_largest_root_empty_feasible_set():
    # H(z) = z - lambda_k with lambda_k = 2: positive everywhere above 2
    with pytest.raises(EmptyFeasibleSetError):
        solve_largest_root_bound(lambda z: np.asarray(z) - 2.0, 2.0, 10.0)


# ---------------------------------------------------------------------------
# Kohn constants against an exact rational oracle
# ---------------------------------------------------------------------------


def _oracle_c(n, l, which):
    """Independent evaluation: enumerate (q, r, s) triples directly."""
    from fractions import Fraction

    total = Fraction(0)
    for q in range(1, l - 1):
        for r in range(1, l - q):
            m = l - q - r
            for s in range(0, m + 1):
                if s % 2 == 1:
                    total += Fraction(2**s * n * math.comb(m, s), (2 * n - 1) ** ((s + 1) // 2))
                elif (which == "c1" and s >= 2) or (which == "c2" and s >= 0):
                    total += Fraction(2**s * math.comb(m, s), (2 * n - 1) ** (s // 2))
    return float((2 if which == "c1" else 4) * total)


def test_c1_l3_special_case():
    for n in range(1, 9):
        assert kohn_constant_c1(n, 3) == 4.0


def test_c1_matches_oracle_to_the_bit():
    for n in (1, 2, 3, 7):
        for l in (5, 7, 9):
            assert kohn_constant_c1(n, l) == _oracle_c(n, l, "c1")


def test_c2_matches_oracle_to_the_bit():
    for n in (1, 2, 3, 7):
        for l in (4, 6, 8):
            assert kohn_constant_c2(n, l) == _oracle_c(n, l, "c2")


def test_constants_parity_validation():
    with pytest.raises(InputError):
        kohn_constant_c1(2, 4)
    with pytest.raises(InputError):
        kohn_constant_c2(2, 5)


# ---------------------------------------------------------------------------
# compute_bound registry behaviour
# ---------------------------------------------------------------------------


def test_ppw_k1():
    res = compute_bound("ppw-laplacian", euclid([2 * PI2], 2), 1)
    assert res.value == pytest.approx(6 * PI2, rel=1e-15)
    assert res.method == "closed" and res.valid


def test_yang1_derived():
    res = compute_bound("yang1-laplacian", euclid([1.0, 2.0], 2), 2)
    assert res.value == pytest.approx((12 + math.sqrt(24)) / 4, rel=1e-14)
    assert res.value == pytest.approx(4.224744871, rel=1e-9)


def test_hp_hand_solved():
    res = compute_bound("hp-laplacian", euclid([1.0, 1.0], 2), 2)
    assert res.value == pytest.approx(3.0, rel=1e-12)
    assert res.residual <= 1e-12 * (2 * 2 / 4) * 10


def test_yang1_k1_collapse_any_n():
    for n in (1, 3, 10):
        res = compute_bound("yang1-laplacian", euclid([7.3], n), 1)
        assert res.value == pytest.approx((1 + 4.0 / n) * 7.3, rel=1e-13)


def test_kohn_odd_uses_c1():
    res = compute_bound("kohn-odd-l", kohn([1.0, 1.2, 1.5], 1, 3), 3)
    assert res.valid and res.value > 1.5


def test_inapplicable_descriptor():
    with pytest.raises(InapplicableBoundError):
        compute_bound("kohn-odd-l", kohn([1.0], 1, 4), 1)
    with pytest.raises(InapplicableBoundError):
        compute_bound("ppw-laplacian", euclid([1.0], 2, l=2), 1)
    with pytest.raises(InapplicableBoundError):
        compute_bound("ppw-laplacian", kohn([1.0], 2, 1), 1)
    with pytest.raises(UnknownBoundError):
        compute_bound("nonsense", euclid([1.0], 2), 1)


def test_verify_only_has_no_bound():
    with pytest.raises(InapplicableBoundError):
        compute_bound("cim-squared-poly", euclid([1.0], 2), 1)


def test_every_descriptor_computes_on_applicable_prefix():
    lam = [1.0, 1.3, 1.7, 2.2]
    cases = {
        (EUCLIDEAN, 1): euclid(lam, 3, 1),
        (EUCLIDEAN, 2): euclid(lam, 3, 2),
        (EUCLIDEAN, 3): euclid(lam, 3, 3),
        (HEISENBERG, 1): kohn(lam, 2, 1),
        (HEISENBERG, 2): kohn(lam, 2, 2),
        (HEISENBERG, 3): kohn(lam, 2, 3),
        (HEISENBERG, 4): kohn(lam, 2, 4),
    }
    seen = set()
    for (problem, l), prefix in cases.items():
        for name in registry_names(problem, l):
            if REGISTRY[name].form == "verify-only":
                continue
            res = compute_bound(name, prefix, len(lam))
            assert res.valid, (name, problem, l)
            assert res.value >= lam[-1] * (1 - 1e-12), (name, res.value)
            seen.add(name)
    assert seen == {n for n, d in REGISTRY.items() if d.form != "verify-only"}


def test_quadratic_collapse_matches_closed_forms_k1():
    # single eigenvalue: quadratic roots collapse to (1+C) lambda_1
    lam1 = 2.31
    res = compute_bound("kohn-yang-l2", kohn([lam1], 3, 2), 1)
    assert res.value == pytest.approx((1 + 4 * 4 / 9) * lam1, rel=1e-13)


# ---------------------------------------------------------------------------
# chain comparison
# ---------------------------------------------------------------------------


def test_chain_k1_all_equal():
    rep = chain_compare(euclid([1.0], 2), 1)
    assert rep.ordered
    assert rep.values() == pytest.approx([3.0, 3.0, 3.0, 3.0], rel=1e-12)


def test_chain_equal_eigenvalues():
    rep = chain_compare(euclid([1.0, 1.0], 2), 2)
    assert rep.ordered
    assert rep.values() == pytest.approx([3.0, 3.0, 3.0, 3.0], rel=1e-12)


def test_chain_generic():
    rep = chain_compare(euclid([1.0, 2.0, 3.0], 3), 3)
    assert rep.ordered
    vals = rep.values()
    assert all(a <= b * (1 + 1e-10) for a, b in zip(vals, vals[1:]))


def test_chain_requires_l1_euclidean():
    with pytest.raises(InapplicableBoundError):
        chain_compare(euclid([1.0], 2, l=2), 1)


# ---------------------------------------------------------------------------
# margins
# ---------------------------------------------------------------------------


def test_margin_unit_square_k1_yang2():
    prefix = euclid([2 * PI2], 2)
    entries = {e.name: e for e in verify_margins(prefix, 5 * PI2, which=["yang2-laplacian"])}
    assert entries["yang2-laplacian"].margin == pytest.approx(PI2, rel=1e-12)


def test_margin_zero_at_bound():
    prefix = euclid([1.0, 1.5], 2)
    b = compute_bound("ppw-laplacian", prefix, 2).value
    entry = margin_at("ppw-laplacian", prefix, 2, b)
    assert entry.margin == pytest.approx(0.0, abs=1e-12)


def test_margin_negative_above_bound():
    prefix = euclid([1.0, 1.5], 2)
    b = compute_bound("ppw-laplacian", prefix, 2).value
    entries = verify_margins(prefix, b + 1.0)
    by_name = {e.name: e for e in entries}
    assert by_name["ppw-laplacian"].margin == pytest.approx(-1.0, abs=1e-12)


def test_margins_skip_inapplicable_with_notice():
    prefix = euclid([1.0, 1.5], 2)
    entries = verify_margins(prefix, 2.0, which=["kohn-yang-l1"])
    assert len(entries) == 1
    assert "inapplicable" in entries[0].note
    assert not entries[0].valid


def test_margin_candidate_below_prefix_rejected():
    with pytest.raises(SpectrumError):
        verify_margins(euclid([1.0, 2.0], 2), 1.5)


# ---------------------------------------------------------------------------
# polyharmonic couple margin
# ---------------------------------------------------------------------------


def test_general_poly_f_g_one_hand_value():
    prefix = euclid([1.0], 2)
    couple = FunctionCouple("const-power", 3.0, (0.0,))
    assert check_general_poly(prefix, 3.0, couple) == pytest.approx(0.0, abs=1e-12)


def test_general_poly_matches_cim_squared_margin():
    values = [1.0, 1.4, 2.3, 2.9]
    for l in (1, 2, 3):
        prefix = euclid(values, 3, l=l)
        z = 4.1
        couple = FunctionCouple("equal-power", z, (2.0,))
        via_couple = check_general_poly(prefix, z, couple)
        via_registry = margin_at("cim-squared-poly", prefix, len(values), z).margin
        assert via_couple == pytest.approx(via_registry, rel=1e-12)


def test_general_poly_k1_closed_form():
    lam1, z, n, l = 2.0, 5.0, 3, 2
    prefix = euclid([lam1], n, l=l)
    couple = FunctionCouple("linear-power", z, (1.0,))
    f = z - lam1
    g = z - lam1
    lhs = f
    rhs = (2.0 / n) * math.sqrt(l * (2 * l + n - 2)) * math.sqrt(
        g * lam1 ** ((l - 1) / l) * (f**2 / (g * (z - lam1))) * lam1 ** (1 / l)
    )
    assert check_general_poly(prefix, z, couple) == pytest.approx(rhs - lhs, rel=1e-13)


def test_general_poly_validates_next_value():
    prefix = euclid([2.0], 2)
    couple = FunctionCouple("const-power", 1.5, (0.0,))
    with pytest.raises(SpectrumError):
        check_general_poly(prefix, 1.5, couple)


# ---------------------------------------------------------------------------
# ordering and homogeneity properties
# ---------------------------------------------------------------------------


def _random_prefix(rng, max_len=12):
    k = int(rng.integers(1, max_len + 1))
    lam1 = float(rng.uniform(0.5, 3.0))
    ratios = rng.uniform(1.0, 1.4, size=k - 1)
    return lam1 * np.concatenate([[1.0], np.cumprod(ratios)])


def test_chain_ordering_random_sample():
    rng = np.random.default_rng(11)
    for _ in range(300):
        vals = np.sort(rng.uniform(0.1, 9.0, size=rng.integers(1, 21)))
        prefix = euclid(vals, int(rng.integers(1, 11)))
        assert chain_compare(prefix).ordered, vals


# kohn-odd-l, kohn-yang-odd-l and niuzhang-odd mix eigenvalue powers through
# the c1 bracket (lambda + lambda^{(l-2)/l}) and cannot scale linearly
HOMOGENEOUS = [
    n
    for n in REGISTRY
    if n not in ("kohn-odd-l", "kohn-yang-odd-l", "niuzhang-odd", "cim-squared-poly")
]


def test_homogeneity_of_homogeneous_descriptors():
    rng = np.random.default_rng(5)
    vals = _random_prefix(rng, 6)
    scale = 37.5
    for name in HOMOGENEOUS:
        desc = REGISTRY[name]
        l = 1 if desc.applies_l(1) else 2 if desc.applies_l(2) else 3 if desc.applies_l(3) else 4
        mk = euclid if desc.problem == EUCLIDEAN else kohn
        p1 = mk(vals, 2, l) if desc.problem == HEISENBERG else euclid(vals, 2, l)
        p2 = mk(scale * vals, 2, l) if desc.problem == HEISENBERG else euclid(scale * vals, 2, l)
        b1 = compute_bound(name, p1)
        b2 = compute_bound(name, p2)
        assert b1.valid and b2.valid, name
        tol = 1e-12 if b1.method in ("closed", "quadratic") else 1e-9
        assert b2.value == pytest.approx(scale * b1.value, rel=tol), name


def test_kohn_odd_l_is_inhomogeneous():
    vals = np.array([1.0, 1.3, 1.9])
    scale = 16.0
    b1 = compute_bound("kohn-odd-l", kohn(vals, 1, 3))
    b2 = compute_bound("kohn-odd-l", kohn(scale * vals, 1, 3))
    assert abs(b2.value - scale * b1.value) > 1e-6 * scale * b1.value


def test_sharper_than_spot_checks():
    rng = np.random.default_rng(99)
    for _ in range(40):
        vals = _random_prefix(rng)
        k = len(vals)
        n = int(rng.integers(1, 5))
        for l in (1, 2, 3):
            wc = compute_bound("wucao-poly", euclid(vals, n, l), k)
            hp = compute_bound("hp-poly", euclid(vals, n, l), k)
            if wc.valid:
                assert wc.value <= hp.value * (1 + 1e-9)
        ky = compute_bound("kohn-yang-l1", kohn(vals, n, 1), k)
        nz = compute_bound("niuzhang-l1", kohn(vals, n, 1), k)
        if ky.valid:  # spread prefixes can be infeasible for the quadratic
            assert ky.value <= nz.value * (1 + 1e-9)
        ko = compute_bound("kohn-odd-l", kohn(vals, n, 3), k)
        kh = compute_bound("kohn-odd-l-homog", kohn(vals, n, 3), k)
        nzo = compute_bound("niuzhang-odd", kohn(vals, n, 3), k)
        if ko.valid:
            assert ko.value <= nzo.value * (1 + 1e-9)
        if kh.valid and ko.valid:
            assert kh.value <= ko.value * (1 + 1e-9)


def test_solver_diagnostics_recorded():
    res = compute_bound("chengyang-clamped", euclid([1.0, 1.2], 2, l=2), 2)
    assert res.valid and res.method == "implicit"
    assert res.iterations > 0
    assert res.residual >= 0.0


# ---------------------------------------------------------------------------
# ordered-sequence product inequality (internal predicate)
# ---------------------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(
    data=st.lists(
        st.tuples(
            st.floats(min_value=0, max_value=10),
            st.floats(min_value=0, max_value=10),
            st.floats(min_value=0, max_value=10),
        ),
        min_size=1,
        max_size=10,
    )
)
def test_chebyshev_sum_margin_nonnegative(data):
    A = np.sort([row[0] for row in data])[::-1]
    B = np.sort([row[1] for row in data])
    C = np.sort([row[2] for row in data])
    margin = chebyshev_sum_margin(A, B, C)
    scale = max(1.0, float(np.sum(A**2) * np.sum(A * B * C)))
    assert margin >= -1e-12 * scale


def test_chebyshev_sum_margin_validates_ordering():
    with pytest.raises(InputError):
        chebyshev_sum_margin([1.0, 2.0], [1.0, 2.0], [1.0, 2.0])  # A increasing

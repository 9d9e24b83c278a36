"""Norms, powers, exponents and their invariants (unitary invariance, Holder
duality, triangle inequality, p-monotonicity)."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schatten_lab import schatten_core as core
from schatten_lab.blockmat import complex_gaussian, random_unitary, wishart
from schatten_lab.errors import ConvergenceError, NearSingularError
from tests.conftest import random_hermitian

# ---------------------------------------------------------------------------
# exponents


def test_conjugate_exponent_values():
    assert core.conjugate_exponent(2.0) == 2.0
    assert core.conjugate_exponent(1.0) == math.inf
    assert core.conjugate_exponent(math.inf) == 1.0
    assert core.conjugate_exponent(4.0) == pytest.approx(4.0 / 3.0, rel=1e-15)


def test_exponent_type():
    p = core.SchattenExponent(4.0)
    assert p.conjugate.value == pytest.approx(4.0 / 3.0)
    assert core.SchattenExponent.parse("inf").is_inf
    assert core.SchattenExponent.parse("1.5").value == 1.5
    assert float(core.SchattenExponent(2)) == 2.0
    with pytest.raises(ValueError):
        core.SchattenExponent(0.5)
    with pytest.raises(ValueError):
        core.SchattenExponent(math.nan)


@given(st.floats(min_value=1.0 + 1e-9, max_value=1e6))
def test_conjugate_involution(p):
    q = core.conjugate_exponent(p)
    assert 1.0 / p + 1.0 / q == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# eigendecomposition


def test_eig_diagonal():
    spec = core.hermitian_eig(np.diag([2.0, 1.0]).astype(complex))
    assert np.allclose(spec.values, [2.0, 1.0])
    assert np.allclose(np.abs(spec.vectors), np.eye(2))


def test_eig_pauli_x():
    spec = core.hermitian_eig(np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.allclose(spec.values, [1.0, -1.0])


def test_eig_reconstruction_seed42():
    rng = np.random.default_rng(42)
    h = random_hermitian(rng, 6)
    w, v = core.hermitian_eig(h)
    residual = np.linalg.norm(h - v @ np.diag(w) @ v.conj().T)
    assert residual <= 1e-10 * (1.0 + np.linalg.norm(h))
    assert np.linalg.norm(v.conj().T @ v - np.eye(6)) <= 1e-10 * 6
    assert np.all(np.diff(w) <= 0)


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError, match="not Hermitian"):
        core.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_convergence_error_carries_residual(rng):
    from dataclasses import replace

    from schatten_lab.config import DEFAULT_TOLS
    h = random_hermitian(rng, 8)
    with pytest.raises(ConvergenceError) as err:
        core.hermitian_eig(h, replace(DEFAULT_TOLS, jacobi_sweeps=0))
    assert err.value.residual > 0.0


# ---------------------------------------------------------------------------
# norms


def test_norm_identity():
    for n in (1, 3, 6):
        for p in (1.0, 1.7, 2.0, 5.0):
            assert core.schatten_norm(np.eye(n), p) == pytest.approx(
                n ** (1.0 / p), rel=1e-13)
        assert core.schatten_norm(np.eye(n), math.inf) == pytest.approx(1.0)


def test_norm_nilpotent_shift():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    for p in (1.0, 1.5, 2.0, 3.0, math.inf):
        assert core.schatten_norm(a, p) == pytest.approx(1.0, abs=1e-13)


def test_norm_p2_is_frobenius():
    rng = np.random.default_rng(7)
    a = complex_gaussian(rng, 5, 5)
    assert core.schatten_norm(a, 2.0) == pytest.approx(
        float(np.linalg.norm(a)), rel=1e-12)


def test_norm_p1_psd_is_trace():
    rng = np.random.default_rng(3)
    a = wishart(rng, 4)
    assert core.schatten_norm(a, 1.0) == pytest.approx(
        float(np.trace(a).real), rel=1e-12)


def test_norm_zero_only_for_zero():
    assert core.schatten_norm(np.zeros((3, 2)), 1.7) == 0.0
    rng = np.random.default_rng(0)
    a = complex_gaussian(rng, 3, 3)
    assert core.schatten_norm(a, 1.7) > 0.0


@pytest.mark.parametrize("shape", [(4, 4), (3, 5), (6, 2)])
def test_singular_values_vs_numpy(shape, rng):
    a = complex_gaussian(rng, *shape)
    ours = core.singular_values(a)
    ref = np.linalg.svd(a, compute_uv=False)
    assert np.max(np.abs(ours - ref)) <= 1e-10 * (1.0 + ref[0])
    for p in (1.0, 1.3, 2.0, 4.0, math.inf):
        want = core.norm_from_singular_values(ref, p)
        assert core.schatten_norm(a, p) == pytest.approx(want, rel=1e-10)


def test_trace_abs_power_examples(rng):
    assert core.trace_abs_power(np.diag([1.0, 2.0]), 3.0) == pytest.approx(9.0)
    assert core.trace_abs_power(np.zeros((3, 3)), 2.5) == 0.0
    rng5 = np.random.default_rng(5)
    a = complex_gaussian(rng5, 3, 3)
    assert core.trace_abs_power(a, 2.5) == pytest.approx(
        core.schatten_norm(a, 2.5) ** 2.5, rel=1e-12)
    with pytest.raises(ValueError):
        core.trace_abs_power(a, math.inf)


# ---------------------------------------------------------------------------
# PSD powers


def test_psd_power_examples():
    assert np.allclose(core.psd_power(np.diag([4.0, 9.0]), 0.5),
                       np.diag([2.0, 3.0]))
    rng = np.random.default_rng(1)
    a = wishart(rng, 4)
    assert np.max(np.abs(core.psd_power(a, 1.0) - a)) <= 1e-12 * (
        1.0 + np.max(np.abs(a)))


def test_psd_power_sqrt_round_trip():
    rng = np.random.default_rng(11)
    a = wishart(rng, 5)
    root = core.psd_power(a, 0.5)
    assert np.linalg.norm(root @ root - a) <= 1e-9 * np.linalg.norm(a)


def test_psd_power_zero_eigenvalue():
    a = np.diag([1.0, 0.0])
    got = core.psd_power(a, 0.5)
    assert np.allclose(got, np.diag([1.0, 0.0]))


def test_psd_power_negative_near_singular():
    a = np.diag([1.0, 1e-14])
    with pytest.raises(NearSingularError):
        core.psd_power(a, -1.0)
    inv = core.psd_power(np.diag([2.0, 4.0]), -1.0)
    assert np.allclose(inv, np.diag([0.5, 0.25]))


def test_psd_rejects_indefinite():
    with pytest.raises(ValueError, match="not PSD"):
        core.psd_power(np.diag([1.0, -0.5]), 0.5)


# ---------------------------------------------------------------------------
# invariants (property style)

_seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


@settings(max_examples=30, deadline=None)
@given(_seeds, st.sampled_from([1.0, 1.4, 2.0, 3.0, 10.0, math.inf]))
def test_unitary_invariance(seed, p):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    a = complex_gaussian(rng, n, n)
    u = random_unitary(rng, n)
    v = random_unitary(rng, n)
    base = core.schatten_norm(a, p)
    assert abs(core.schatten_norm(u @ a @ v, p) - base) <= 1e-10 * base


@settings(max_examples=30, deadline=None)
@given(_seeds, st.sampled_from([1.0, 1.5, 2.0, 4.0]))
def test_holder_inequality(seed, p):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    a = complex_gaussian(rng, n, n)
    b = complex_gaussian(rng, n, n)
    q = core.conjugate_exponent(p)
    lhs = abs(complex(np.trace(a @ b)))
    assert lhs <= (1.0 + 1e-10) * core.schatten_norm(a, p) * core.schatten_norm(b, q)


@settings(max_examples=25, deadline=None)
@given(_seeds, st.sampled_from([1.25, 1.5, 2.0, 3.0, 8.0]))
def test_duality_witness(seed, p):
    """For PSD M the normalized (p-1)-th power is the norm-attaining dual."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    m = wishart(rng, n)
    q = core.conjugate_exponent(p)
    k = core.psd_power(m, p - 1.0)
    k = k / core.schatten_norm(k, q)
    attained = float(np.trace(k @ m).real)
    assert attained == pytest.approx(core.schatten_norm(m, p), rel=1e-9)
    assert core.schatten_norm(k, q) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(_seeds, st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf]))
def test_triangle_and_homogeneity(seed, p):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    a = complex_gaussian(rng, n, n)
    b = complex_gaussian(rng, n, n)
    na, nb = core.schatten_norm(a, p), core.schatten_norm(b, p)
    assert core.schatten_norm(a + b, p) <= na + nb + 1e-10 * (na + nb)
    for k in (0.0, 0.5, -3.0, 2.0j):
        assert core.schatten_norm(k * a, p) == pytest.approx(
            abs(k) * na, rel=1e-10, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(_seeds)
def test_p_monotonicity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    a = complex_gaussian(rng, n, n)
    grid = [1.0, 1.2, 1.7, 2.0, 2.8, 4.0, 9.0, math.inf]
    norms = [core.schatten_norm(a, p) for p in grid]
    for lo, hi in zip(norms, norms[1:]):
        assert hi <= lo + 1e-12 * max(lo, 1.0)


# ---------------------------------------------------------------------------
# JSON exchange


def test_matrix_json_round_trip(rng):
    a = complex_gaussian(rng, 3, 5)
    obj = core.matrix_to_json(a)
    assert obj["rows"] == 3 and obj["cols"] == 5
    assert len(obj["data"]) == 15
    back = core.matrix_from_json(obj)
    assert np.array_equal(back, a)


def test_matrix_json_rejects_bad_length():
    with pytest.raises(ValueError):
        core.matrix_from_json({"rows": 2, "cols": 2, "data": [[1.0, 0.0]]})


def test_as_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        core.as_matrix(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        core.as_matrix(np.array([[np.inf + 0j, 0.0], [0.0, 1.0]]))


def test_entropy():
    assert core.von_neumann_entropy([1.0, 0.0]) == 0.0
    assert core.von_neumann_entropy([0.5, 0.5]) == pytest.approx(math.log(2.0))
    assert core.von_neumann_entropy([0.75, 0.25]) == pytest.approx(
        -(0.75 * math.log(0.75) + 0.25 * math.log(0.25)))

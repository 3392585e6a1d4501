import math

import numpy as np
import pytest
from generators import lemma_sequences
from hypothesis import given
from hypothesis import strategies as st

from gscon.qcore import StateVector, apply_local, apply_sequence
from gscon.traversal import (
    StaircaseParams,
    complete_unitary,
    f_step,
    ghz_projectors,
    half_iterations,
    staircase_full,
    staircase_half,
    step1_pair,
    step2_beta,
    step2_finisher,
    traversal_report,
)

V0, V1 = StateVector.basis("000"), StateVector.basis("111")
P = np.eye(8) - sum(ghz_projectors())


def ghz_mix(g1):
    amps = np.zeros(8, dtype=complex)
    amps[0], amps[7] = g1, math.sqrt(1 - g1 * g1)
    return StateVector(3, amps)


def p_weight(state):
    return float(np.vdot(state.amps, P @ state.amps).real)


def bisect_beta(gamma1):
    """Solve sqrt(1 - (1-b^2)/(2(1+b^2))) = gamma1 for b in [0, 1] by bisection."""
    def g(b):
        return math.sqrt(1 - (1 - b * b) / (2 * (1 + b * b))) - gamma1

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


class TestFStep:
    def test_from_one(self):
        assert f_step(1.0, 0.1) == pytest.approx(math.sqrt(0.9))

    def test_fixed_point(self):
        assert f_step(1 / math.sqrt(2), 0.3) ** 2 == pytest.approx(0.5)

    def test_example_value(self):
        assert f_step(0.9, 0.1) ** 2 == pytest.approx(0.748)


class TestStep1:
    @pytest.mark.parametrize("g1", [1.0, 0.95, 0.85, 0.75])
    def test_pair_moves_amplitude(self, g1):
        params = StaircaseParams(0.1)
        U1, U2, nxt = step1_pair(g1, params)
        mid = apply_local(ghz_mix(g1), U1)
        assert p_weight(mid) == pytest.approx(params.Delta, abs=1e-10)
        out = apply_local(mid, U2)
        assert out.distance(ghz_mix(nxt)) <= 1e-10
        assert U1.qubits == (0, 1) and U2.qubits == (1, 2)

    def test_rejects_low_gamma(self):
        with pytest.raises(ValueError):
            step1_pair(0.5, StaircaseParams(0.1))


class TestStep2:
    @pytest.mark.parametrize("g1", [0.71, 0.72, 0.74, math.sqrt(0.55)])
    def test_closed_form_matches_bisection(self, g1):
        assert step2_beta(g1) == pytest.approx(bisect_beta(g1), abs=1e-12)

    def test_example(self):
        beta = step2_beta(math.sqrt(0.55))
        assert beta**2 == pytest.approx(0.1 / 1.9)

    def test_equal_superposition_is_trivial(self):
        ops = step2_finisher(1 / math.sqrt(2), StaircaseParams(0.1))
        assert step2_beta(1 / math.sqrt(2)) == 0
        out = apply_sequence(ghz_mix(1 / math.sqrt(2)), ops)[-1]
        assert out.distance(ghz_mix(1 / math.sqrt(2))) <= 1e-12

    @given(st.floats(0.01, 0.45), st.floats(0.0, 1.0))
    def test_finisher_lands_on_equal_superposition(self, Delta, t):
        params = StaircaseParams(Delta)
        g1 = math.sqrt(0.5 + t * params.zeta)
        state = ghz_mix(g1)
        beta = step2_beta(g1)
        for op in step2_finisher(g1, params):
            state = apply_local(state, op)
            assert p_weight(state) <= beta**2 / 2 + 1e-10
        assert beta**2 / 2 <= Delta + 1e-12
        assert state.distance(ghz_mix(1 / math.sqrt(2))) <= 1e-10

    def test_window_enforced(self):
        with pytest.raises(ValueError):
            step2_finisher(1.0, StaircaseParams(0.1))


class TestCompleteUnitary:
    def test_identity(self):
        assert np.allclose(complete_unitary([(np.array([1, 0]), 0)]), np.eye(2))

    def test_bell_to_basis(self):
        r = 1 / math.sqrt(2)
        U = complete_unitary([(np.array([r, 0, 0, r]), 0), (np.array([r, 0, 0, -r]), 3)])
        assert np.max(np.abs(U @ U.conj().T - np.eye(4))) <= 1e-12
        assert np.allclose(U @ np.array([r, 0, 0, r]), [1, 0, 0, 0])

    def test_conflicting_sources(self):
        with pytest.raises(ValueError):
            complete_unitary([(np.array([1, 0]), 0), (np.array([1, 0]), 1)])

    def test_deterministic(self):
        cols = [(np.array([0.6, 0.8j, 0]), 1)]
        assert np.array_equal(complete_unitary(cols), complete_unitary(cols))


class TestStaircase:
    @pytest.mark.parametrize("Delta", [0.1, 0.05, 0.3])
    def test_half_reaches_equal_superposition(self, Delta):
        params = StaircaseParams(Delta)
        ops = staircase_half(params)
        state = V0
        for op in ops:
            state = apply_local(state, op)
            assert p_weight(state) <= Delta + 1e-10
        assert state.distance(ghz_mix(1 / math.sqrt(2))) <= 1e-9
        bound = math.ceil(0.5 / (2 * Delta * params.zeta)) + 1
        assert half_iterations(params) <= bound

    def test_full_report(self):
        S, T = ghz_projectors()
        r = traversal_report(V0, V1, staircase_full(StaircaseParams(0.1)), S, T)
        assert r.eps <= 1e-9
        assert r.max_overlap <= 0.1 + 1e-10
        assert r.k_orthogonal and r.lemma_applicable and r.bound_satisfied
        assert r.bound <= r.max_overlap

    def test_only_adjacent_pairs(self):
        for op in staircase_full(StaircaseParams(0.05)):
            assert op.qubits in {(0, 1), (1, 2)}
            assert np.max(np.abs(op.matrix @ op.matrix.conj().T - np.eye(4))) <= 1e-10

    def test_truncated_staircase_distance(self):
        S, T = ghz_projectors()
        r = traversal_report(V0, V1, staircase_half(StaircaseParams(0.1)), S, T)
        assert r.eps == pytest.approx(math.sqrt(2 - math.sqrt(2)), abs=1e-9)
        assert not r.lemma_applicable

    def test_length_nonincreasing_in_delta(self):
        lengths = [len(staircase_full(StaircaseParams(d))) for d in (0.01, 0.02, 0.05, 0.1)]
        assert lengths == sorted(lengths, reverse=True)

    def test_params_validation(self):
        with pytest.raises(ValueError):
            StaircaseParams(0.5)
        p = StaircaseParams(0.2)
        assert p.beta**2 == pytest.approx(0.2) and 0 < p.zeta < 0.5


class TestTraversalReport:
    def test_empty_sequence(self):
        S, T = ghz_projectors()
        r = traversal_report(V0, V0, [], S, T)
        assert r.m == 0 and r.eps == 0 and r.max_overlap == 0 and not r.lemma_applicable

    def test_rejects_non_projector(self):
        with pytest.raises(ValueError):
            traversal_report(V0, V1, [], 0.5 * np.eye(8), np.zeros((8, 8)))

    def test_rejects_overlapping_projectors(self):
        S, _ = ghz_projectors()
        with pytest.raises(ValueError):
            traversal_report(V0, V1, [], S, S)

    def test_overlaps_in_unit_interval(self):
        S, T = ghz_projectors()
        r = traversal_report(V0, V1, staircase_full(StaircaseParams(0.2)), S, T)
        assert all(-1e-10 <= o <= 1 + 1e-10 for o in r.overlaps)

    @given(st.integers(0, 2**31 - 1))
    def test_bound_holds_whenever_applicable(self, seed):
        S, T = ghz_projectors()
        for _, seq in lemma_sequences(np.random.default_rng(seed), 5):
            r = traversal_report(V0, V1, seq, S, T, k_orthogonal=True)
            if r.lemma_applicable:
                assert r.bound_satisfied

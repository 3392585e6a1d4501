import math

import numpy as np
import pytest
from circuits import toy_circuits
from generators import random_stconn
from hypothesis import given
from hypothesis import strategies as st

from gscon.korth import Subspace, k_orth_subspaces
from gscon.qcore import (
    CNOT,
    I2,
    LocalHamiltonian,
    LocalOperator,
    StateVector,
    X,
    apply_local,
    energy,
    haar_unitary,
    min_eigenvalue,
)
from gscon.reductions import (
    CircuitDescriptor,
    Cnf3,
    circuit_to_gscon,
    clause_term,
    cnf_clause_oracle,
    cnf_hamiltonian,
    expand_succinct,
    go_compose,
    go_witness_sequence,
    h_dominates_p_check,
    history_circuit,
    history_state,
    kitaev_hamiltonian,
    oracle3sat_to_succinct,
    p_matrix,
    p_pieces,
    parse_dimacs,
    path_witness,
    stconn_bfs,
    stconn_partition,
    stconn_to_gscon,
    succinct_direct,
    with_proof_copy,
)
from gscon.verify import Verdict, verify_witness

OR3 = Cnf3(3, ((1, 2, 3),))
XOR2 = Cnf3(2, ((1, 2, 2), (-1, -2, -2)))


class TestDimacs:
    def test_round_trip(self):
        assert parse_dimacs(OR3.to_dimacs()) == OR3

    def test_comments_and_wrapped_lines(self):
        text = "c hello\np cnf 3 2\n1 -2\n3 0 -1 2 3\n0\n"
        assert parse_dimacs(text).clauses == ((1, -2, 3), (-1, 2, 3))

    @pytest.mark.parametrize(
        "text",
        ["1 2 3 0\n", "p cnf 3 1\n1 2 0\n", "p cnf 3 1\n1 2 4 0\n", "p cnf 3 2\n1 2 3 0\n", "p cnf 3 1\n1 2 x 0\n", "p dnf 3 1\n"],
    )
    def test_rejects_malformed(self, text):
        with pytest.raises(ValueError):
            parse_dimacs(text)


class TestBfs:
    def test_single_clause_path(self):
        ok, path = stconn_bfs(OR3, "100", "001")
        assert ok and path[0] == "100" and path[-1] == "001" and len(path) == 3
        assert all(OR3.satisfies(p) for p in path)

    def test_trivial_path(self):
        assert stconn_bfs(OR3, "111", "111") == (True, ["111"])

    def test_xor_disconnected(self):
        assert stconn_bfs(XOR2, "10", "01") == (False, None)

    def test_rejects_unsatisfying_endpoint(self):
        with pytest.raises(ValueError):
            stconn_bfs(OR3, "000", "111")


class TestClauseTerms:
    def test_single_clause_projector(self):
        qubits, M = clause_term((1, 2, 3))
        assert qubits == (0, 1, 2)
        assert np.array_equal(M, np.diag([1, 0, 0, 0, 0, 0, 0, 0]))

    def test_negated_literal(self):
        _qubits, M = clause_term((-1, 2, 3))
        assert M[4, 4] == 1 and np.trace(M) == 1

    def test_tautology_has_zero_term(self):
        assert not np.any(clause_term((1, -1, 2))[1])
        assert cnf_hamiltonian(Cnf3(2, ((1, -1, 2),))).terms == ()

    def test_energy_counts_violated_clauses(self):
        H = cnf_hamiltonian(Cnf3(3, ((1, 2, 3), (1, 2, -3))))
        for z in range(8):
            s = format(z, "03b")
            violated = (s == "000") + (s == "001")
            assert energy(H, StateVector.basis(s)) == pytest.approx(violated)


class TestStconnReduction:
    def test_parameters_n3(self):
        inst = stconn_to_gscon(OR3, "100", "001").instance
        assert inst.eta2 == inst.delta == 2.0**-10
        assert (inst.eta1, inst.eta3, inst.eta4, inst.l, inst.m) == (0.0, 0.0, 0.25, 1, 8)

    def test_yes_witness(self):
        red = stconn_to_gscon(OR3, "100", "001")
        _, path = stconn_bfs(OR3, "100", "001")
        r = verify_witness(red.instance, red.witness(path))
        assert r.verdict is Verdict.YES and max(r.energies) == 0

    def test_bad_path_is_no(self):
        red = stconn_to_gscon(OR3, "100", "001")
        r = verify_witness(red.instance, path_witness(["100", "000", "001"], 8))
        assert r.verdict is Verdict.NO and r.first_violation == 1

    def test_path_witness_rejects_jumps(self):
        with pytest.raises(ValueError):
            path_witness(["00", "11"], 4)

    def test_no_side_structure(self):
        S, T = stconn_partition(XOR2, "10")
        H = stconn_to_gscon(XOR2, "10", "01").instance.H
        assert h_dominates_p_check(H, S, T)
        assert k_orth_subspaces(S, T, 1)

    def test_dominance_failures(self):
        S = Subspace.from_bitstrings(2, ["00"])
        T = Subspace.from_bitstrings(2, ["11"])
        assert not h_dominates_p_check(LocalHamiltonian(2, ()), S, T)
        penal = LocalHamiltonian(2, (LocalOperator((0, 1), np.diag([1.0, 1, 1, 0])),))
        assert not h_dominates_p_check(penal, S, T)

    def test_dominance_rejects_offdiagonal(self):
        S = Subspace.from_bitstrings(1, ["0"])
        T = Subspace.from_bitstrings(1, ["1"])
        with pytest.raises(ValueError):
            h_dominates_p_check(LocalHamiltonian(1, (LocalOperator((0,), X),)), S, T)

    @given(st.integers(0, 2**31 - 1))
    def test_random_formulas(self, seed):
        case = random_stconn(np.random.default_rng(seed))
        if case is None:
            return
        phi, x, y = case
        red = stconn_to_gscon(phi, x, y)
        assert red.instance.eta2 == red.instance.delta == 2.0 ** -(2 * phi.num_vars + 4)
        ok, path = stconn_bfs(phi, x, y)
        if ok:
            r = verify_witness(red.instance, red.witness(path))
            assert r.verdict is Verdict.YES and max(r.energies, default=0) <= 1e-12
        else:
            S, T = stconn_partition(phi, x)
            assert h_dominates_p_check(red.instance.H, S, T)
            assert k_orth_subspaces(S, T, 1)


class TestKitaev:
    def identity_circuit(self):
        return CircuitDescriptor((LocalOperator((0,), I2),), 1, 0, output=0)

    def test_accepting_history_has_zero_energy(self):
        c = self.identity_circuit()
        kh = kitaev_hamiltonian(c, proofs=[StateVector.basis("1")])
        assert energy(kh.hamiltonian, history_state(c, StateVector.basis("1"))) == pytest.approx(0, abs=1e-14)
        assert kh.alpha_bound == 0

    def test_rejecting_history_energy(self):
        c = self.identity_circuit()
        kh = kitaev_hamiltonian(c)
        e = energy(kh.hamiltonian, history_state(c, StateVector.basis("0")))
        assert e == pytest.approx(1 / (c.L + 1))

    def test_all_rejecting_circuit_has_gap(self):
        c = CircuitDescriptor((LocalOperator((1,), I2),), 1, 1, output=1)
        assert min_eigenvalue(kitaev_hamiltonian(c).hamiltonian) > 1e-6

    def test_history_state_small(self):
        h = history_state(self.identity_circuit(), StateVector.basis("0"))
        expected = np.zeros(4)
        expected[0] = expected[1] = 1 / math.sqrt(2)
        assert np.allclose(h.amps, expected)

    def test_history_norm_random(self, rng):
        for _ in range(10):
            gates = tuple(LocalOperator((int(q),), haar_unitary(2, rng)) for q in rng.integers(2, size=3))
            c = CircuitDescriptor(gates, 1, 1)
            h = history_state(c, StateVector.basis("1"))
            assert abs(np.linalg.norm(h.amps) - 1) <= 1e-12

    def test_partial_acceptance_energy_bound(self):
        # accepted with probability cos^2(0.1); history energy must stay below the alpha bound
        theta = 0.1
        R = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        c = CircuitDescriptor((LocalOperator((0,), R),), 1, 0, output=0)
        proof = StateVector.basis("1")
        eps = 1 - c.accept_probability(proof)
        kh = kitaev_hamiltonian(c, completeness_error=eps, proofs=[proof])
        assert energy(kh.hamiltonian, history_state(c, proof)) <= kh.alpha_bound + 1e-12

    def test_history_circuit_prepares_history_state(self):
        for _, circ, accepted in toy_circuits():
            circ = with_proof_copy(circ)
            x = accepted[0]
            start = StateVector.basis(x + "0" * (circ.n_work - circ.n_proof + circ.L))
            state = start
            for op in history_circuit(circ):
                assert op.arity <= 2
                state = apply_local(state, op)
            assert state.distance(history_state(circ, StateVector.basis(x))) <= 1e-10

    def test_proof_copy(self):
        c = with_proof_copy(CircuitDescriptor((LocalOperator((0, 1), CNOT),), 1, 1, output=1))
        assert c.n_ancilla == 2 and c.gates[0].qubits == (0, 2)

    def test_circuit_validation(self):
        with pytest.raises(ValueError):
            CircuitDescriptor((LocalOperator((0,), np.diag([1, 0])),), 1, 0)
        with pytest.raises(ValueError):
            CircuitDescriptor((), 1, 0, output=3)


class TestGo:
    def test_p_decomposition_exact(self):
        expected = np.eye(8)
        expected[0, 0] = expected[7, 7] = 0
        assert np.array_equal(p_matrix(), expected)
        assert all(len(q) == 2 for q, _ in p_pieces())

    def test_zero_hprime(self):
        go = go_compose(LocalHamiltonian(1, ()), 0.0, 1.0, 2)
        assert go.instance.H.terms == ()
        seq = go_witness_sequence("", [], 1)
        assert len(seq) == 2
        r = verify_witness(go.instance, seq)
        assert r.verdict is Verdict.YES

    def test_single_term_energy(self):
        go = go_compose(LocalHamiltonian(1, (LocalOperator((0,), np.diag([0, 1])),)), 0.0, 1.0, 4)
        H = go.instance.H
        assert energy(H, StateVector.basis("1010")) == pytest.approx(1)
        for x in "01":
            assert energy(H, StateVector.basis(x + "000")) == pytest.approx(0)
            assert energy(H, StateVector.basis(x + "111")) == pytest.approx(0)
        assert go.instance.eta2 == pytest.approx(1 / 256)
        assert go.go_qubits == (1, 2, 3)

    def test_empty_gap_rejected(self):
        with pytest.raises(ValueError):
            go_compose(LocalHamiltonian(1, ()), 0.1, 0.1, 4)

    @pytest.mark.parametrize("case", toy_circuits(), ids=lambda c: c[0])
    def test_end_to_end(self, case):
        _, circ, accepted = case
        red = circuit_to_gscon(circ, accepted)
        inst = red.instance
        copied = with_proof_copy(circ)
        assert inst.m == 2 * (copied.n_proof + len(red.W) + 1)
        for x in accepted:
            seq = red.witness(x)
            assert len(seq) == inst.m
            r = verify_witness(inst, seq)
            assert max(r.energies) <= inst.eta1 + 1e-12
            assert r.final_distance <= 1e-9
            assert r.verdict is Verdict.YES

    def test_unsupported_gate_for_history_circuit(self, rng):
        U = haar_unitary(4, rng)
        c = CircuitDescriptor((LocalOperator((0, 1), U),), 1, 1, output=1)
        with pytest.raises(ValueError):
            history_circuit(c)


class TestSuccinct:
    def formula(self, n_exp, rng, clauses):
        N = 2**n_exp
        cl = []
        for _ in range(clauses):
            vs = rng.choice(np.arange(1, N + 1), size=3, replace=N < 3)
            cl.append(tuple(int(v) * int(s) for v, s in zip(vs, rng.choice([-1, 1], size=3))))
        return Cnf3(N, tuple(cl))

    def test_clause_term_shape(self):
        si = oracle3sat_to_succinct(cnf_clause_oracle(Cnf3(4, ((1, 2, 3),))), 2, 0)
        M, qubits = si.oracles.ham_oracle(0)
        P = np.diag([0, 1, 1, 0])
        assert qubits == (0, 1, 2, 4, 5)
        assert np.array_equal(M, np.kron(np.diag([1, 0, 0, 0, 0, 0, 0, 0]), P))

    @pytest.mark.parametrize("n_exp", [1, 2, 3])
    def test_expansion_matches_direct(self, n_exp, rng):
        for r_exp in (0, 1, 2):
            phi = self.formula(n_exp, rng, 2**r_exp)
            a = expand_succinct(oracle3sat_to_succinct(cnf_clause_oracle(phi), n_exp, r_exp))
            b = succinct_direct(phi)
            assert len(a.H.terms) == len(b.H.terms)
            for s, t in zip(a.H.terms, b.H.terms):
                assert s.qubits == t.qubits and np.array_equal(s.matrix, t.matrix)
            assert np.array_equal(a.psi.amps, b.psi.amps) and np.array_equal(a.phi.amps, b.phi.amps)
            assert (a.eta1, a.eta2, a.eta3, a.eta4, a.delta, a.l, a.m) == (b.eta1, b.eta2, b.eta3, b.eta4, b.delta, b.l, b.m)

    def test_satisfying_witness_is_yes(self, rng):
        for n_exp in (1, 2, 3):
            phi = self.formula(n_exp, rng, 4)
            sat = phi.satisfying()
            if not sat:
                continue
            si = oracle3sat_to_succinct(cnf_clause_oracle(phi), n_exp, 2)
            r = verify_witness(expand_succinct(si), si.witness(sat[0]))
            assert r.verdict is Verdict.YES
            assert si.m == 2 ** (n_exp + 1) + 2

    def test_unsatisfiable_formula_penalizes_go_states(self):
        clauses = tuple((s1 * 1, s2 * 2, s2 * 2) for s1 in (1, -1) for s2 in (1, -1))
        phi = Cnf3(2, clauses)
        inst = expand_succinct(oracle3sat_to_succinct(cnf_clause_oracle(phi), 1, 2))
        for z in range(4):
            for go in ("01", "10"):
                s = format(z, "02b") + go
                assert energy(inst.H, StateVector.basis(s)) >= 1

    def test_oracle_rejects_bad_clause(self):
        si = oracle3sat_to_succinct(lambda i: (1, 2), 1, 0)
        with pytest.raises(ValueError):
            si.oracles.ham_oracle(0)

    def test_oracle_index_range(self):
        si = oracle3sat_to_succinct(cnf_clause_oracle(Cnf3(2, ((1, 2, 2),))), 1, 0)
        with pytest.raises(IndexError):
            si.oracles.ham_oracle(1)
        with pytest.raises(IndexError):
            si.oracles.psi_oracle(4)

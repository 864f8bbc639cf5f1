import itertools
import json

import numpy as np
import pytest

from blochsectors.bloch_oracle import (
    bloch_dense,
    bloch_expand,
    conjugated_basis,
    gell_mann_basis,
    sectors_from_bloch,
)
from blochsectors.errors import SizeError
from blochsectors.qstate import make_ghz, make_product, random_state, random_unitary

from conftest import corpus

X = np.array([[0, 1], [1, 0]])
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1, -1])


class TestBasis:
    def test_qubit_basis_is_pauli(self):
        b = gell_mann_basis(2).matrices
        for got, want in zip(b, [np.eye(2), X, Y, Z]):
            assert np.allclose(got, want)

    def test_qutrit_is_scaled_gell_mann(self):
        b = gell_mann_basis(3).matrices
        assert len(b) == 9
        # lambda_8 in the usual normalization
        lam8 = np.diag([1, 1, -2]) / np.sqrt(3)
        assert np.allclose(b[-1], np.sqrt(1.5) * lam8)
        for g in b[1:]:
            assert np.trace(g @ g).real == pytest.approx(3, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 7])
    def test_orthogonality_and_tracelessness(self, d):
        b = gell_mann_basis(d).matrices
        gram = np.einsum("iab,jba->ij", b.conj().transpose(0, 2, 1), b)
        assert np.allclose(gram, d * np.eye(d * d), atol=1e-12)
        for g in b[1:]:
            assert abs(np.trace(g)) < 1e-12
            assert np.allclose(g, g.conj().T)


class TestExpansion:
    def test_bell_coefficients(self):
        c = bloch_expand(make_ghz(2, 2))
        assert set(c.entries) == {(0, 0), (1, 1), (2, 2), (3, 3)}
        assert c[(0, 0)] == pytest.approx(1)
        assert c[(1, 1)] == pytest.approx(1)
        assert c[(2, 2)] == pytest.approx(-1)
        assert c[(3, 3)] == pytest.approx(1)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_qubit_ghz_structure(self, n):
        c = bloch_expand(make_ghz(n, 2))
        assert len(c) == 2**n  # 2^(N-1) diagonal + 2^(N-1) off-diagonal terms
        for idx, r in c.entries.items():
            if set(idx) <= {0, 3}:
                assert idx.count(3) % 2 == 0
                assert r == pytest.approx(1)
            else:
                assert set(idx) <= {1, 2}
                ny = idx.count(2)
                assert ny % 2 == 0
                assert r == pytest.approx((-1) ** (ny // 2))

    def test_matches_full_operator_traces(self):
        # independent route: explicit Kronecker products against rho
        s = random_state(2, 3, 11)
        rho = np.outer(s.amplitudes, s.amplitudes.conj())
        b = gell_mann_basis(3).matrices
        dense = bloch_dense(s)
        for j, k in itertools.product(range(9), repeat=2):
            want = np.trace(np.kron(b[j], b[k]) @ rho)
            assert abs(want.imag) < 1e-12
            assert dense[j, k] == pytest.approx(want.real, abs=1e-12)

    @pytest.mark.parametrize("n,d", [(3, 2), (2, 3), (3, 3)])
    def test_normalization(self, n, d):
        c = bloch_expand(random_state(n, d, 3))
        assert c[(0,) * n] == pytest.approx(1, abs=1e-12)
        assert c.sum_of_squares() == pytest.approx(d**n, rel=1e-9)

    def test_size_guard(self):
        with pytest.raises(SizeError):
            bloch_expand(make_ghz(14, 4))

    def test_jsonl_sorted(self):
        rows = [json.loads(line) for line in bloch_expand(make_ghz(3, 2)).to_jsonl().splitlines()]
        idxs = [row["idx"] for row in rows]
        assert idxs == sorted(idxs)
        assert idxs[0] == [0, 0, 0]


class TestSectors:
    def test_bell(self):
        assert np.allclose(sectors_from_bloch(bloch_expand(make_ghz(2, 2))).lengths, [1, 0, 3])

    def test_ghz3(self):
        assert np.allclose(sectors_from_bloch(bloch_expand(make_ghz(3, 2))).lengths, [1, 0, 3, 4])

    def test_product(self):
        assert np.allclose(sectors_from_bloch(bloch_expand(make_product(3, 2))).lengths, [1, 3, 3, 1])

    def test_dense_and_sparse_agree(self):
        s = random_state(3, 3, 8)
        a = sectors_from_bloch(bloch_expand(s)).lengths
        b = sectors_from_bloch(bloch_dense(s), d=3).lengths
        assert np.allclose(a, b, atol=1e-10)

    @pytest.mark.parametrize("n,d", [(2, 2), (4, 2), (2, 4), (3, 3)])
    def test_completeness(self, n, d):
        for s in corpus(n, d, 5):
            assert sectors_from_bloch(bloch_expand(s)).total() == pytest.approx(d**n, rel=1e-9)

    @pytest.mark.parametrize("n,d", [(3, 2), (2, 3), (3, 3)])
    def test_basis_choice_invariance(self, n, d):
        rng = np.random.default_rng(7)
        base = gell_mann_basis(d)
        for s in corpus(n, d, 3):
            bases = [conjugated_basis(base, random_unitary(d, rng)) for _ in range(n)]
            ref = sectors_from_bloch(bloch_expand(s)).lengths
            rotated = sectors_from_bloch(bloch_expand(s, bases)).lengths
            assert np.allclose(ref, rotated, atol=1e-9, rtol=0)

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochsectors.closed_forms import ghz_sectors_exact, product_sectors_exact
from blochsectors.errors import DomainError
from blochsectors.identities import (
    RELATIONS,
    applicable,
    check_even_sector_relation,
    check_k_purity,
    check_odd_qubit_balance,
    check_pq_relation,
    check_small_n_identity,
    check_symmetrized_max,
    check_trR_relation,
    h_invariant,
    run_relations,
    schmidt_delta_check,
    sum_trace_r,
)
from blochsectors.qstate import make_ghz, make_product, random_state, reduce, tensor
from blochsectors.sector_engine import (
    InversionMap,
    SectorDistribution,
    apply_inversion,
    sectors_from_purities,
)

from conftest import ORACLE_CELLS, corpus

seeds = st.integers(min_value=0, max_value=2**31 - 1)


def dist(values, d):
    return SectorDistribution(len(values) - 1, d, values)


class TestDistributionRelations:
    def test_pq_bell_qubits(self):
        r = check_pq_relation(ghz_sectors_exact(2, 2))
        assert (r.left, r.right, r.residual) == (12, 12, 0)

    def test_pq_ghz3(self):
        r = check_pq_relation(ghz_sectors_exact(3, 2))
        assert (r.left, r.right) == (32, 32)

    def test_k0_is_normalization(self):
        r = check_k_purity(ghz_sectors_exact(4, 3), 0)
        assert r.left == 81 and r.right == 81

    def test_k1_ghz3(self):
        r = check_k_purity(ghz_sectors_exact(3, 2), 1)
        assert (r.left, r.right) == (6, 6)

    def test_k2_ghz_qutrit_five_exact(self):
        r = check_k_purity(ghz_sectors_exact(5, 3), 2)
        assert r.residual == 0 and r.passed

    def test_k_out_of_range(self):
        with pytest.raises(DomainError):
            check_k_purity(ghz_sectors_exact(4, 2), 2)
        with pytest.raises(DomainError):
            check_k_purity(ghz_sectors_exact(4, 2), -1)

    def test_balance_examples(self):
        r = check_odd_qubit_balance(ghz_sectors_exact(3, 2))
        assert (r.left, r.right) == (4, 4) and r.passed
        r = check_odd_qubit_balance(ghz_sectors_exact(5, 2))
        assert (r.left, r.right) == (16, 16)

    def test_balance_domain(self):
        with pytest.raises(DomainError):
            check_odd_qubit_balance(ghz_sectors_exact(4, 2))
        with pytest.raises(DomainError):
            check_odd_qubit_balance(ghz_sectors_exact(3, 3))

    def test_balance_with_state_checks_h(self):
        r = check_odd_qubit_balance(random_state(5, 2, 3))
        assert r.passed and abs(r.details["h_invariant"]) <= 1e-10

    def test_h_nonzero_for_even_n(self):
        assert h_invariant(make_ghz(4, 2)) == pytest.approx(1.0)

    def test_small_n_qutrit_five_degenerate(self):
        r = check_small_n_identity(ghz_sectors_exact(5, 3))
        assert r.left == 0 and r.right == 0 and r.passed
        assert r.details["degenerate_leading_coefficient"]

    def test_small_n_ghz4(self):
        r = check_small_n_identity(ghz_sectors_exact(4, 2))
        assert r.left == 9 and r.right == 9

    def test_small_n_range(self):
        with pytest.raises(DomainError):
            check_small_n_identity(ghz_sectors_exact(7, 2))

    @pytest.mark.parametrize("n", range(2, 7))
    @pytest.mark.parametrize("d", range(2, 8))
    def test_small_n_exact_on_families(self, n, d):
        for poly in (ghz_sectors_exact(n, d), product_sectors_exact(n, d)):
            r = check_small_n_identity(poly)
            assert r.residual == 0

    def test_violation_is_reported(self):
        r = check_pq_relation(dist([1, 0, 4], 2))
        assert not r.passed and r.residual != 0

    def test_exact_halves_stay_fractions(self):
        r = check_small_n_identity(ghz_sectors_exact(4, 3))
        assert isinstance(r.right, (int, Fraction))


class TestStateRelations:
    def test_trr_ghz4(self):
        r = check_trR_relation(make_ghz(4, 2))
        assert r.left == pytest.approx(16) and r.right == pytest.approx(16) and r.passed

    @pytest.mark.parametrize("n,d", [(3, 2), (4, 3), (2, 5)])
    def test_trr_product_is_zero(self, n, d):
        r = check_trR_relation(make_product(n, d))
        assert r.left == pytest.approx(0, abs=1e-12) and r.right == pytest.approx(0, abs=1e-12)
        # printed weights sum to N (2-d)^(N-1), zero only for qubits
        printed = check_trR_relation(make_product(n, d), form="printed")
        assert printed.right == pytest.approx(n * (2 - d) ** (n - 1), abs=1e-12)

    def test_even_ghz4(self):
        r = check_even_sector_relation(make_ghz(4, 2))
        assert r.left == pytest.approx(16) and r.right == pytest.approx(16)

    def test_even_ghz6(self):
        for form in ("general", "printed"):
            assert check_even_sector_relation(make_ghz(6, 2), form=form).passed

    def test_even_needs_even_n(self):
        with pytest.raises(DomainError):
            check_even_sector_relation(make_ghz(5, 2))

    @pytest.mark.parametrize("n,d", [(3, 2), (4, 2), (3, 3), (2, 4)])
    def test_operator_and_table_routes_agree(self, n, d):
        for s in corpus(n, d, 4):
            assert sum_trace_r(s, "operator") == pytest.approx(sum_trace_r(s, "purity"), abs=1e-12)

    @pytest.mark.parametrize("n,d", ORACLE_CELLS)
    def test_general_form_on_corpus(self, n, d):
        for s in corpus(n, d, 15, base_seed=5):
            assert check_trR_relation(s).passed
            if n % 2 == 0 and n >= 4:
                assert check_even_sector_relation(s).passed

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_printed_form_exact_for_qubits(self, n):
        for s in corpus(n, 2, 10):
            a = check_trR_relation(s, form="printed")
            b = check_trR_relation(s, form="general")
            assert a.passed and a.right == pytest.approx(b.right, abs=1e-12)

    def test_printed_form_breaks_for_qutrits(self):
        # Weights (-1)^k (N-k) ignore the (d-1)^(N-1-k) factor that the
        # standard inversion produces on identity components when d > 2.
        failures = [not check_trR_relation(s, form="printed").passed for s in corpus(4, 3, 20)]
        assert sum(failures) == 20

    def test_printed_form_matches_rescaled_inversion(self):
        # With (2/d) Tr_j x 1 - id every identity factor becomes 1, which is
        # exactly what the printed weights assume.
        n, d = 3, 3
        for s in corpus(n, d, 5):
            imap = InversionMap.uniform(n - 1, 2.0 / d, 1.0)
            total = 0.0
            for j in range(n):
                rho = reduce(s, ((1 << n) - 1) ^ (1 << j)).matrix
                total += np.trace(rho @ apply_inversion(imap, rho, d=d)).real
            r = check_trR_relation(s, form="printed")
            assert d ** (n - 1) * total == pytest.approx(r.right, abs=1e-10)

    def test_unknown_form(self):
        with pytest.raises(DomainError):
            check_trR_relation(make_ghz(3, 2), form="other")


class TestCorpusProperties:
    @given(cell=st.sampled_from(ORACLE_CELLS), seed=seeds)
    @settings(max_examples=60, deadline=None)
    def test_distribution_relations(self, cell, seed):
        n, d = cell
        s = sectors_from_purities(random_state(n, d, seed))
        assert check_pq_relation(s).passed
        for k in range((n - 1) // 2 + 1):
            assert check_k_purity(s, k).passed
        assert check_small_n_identity(s).passed

    @given(seed=seeds)
    @settings(max_examples=30, deadline=None)
    def test_implication_consistency(self, seed):
        # pq plus k-purity (k <= 2) determine the small-N identity; they must agree.
        s = sectors_from_purities(random_state(5, 2, seed))
        group = [check_pq_relation(s)] + [check_k_purity(s, k) for k in range(3)]
        assert all(r.passed for r in group) == check_small_n_identity(s).passed

    def test_implication_detects_perturbation(self):
        good = sectors_from_purities(random_state(4, 3, 1)).lengths.copy()
        good[4] += 0.5
        bad = dist(good, 3)
        assert not check_pq_relation(bad).passed and not check_small_n_identity(bad).passed


class TestSchmidt:
    def test_ghz4(self):
        for j in range(4):
            sc = schmidt_delta_check(make_ghz(4, 2), j)
            assert sc.lam == pytest.approx(0.5, abs=1e-10)
            assert sc.delta == pytest.approx(1.0, abs=1e-10)
            assert sc.value == pytest.approx(1.0, abs=1e-10)
            assert not sc.degenerate

    def test_product_is_degenerate(self):
        sc = schmidt_delta_check(make_product(4, 2), 2)
        assert sc.degenerate and sc.delta == 0 and sc.value == pytest.approx(1)

    @given(seed=seeds)
    @settings(max_examples=40, deadline=None)
    def test_random_bounded(self, seed):
        s = random_state(4, 2, seed)
        for j in range(4):
            sc = schmidt_delta_check(s, j)
            assert sc.delta <= 1 + 1e-10 and sc.value <= 1 + 1e-9

    def test_value_is_local_sector_plus_two_tr_r(self):
        s = random_state(4, 2, 11)
        from blochsectors.sector_engine import trace_r
        for j in range(4):
            rho = reduce(s, [j]).matrix
            local = 2 * np.trace(rho @ rho).real - 1
            assert schmidt_delta_check(s, j).value == pytest.approx(local + 2 * trace_r(s, j), abs=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            schmidt_delta_check(make_ghz(3, 2), 0)

    @pytest.mark.parametrize("n", [4, 6])
    def test_symmetrized_max_ghz(self, n):
        r = check_symmetrized_max(make_ghz(n, 2))
        assert r.left == pytest.approx(n, abs=1e-9) and r.details["attains_maximum"]

    def test_symmetrized_random_below(self):
        for s in corpus(4, 2, 50):
            r = check_symmetrized_max(s)
            assert r.passed and r.kind == "upper_bound"


class TestRunRelations:
    def test_all_skips_inapplicable(self):
        names = {r.name.split("[")[0] for r in run_relations(random_state(3, 3, 0))}
        assert names == {"pq", "kpurity", "trr", "smalln"}

    def test_all_for_even_qubits(self):
        reports = run_relations(make_ghz(4, 2))
        assert all(r.passed for r in reports)
        assert any(r.name == "symmax" for r in reports)
        assert sum(r.name.startswith("schmidt") for r in reports) == 4

    def test_named_inapplicable_raises(self):
        with pytest.raises(DomainError):
            run_relations(make_ghz(3, 3), ["balance"])

    def test_applicable_table(self):
        assert applicable("balance", 5, 2) and not applicable("balance", 4, 2)
        assert set(RELATIONS) >= {"pq", "schmidt"}
        with pytest.raises(DomainError):
            applicable("nope", 3, 2)

    def test_reports_serialize(self):
        for r in run_relations(tensor(make_ghz(2, 2), make_ghz(2, 2))):
            d = r.to_dict()
            assert isinstance(d["left"], float) and isinstance(d["passed"], bool)

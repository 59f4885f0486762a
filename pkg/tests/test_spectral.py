import math

import numpy as np
import pytest

from ngspread.core.eigen import adjacency_matrix, principal_pair, signless_laplacian
from ngspread.core.graph import (
    GraphKind,
    clone_neighbourhood,
    complement,
    complete_split,
    named_graph,
    pendant_clique,
)
from ngspread.core.spectral import (
    asymptotic_diagnostics,
    bipartite_witness,
    bound_table,
    clone_gain,
    cs_lambda1,
    ng_bound,
    ng_deviation,
    ng_sum,
    optimal_clique,
    q_spread,
    rayleigh_spread,
    terpai_bound,
)
from ngspread.errors import InvalidParameterError


class TestNGSum:
    def test_star(self):
        report = ng_sum(named_graph(GraphKind.STAR, 4))
        assert report.lambda1 == pytest.approx(math.sqrt(3), abs=1e-12)
        assert report.lambda1_bar == pytest.approx(2.0, abs=1e-12)
        assert report.p == pytest.approx(2 + math.sqrt(3), abs=1e-12)

    def test_self_complementary_path(self):
        assert ng_sum(named_graph(GraphKind.PATH, 4)).p == pytest.approx(1 + math.sqrt(5), abs=1e-12)

    def test_perron_vectors_are_nonnegative_units(self, graph_corpus):
        for g in graph_corpus:
            report = ng_sum(g)
            for vector in (report.x, report.x_bar):
                assert min(vector) >= -1e-12
                assert np.linalg.norm(vector) == pytest.approx(1.0, abs=1e-12)

    def test_complement_gives_same_sum(self, graph_corpus):
        for g in graph_corpus:
            assert ng_sum(complement(g)).p == pytest.approx(ng_sum(g).p, abs=1e-9)

    def test_sum_lies_between_n_minus_one_and_terpai(self, graph_corpus):
        for g in graph_corpus:
            p = ng_sum(g).p
            assert g.n - 1 - 1e-9 <= p <= terpai_bound(g.n) + 1e-9


class TestClosedForms:
    @pytest.mark.parametrize(
        "n,expected",
        [(5, 5.0), (6, 6.3722813), (3, 1 + math.sqrt(2))],
    )
    def test_ng_bound_values(self, n, expected):
        assert ng_bound(n) == pytest.approx(expected, abs=1e-7)

    def test_ng_bound_six_formula(self):
        assert ng_bound(6) == pytest.approx(8 - 5 / 3 - (17 - math.sqrt(297)) / 6, abs=1e-12)

    @pytest.mark.parametrize("n,omega,expected", [(5, 1, 2.0), (5, 2, 3.0), (7, 7, 6.0)])
    def test_cs_lambda1(self, n, omega, expected):
        assert cs_lambda1(n, omega) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.slow
    def test_cs_lambda1_matches_eigensolver(self):
        for n in range(2, 41):
            for omega in range(1, n + 1):
                top = principal_pair(adjacency_matrix(complete_split(n, omega)), nonneg=True)
                assert top.value == pytest.approx(cs_lambda1(n, omega), abs=1e-9)

    @pytest.mark.parametrize("n,expected", [(6, [2]), (5, [1, 2]), (7, [2]), (9, [3]), (8, [2, 3])])
    def test_optimal_clique(self, n, expected):
        assert optimal_clique(n) == expected

    def test_bound_equals_complete_split_value(self):
        for n in range(3, 41):
            for omega in optimal_clique(n):
                p_cs = cs_lambda1(n, omega) + n - omega - 1
                assert abs(ng_bound(n) - p_cs) <= 1e-9

    def test_optimal_clique_beats_every_other_size(self):
        for n in range(3, 30):
            best = optimal_clique(n)
            values = {omega: cs_lambda1(n, omega) + n - omega - 1 for omega in range(1, n + 1)}
            top = max(values.values())
            assert sorted(w for w, v in values.items() if v >= top - 1e-9) == best

    def test_terpai_bound(self):
        assert terpai_bound(6) == pytest.approx(7.0)

    def test_bound_table_gap_vanishes(self):
        rows = bound_table(3, 9)
        assert [row.n for row in rows] == list(range(3, 10))
        assert all(abs(row.gap) <= 1e-9 for row in rows)
        assert rows[2].omega_star == [1, 2]

    def test_bound_table_rejects_bad_range(self):
        with pytest.raises(InvalidParameterError):
            bound_table(9, 3)


class TestQSpread:
    def test_star(self):
        assert q_spread(named_graph(GraphKind.STAR, 4)).s == pytest.approx(4.0, abs=1e-12)

    def test_pendant_clique(self, k5_plus):
        report = q_spread(k5_plus)
        assert report.s == pytest.approx(math.sqrt(57), abs=1e-9)
        assert report.q1 == pytest.approx((9 + math.sqrt(57)) / 2, abs=1e-9)
        assert report.qn == pytest.approx((9 - math.sqrt(57)) / 2, abs=1e-9)

    @pytest.mark.parametrize("n", [3, 5, 8])
    def test_complete_graph(self, n):
        report = q_spread(named_graph(GraphKind.COMPLETE, n))
        assert report.q1 == pytest.approx(2 * n - 2, abs=1e-12)
        assert report.s == pytest.approx(n, abs=1e-12)

    def test_rayleigh_spread_at_extreme_vectors(self, graph_corpus):
        for g in graph_corpus:
            report = q_spread(g)
            assert rayleigh_spread(g, report.x, report.z) == pytest.approx(report.s, abs=1e-9)

    def test_rayleigh_spread_is_a_lower_bound(self, graph_corpus, rng):
        for g in graph_corpus:
            x = rng.standard_normal(g.n)
            z = rng.standard_normal(g.n)
            value = rayleigh_spread(g, x / np.linalg.norm(x), z / np.linalg.norm(z))
            assert value <= q_spread(g).s + 1e-9

    def test_rayleigh_spread_k2(self):
        k2 = named_graph(GraphKind.COMPLETE, 2)
        r = 1 / math.sqrt(2)
        assert rayleigh_spread(k2, [r, r], [r, -r]) == pytest.approx(2.0)
        assert rayleigh_spread(k2, [r, r], [r, r]) == 0.0

    def test_rayleigh_spread_needs_unit_vectors(self):
        with pytest.raises(InvalidParameterError):
            rayleigh_spread(named_graph(GraphKind.PATH, 3), [1.0, 1.0, 0.0], [1.0, 0.0, 0.0])


class TestDeviationAndClones:
    def test_star_deviation_positive(self):
        assert ng_deviation(named_graph(GraphKind.STAR, 6)) > 0

    def test_vertex_transitive_deviation_vanishes(self):
        assert ng_deviation(named_graph(GraphKind.CYCLE, 7)) == pytest.approx(0.0, abs=1e-9)

    def test_clone_gain_is_a_lower_bound(self, graph_corpus):
        for g in graph_corpus:
            if g.n < 3:
                continue
            report = ng_sum(g)
            actual = ng_sum(clone_neighbourhood(g, 0, 1)).p - report.p
            assert clone_gain(g, 0, 1, report) <= actual + 1e-9

    def test_bipartite_witness(self):
        p, exceeds = bipartite_witness(30)
        assert p == pytest.approx(ng_sum(named_graph(GraphKind.COMPLETE_BIPARTITE, 30, 10)).p)
        assert exceeds

    def test_bipartite_witness_needs_three_vertices(self):
        with pytest.raises(InvalidParameterError):
            bipartite_witness(2)


class TestDiagnostics:
    def test_pendant_clique_flags(self, k5_plus):
        report = asymptotic_diagnostics(k5_plus)
        assert report.q1 == pytest.approx(8.2749172, abs=1e-6)
        assert report.flags["q1_gt_2n_minus_5"] is True
        assert report.flags["qn_lt_3"] is True
        assert report.flags["edges_gt_bound"] is True
        assert report.flags["q1_le_merris_bound"] is True
        assert report.flags["q1_le_2_max_degree"] is True

    @pytest.mark.slow
    @pytest.mark.parametrize("n", range(6, 65))
    def test_pendant_clique_flags_at_every_order(self, n):
        report = asymptotic_diagnostics(pendant_clique(n), epsilon=0.1)
        for name in ("q1_gt_2n_minus_5", "qn_lt_3", "edges_gt_bound", "x_lt_sqrt_n_over_n_minus_3", "t_lt_8"):
            assert report.flags[name] is True, name

    def test_report_carries_q_spectrum(self, k5_plus):
        report = asymptotic_diagnostics(k5_plus)
        assert len(report.q_spectrum) == 6
        assert report.q_spectrum[0] == pytest.approx(report.q1, abs=1e-9)
        assert report.q_spectrum[-1] == pytest.approx(report.qn, abs=1e-9)
        assert sum(report.q_spectrum) == pytest.approx(2 * report.edge_count, abs=1e-9)

    def test_path_is_not_extremal(self):
        report = asymptotic_diagnostics(named_graph(GraphKind.PATH, 6))
        assert report.flags["q1_gt_2n_minus_5"] is False

    def test_partition_covers_vertices(self, graph_corpus):
        for g in graph_corpus:
            report = asymptotic_diagnostics(g, epsilon=0.2)
            assert sorted(report.partition.S + report.partition.L) == list(range(g.n))
            assert set(report.partition.T) <= set(range(g.n))

    def test_small_orders_leave_flags_undefined(self):
        report = asymptotic_diagnostics(named_graph(GraphKind.PATH, 3))
        assert report.flags["t_lt_8"] is None
        assert report.flags["x_lt_sqrt_n_over_n_minus_3"] is None

    def test_epsilon_must_be_positive(self):
        with pytest.raises(InvalidParameterError):
            asymptotic_diagnostics(named_graph(GraphKind.PATH, 4), epsilon=0.0)

    def test_scaled_quantities(self):
        g = named_graph(GraphKind.COMPLETE, 6)
        report = asymptotic_diagnostics(g)
        assert report.ng_x_max_scaled == pytest.approx(1.0, abs=1e-12)
        assert report.deviation_scaled == pytest.approx(report.deviation * 6)

    def test_merris_bound_holds_on_corpus(self, graph_corpus):
        for g in graph_corpus:
            if g.n >= 2:
                assert asymptotic_diagnostics(g).flags["q1_le_merris_bound"] is True

    def test_principal_signless_vector_used(self, k5_plus):
        report = asymptotic_diagnostics(k5_plus)
        top = principal_pair(signless_laplacian(k5_plus), nonneg=True)
        assert report.partition.x_max_scaled == pytest.approx(float(np.max(top.vector)) * math.sqrt(6))

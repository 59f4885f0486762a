import math

import numpy as np
import pytest

from ngspread.config import settings
from ngspread.core.graph import Graph, GraphKind, complete_split, named_graph, random_graph
from ngspread.core.graphon import (
    common_refinement_diff,
    complement,
    convergence_trend,
    cut_norm,
    cut_norm_result,
    delta_cut_upper,
    edge_density,
    from_graph,
    limit_graphon,
    max_eigen,
    relation_check,
    relation_sweep,
    theorem34_report,
)
from ngspread.errors import InvalidParameterError
from ngspread.models import StepGraphon


def constant(value: float, signed: bool = False) -> StepGraphon:
    return StepGraphon(m=[1.0], values=[[value]], signed=signed)


def random_step(rng, k: int, signed: bool = False) -> StepGraphon:
    m = rng.random(k) + 0.1
    m = m / m.sum()
    m[-1] = 1.0 - m[:-1].sum()
    values = rng.random((k, k)) * (2 if signed else 1) - (1 if signed else 0)
    values = np.triu(values) + np.triu(values, 1).T
    return StepGraphon(m=m.tolist(), values=values.tolist(), signed=signed)


def scaled(w: StepGraphon, factor: float) -> StepGraphon:
    return StepGraphon(m=w.m, values=(factor * np.asarray(w.values)).tolist(), signed=True)


class TestStepGraphon:
    def test_from_graph(self):
        w = from_graph(named_graph(GraphKind.COMPLETE, 2))
        assert w.m == [0.5, 0.5]
        assert w.values == [[0.0, 1.0], [1.0, 0.0]]
        assert not np.any(from_graph(Graph.empty(3)).values)

    def test_edge_density(self, graph_corpus):
        for g in graph_corpus:
            assert edge_density(from_graph(g)) == pytest.approx(2 * g.edge_count() / g.n**2, abs=1e-12)

    def test_rejects_bad_measures(self):
        with pytest.raises(ValueError):
            StepGraphon(m=[0.5, 0.4], values=[[0, 0], [0, 0]])
        with pytest.raises(ValueError):
            StepGraphon(m=[1.0, 0.0], values=[[0, 0], [0, 0]])

    def test_rejects_asymmetric_or_out_of_range(self):
        with pytest.raises(ValueError):
            StepGraphon(m=[0.5, 0.5], values=[[0, 1], [0, 0]])
        with pytest.raises(ValueError):
            StepGraphon(m=[1.0], values=[[-0.5]])
        assert StepGraphon(m=[1.0], values=[[-0.5]], signed=True).k == 1

    def test_complement(self):
        assert complement(limit_graphon()).values == [[0.0, 0.0], [0.0, 1.0]]
        with pytest.raises(InvalidParameterError):
            complement(constant(0.5, signed=True))


class TestOperatorSpectrum:
    def test_limit_graphon(self):
        eigen = max_eigen(limit_graphon())
        assert eigen.mu == pytest.approx(2 / 3, abs=1e-12)
        assert [abs(x) for x in eigen.f] == pytest.approx([math.sqrt(2), math.sqrt(2) / 2], abs=1e-12)

    def test_limit_complement(self):
        eigen = max_eigen(complement(limit_graphon()))
        assert eigen.mu == pytest.approx(2 / 3, abs=1e-12)
        assert [abs(x) for x in eigen.f] == pytest.approx([0.0, math.sqrt(6) / 2], abs=1e-12)

    def test_triangle(self):
        assert max_eigen(from_graph(named_graph(GraphKind.COMPLETE, 3))).mu == pytest.approx(2 / 3, abs=1e-12)

    def test_eigenfunction_normalization_and_residual(self, rng):
        for k in (1, 2, 5, 9):
            w = random_step(rng, k)
            eigen = max_eigen(w)
            assert sum(f * f * m for f, m in zip(eigen.f, w.m)) == pytest.approx(1.0, abs=1e-12)
            assert eigen.residual <= 1e-10

    def test_similarity_reduction(self, rng):
        for _ in range(10):
            w = random_step(rng, 6)
            m = np.asarray(w.m)
            operator = np.asarray(w.values) * m[None, :]
            conjugate = np.sqrt(m)[:, None] * np.asarray(w.values) * np.sqrt(m)[None, :]
            assert np.sort(np.linalg.eigvals(operator).real) == pytest.approx(np.linalg.eigvalsh(conjugate), abs=1e-10)
            assert max_eigen(w).mu == pytest.approx(np.linalg.eigvalsh(conjugate).max(), abs=1e-10)

    def test_relation_with_graph_spectrum(self, graph_corpus):
        assert relation_check(named_graph(GraphKind.COMPLETE, 3)) <= 1e-12
        assert relation_check(named_graph(GraphKind.STAR, 4)) <= 1e-9
        for g in graph_corpus:
            assert relation_check(g) <= 1e-9

    def test_relation_sweep(self):
        rows = relation_sweep(12, 20, seed=5)
        assert len(rows) == 20
        assert all(row.gap <= 1e-9 for row in rows)
        assert all(row.n_mu == pytest.approx(12 * row.mu) for row in rows)

    def test_theorem34_report(self):
        report = theorem34_report()
        assert report.matches
        assert all(report.identities.values())
        assert report.residual <= 1e-12


class TestRefinement:
    def test_self_difference_vanishes(self, rng):
        w = random_step(rng, 4)
        assert not np.any(common_refinement_diff(w, w).values)

    def test_constant_difference(self):
        diff = common_refinement_diff(constant(1.0), constant(0.0))
        assert diff.values == [[1.0]]
        assert diff.signed

    def test_k2_minus_half(self):
        diff = common_refinement_diff(from_graph(named_graph(GraphKind.COMPLETE, 2)), constant(0.5))
        assert diff.m == pytest.approx([0.5, 0.5])
        assert diff.values == [[-0.5, 0.5], [0.5, -0.5]]

    def test_unequal_partitions(self):
        diff = common_refinement_diff(from_graph(complete_split(6, 2)), limit_graphon())
        assert diff.k == 6
        assert sum(diff.m) == pytest.approx(1.0, abs=1e-12)


class TestCutNorm:
    def test_constant(self):
        assert cut_norm(constant(0.5)) == pytest.approx(0.5, abs=1e-12)

    def test_zero(self, rng):
        w = random_step(rng, 5)
        assert cut_norm(common_refinement_diff(w, w)) == 0.0

    def test_k2_minus_half(self):
        result = cut_norm_result(common_refinement_diff(from_graph(named_graph(GraphKind.COMPLETE, 2)), constant(0.5)))
        assert result.value == pytest.approx(1 / 8, abs=1e-12)
        assert result.exact
        assert len(result.rows) == 1 and len(result.cols) == 1

    def test_norm_axioms(self, rng):
        for _ in range(50):
            k = int(rng.integers(1, 11))
            u, v = random_step(rng, k, signed=True), random_step(rng, k, signed=True)
            u = StepGraphon(m=v.m, values=u.values, signed=True)
            total = StepGraphon(
                m=v.m,
                values=((np.asarray(u.values) + np.asarray(v.values)) / 2).tolist(),
                signed=True,
            )
            assert cut_norm(total) <= (cut_norm(u) + cut_norm(v)) / 2 + 1e-12
            assert cut_norm(scaled(u, -0.5)) == pytest.approx(0.5 * cut_norm(u), abs=1e-12)

    def test_bounded_by_largest_entry(self, rng):
        for _ in range(20):
            u = random_step(rng, int(rng.integers(1, 9)), signed=True)
            assert cut_norm(u) <= np.abs(u.values).max() + 1e-12

    def test_parallel_enumeration_agrees(self, rng):
        u = random_step(rng, 12, signed=True)
        assert cut_norm(u, jobs=2) == pytest.approx(cut_norm(u, jobs=1), abs=1e-15)

    def test_heuristic_above_cap(self, rng, monkeypatch):
        monkeypatch.setattr(settings, "cut_norm_exact_cap", 4)
        u = random_step(rng, 8, signed=True)
        heuristic = cut_norm_result(u)
        assert not heuristic.exact
        monkeypatch.setattr(settings, "cut_norm_exact_cap", 24)
        assert heuristic.value <= cut_norm(u) + 1e-12


class TestCutDistance:
    def test_self_distance(self):
        w = limit_graphon()
        result = delta_cut_upper(w, w)
        assert result.value == pytest.approx(0.0, abs=1e-12)
        assert result.upper_bound and not result.identity_fallback

    def test_permuted_blocks(self):
        g = random_graph(6, 0.5, 2)
        w = from_graph(g)
        perm = [3, 0, 5, 1, 4, 2]
        values = np.asarray(w.values)[np.ix_(perm, perm)]
        shuffled = StepGraphon(m=w.m, values=values.tolist())
        assert delta_cut_upper(w, shuffled).value == pytest.approx(0.0, abs=1e-12)

    def test_mismatched_measures_fall_back(self):
        result = delta_cut_upper(from_graph(complete_split(6, 2)), limit_graphon())
        assert result.identity_fallback
        assert result.value == pytest.approx(1 / 18, abs=1e-12)

    def test_alignment_budget(self, monkeypatch):
        w = from_graph(named_graph(GraphKind.PATH, 5))
        perm = [1, 0, 2, 3, 4]
        swapped = StepGraphon(m=w.m, values=np.asarray(w.values)[np.ix_(perm, perm)].tolist())
        assert delta_cut_upper(w, swapped).value == pytest.approx(0.0, abs=1e-12)
        monkeypatch.setattr(settings, "max_alignments", 1)
        limited = delta_cut_upper(w, swapped)
        assert limited.truncated
        assert limited.value > 0

    @pytest.mark.slow
    def test_convergence_trend_decreases(self):
        trend = convergence_trend((6, 12, 24))
        distances = [d for _, d in trend]
        assert all(d > 0 for d in distances)
        assert distances[0] > distances[1] > distances[2]

    def test_trend_rejects_orders_off_residue(self):
        with pytest.raises(InvalidParameterError):
            convergence_trend((7,))

import json
from fractions import Fraction
from pathlib import Path

import pytest

from singular_weyl import (
    ParameterSet,
    composition_series,
    decompose,
    heisenberg_targets,
    ktype_lattice,
    ladder_graph,
    level_curves_csv,
    pair_eigenvalue,
)
from singular_weyl.structure import structure_case

GOLDEN = json.loads(
    (Path(__file__).parent / "golden" / "composition_series.json").read_text()
)


class TestCompositionSeries:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    @pytest.mark.parametrize("q", [0, 1, 2, 3])
    def test_against_golden(self, n, q):
        series = composition_series(ParameterSet(n=n, q=q, s=0.5j))
        case_name = GOLDEN["cases"][f"n={n},q={q}"]
        assert f"case{series.case}" == case_name
        assert list(series.chain) == GOLDEN["chains"][case_name]

    def test_known_cases(self):
        assert composition_series(ParameterSet(n=3, q=3, s=1j)).chain == (
            "0", "H0+", "H0", "H0+H+", "H",
        )
        assert composition_series(ParameterSet(n=3, q=0, s=1j)).case == 1
        assert composition_series(ParameterSet(n=2, q=2, s=1j)).case == 4
        assert len(composition_series(ParameterSet(n=2, q=2, s=1j)).chain) == 7

    def test_case4_exactly_when_n_even_q_congruent(self):
        for n in range(1, 9):
            for q in range(4):
                case = structure_case(ParameterSet(n=n, q=q, s=1j))
                expect4 = n % 2 == 0 and (q - n) % 4 == 0
                assert (case == 4) == expect4

    def test_exactly_one_case_per_parameter(self):
        for n in range(1, 9):
            for q in range(4):
                assert structure_case(ParameterSet(n=n, q=q, s=1j)) in (1, 2, 3, 4)


class TestDecompose:
    def test_all_irreducible(self):
        descs = decompose(ParameterSet(n=3, q=0, s=0.5j), 75)
        assert len(descs) == 3
        assert all(d.irreducible for d in descs)
        assert [(d.l, d.k) for d in descs] == [(5, 2), (3, 9), (1, 36)]

    def test_lowest_only(self):
        descs = decompose(ParameterSet(n=3, q=3, s=0.5j), 3)
        assert [(d.l, d.k) for d in descs] == [(1, 0)]
        assert descs[0].has_lowest and not descs[0].has_highest
        assert not descs[0].irreducible

    def test_both_flags_n2(self):
        descs = decompose(ParameterSet(n=2, q=2, s=0.5j), 4)
        assert all(d.has_lowest and d.has_highest for d in descs)
        assert any(d.experimental for d in descs)  # the (2, -1) layer

    def test_size_matches_pair_count(self):
        from singular_weyl import admissible_pairs, enumerate_admissible

        for n in (2, 3, 4):
            params = ParameterSet(n=n, q=1, s=0.5j)
            for ev in enumerate_admissible(n, 40):
                assert len(decompose(params, ev.value)) == len(
                    admissible_pairs(n, ev.value)
                )

    def test_boundary_weight(self):
        descs = decompose(ParameterSet(n=3, q=3, s=0.5j), 3)
        assert descs[0].boundary_weight == 2 * 0 + 4 * 1 + 3


class TestHeisenbergTargets:
    def test_paper_style_example(self):
        targets = heisenberg_targets(3, 3, 9)
        as_tuples = {(l, k, int(lam)) for l, k, lam in targets}
        assert as_tuples == {(2, 10, 50), (4, 8, 100), (3, 10, 81), (3, 8, 69)}

    def test_zero_family_target(self):
        targets = heisenberg_targets(3, 1, 0)
        assert (0, 1, Fraction(0)) in targets

    def test_shift_identity_over_lattice(self):
        for n in (1, 2, 3, 4):
            for l in range(0, 7):
                for k in range(0, 13):
                    if n == 1 and k > 1:
                        continue
                    lam = pair_eigenvalue(n, l, k)
                    edge = 2 * l + 2 * k + n - 2
                    for l2, k2, lam2 in heisenberg_targets(n, l, k):
                        shift = lam2 - lam
                        if l2 != l:
                            assert abs(shift) == edge
                        else:
                            assert abs(shift) == 2 * l or shift == 0

    def test_k_range_respected(self):
        assert all(k >= 0 for _, k, _ in heisenberg_targets(3, 2, 0))
        assert all(k in (0, 1) for _, k, _ in heisenberg_targets(1, 2, 1))


class TestLadderGraph:
    def test_figure_lattice_nodes(self):
        # n=3, q=0, lambda=75, m in [0, 20]: three chains, nodes 4 apart
        params = ParameterSet(n=3, q=0, s=0.5j)
        graph = ladder_graph(params, 75, (0, 20), lambdas=[75], with_heisenberg=False)
        by_pair = {}
        for node in graph.nodes:
            by_pair.setdefault((node.l, node.k), []).append(node.m)
        assert set(by_pair) == {(5, 2), (3, 9), (1, 36)}
        assert sorted(by_pair[(5, 2)]) == [0, 4, 8, 12, 16, 20]
        assert sorted(by_pair[(3, 9)]) == [2, 6, 10, 14, 18]
        assert sorted(by_pair[(1, 36)]) == [0, 4, 8, 12, 16, 20]
        for ms in by_pair.values():
            diffs = {b - a for a, b in zip(sorted(ms), sorted(ms)[1:])}
            assert diffs == {4}

    def test_edge_counts_bounded(self):
        params = ParameterSet(n=3, q=1, s=0.5j)
        graph = ladder_graph(params, 30, (-10, 10))
        per_node = {}
        for e in graph.edges:
            per_node.setdefault((e.source, e.operator), 0)
            per_node[(e.source, e.operator)] += 1
        for (src, op), count in per_node.items():
            if op.startswith("eta"):
                assert count <= 1
            else:
                assert count <= 4

    def test_eta_kill_at_boundary(self):
        # q = n: lowest-weight nodes have no eta- edge out
        params = ParameterSet(n=3, q=3, s=0.5j)
        graph = ladder_graph(params, 10, (-25, 25), with_heisenberg=False)
        for node in graph.nodes:
            boundary = 2 * node.k + 4 * node.l + 3
            out_minus = [
                e
                for e in graph.edges
                if e.source == (node.m, node.l, node.k) and e.operator == "eta-"
            ]
            if node.m == boundary:
                assert not out_minus
            else:
                assert len(out_minus) == 1

    def test_e_edge_shifts_match_heisenberg_targets(self):
        params = ParameterSet(n=3, q=1, s=0.5j)
        graph = ladder_graph(params, 30, (-8, 8))
        lam_of = {(v.m, v.l, v.k): v.lam for v in graph.nodes}
        for e in graph.edges:
            if not e.operator.startswith("E"):
                continue
            src_l, src_k = e.source[1], e.source[2]
            tgt = (e.target[1], e.target[2])
            allowed = {
                (l2, k2): lam2 for l2, k2, lam2 in heisenberg_targets(3, src_l, src_k)
            }
            assert tgt in allowed
            if not e.dangling:
                assert lam_of[e.target] == allowed[tgt]

    def test_dangling_edges_marked(self):
        params = ParameterSet(n=3, q=1, s=0.5j)
        graph = ladder_graph(params, 5, (1, 1), with_heisenberg=False)
        assert graph.edges and all(e.dangling for e in graph.edges)

    def test_dot_and_json_exports(self):
        params = ParameterSet(n=2, q=0, s=0.5j)
        graph = ladder_graph(params, 6, (0, 8))
        dot = graph.to_dot()
        assert dot.startswith("digraph") and "eta+" in dot
        data = graph.to_json()
        assert {"n", "q", "s", "nodes", "edges"} <= set(data)


class TestLevelCurves:
    def test_csv_shape_and_curve_identity(self):
        text = level_curves_csv(3, 20, samples=50)
        lines = text.strip().split("\n")
        assert lines[0] == "lambda,l,k"
        rows = [line.split(",") for line in lines[1:]]
        for lam_s, l_s, k_s in rows[:200]:
            lam, l, k = float(lam_s), float(l_s), float(k_s)
            assert abs(l * (2 * l + 2 * k + 3 - 2) - lam) < 1e-3


class TestKtypeLattice:
    def test_lattice_members_valid(self):
        params = ParameterSet(n=3, q=1, s=0.5j)
        lattice = ktype_lattice(params, 20, 10)
        assert lattice
        for F in lattice:
            assert (F.m - 2 * F.k - 1) % 4 == 0
            assert abs(F.m) <= 10
            assert F.lam.value <= 20

    def test_zero_family_inclusion(self):
        params = ParameterSet(n=3, q=0, s=0.5j)
        with_zero = ktype_lattice(params, 10, 8, include_zero_family=True)
        assert any(F.l == 0 for F in with_zero)

import random

import pytest

from tests.conftest import mixed_game
from utils.certificates import certificate_exits, is_valid
from utils.errors import GuardExceededError, StructuralError
from utils.game_io import parse_game
from utils.lar_parity import all_permutations, shift
from utils.oblige_solver import (
    FingerprintGraph,
    ObligingSolver,
    dag_attractor,
    dag_attractor_for_permutation,
    solve_game,
    solve_obliging,
)

SELF_LOOP = """oblige 1
nodes: v
owners: E
colors: a
edge v v {a}
strong: Inf(a)
weak: true
"""

FORALL_ESCAPES = """oblige 1
nodes: p q
owners: AE
colors: a
edge p p {a}
edge p q {}
edge q q {}
strong: Inf(a)
weak: true
"""

WEAK_UNREACHABLE = """oblige 1
nodes: v
owners: E
colors: a
edge v v {}
strong: true
weak: Inf(a)
"""


def _random_vbar(rng, solver, density):
    reales = sorted(solver.real_nodes)
    return [frozenset(r for r in reales if rng.random() < density) for _ in range(solver.levels)]


class TestFixtures:
    def test_ex1_all_nodes_win(self, ex1):
        assert solve_obliging(ex1).winning_region == frozenset(range(5))

    def test_ex1_dashed_all_nodes_win(self, ex1_dashed):
        assert solve_obliging(ex1_dashed).winning_region == frozenset(range(5))

    def test_ex10_all_nodes_win(self, ex10):
        assert solve_obliging(ex10).winning_region == frozenset(range(3))

    def test_ex10_forall_loses_everywhere(self, ex10_forall):
        # ∀ puede quedarse en el lazo b de y
        assert solve_obliging(ex10_forall).winning_region == frozenset()

    def test_certificates_are_valid_and_safe(self, ex1_dashed):
        resultado = solve_obliging(ex1_dashed)
        assert resultado.certificate_map.keys() == resultado.fixpoint
        for (v, perm), cert in resultado.certificate_map.items():
            assert cert.node == v
            assert is_valid(cert, ex1_dashed)
            for w, huella in certificate_exits(cert, ex1_dashed):
                assert (w, shift(perm, huella)) in resultado.fixpoint

    def test_certificate_for_initial_permutation(self, ex1):
        resultado = solve_obliging(ex1)
        assert resultado.certificate_for(0).node == 0
        assert resultado.initial_permutation == (0, 1, 2, 3)

    def test_diagnostics(self, ex1):
        diagnostico = solve_obliging(ex1).diagnostics
        assert diagnostico.attractor_calls > 0
        assert diagnostico.core_evaluations > 0
        assert set(diagnostico.iterations) <= set(range(10))
        assert diagnostico.candidate_certificates >= 5


class TestSmallGames:
    def test_self_loop_with_empty_vbar(self):
        game = parse_game(SELF_LOOP)
        solver = ObligingSolver(game)
        resultado = dag_attractor_for_permutation(game, (0,), [frozenset()] * solver.levels)
        assert resultado.nodes == frozenset({0})
        assert resultado.certificates[0].stem == (0,)
        assert resultado.certificates[0].loop == (0,)

    def test_forall_escapes_strong_objective(self):
        assert solve_obliging(parse_game(FORALL_ESCAPES)).winning_region == frozenset()

    def test_weak_objective_unreachable(self):
        assert solve_obliging(parse_game(WEAK_UNREACHABLE)).winning_region == frozenset()

    def test_full_vbar_attracts_every_ex1_node(self, ex1):
        solver = ObligingSolver(ex1)
        completo = [solver.real_nodes] * solver.levels
        resultado = dag_attractor_for_permutation(ex1, (0, 1, 2, 3), completo)
        assert resultado.nodes == frozenset(range(5))
        assert all(is_valid(c, ex1) for c in resultado.certificates.values())

    def test_full_vbar_attracts_ex10_start(self, ex10):
        solver = ObligingSolver(ex10)
        completo = [solver.real_nodes] * solver.levels
        assert (ex10.node_index("x"), solver.initial) in dag_attractor(ex10, completo)
        resultado = dag_attractor_for_permutation(ex10, solver.initial, completo)
        assert ex10.node_index("x") in resultado.nodes
        assert is_valid(resultado.certificates[ex10.node_index("x")], ex10)

    def test_single_permutation_matches_union(self, ex1):
        solver = ObligingSolver(ex1)
        rng = random.Random(3)
        vbar = [frozenset(r for r in solver.real_nodes if rng.random() < 0.7) for _ in range(solver.levels)]
        union = dag_attractor(ex1, vbar)
        for perm in all_permutations(ex1.strong_colors):
            nodos = dag_attractor_for_permutation(ex1, perm, vbar).nodes
            assert nodos == frozenset(v for v, q in union if q == perm)

    def test_single_permutation_checks_arguments(self, ex1):
        solver = ObligingSolver(ex1)
        with pytest.raises(StructuralError):
            dag_attractor_for_permutation(ex1, solver.initial, [solver.real_nodes] * 3)
        with pytest.raises(StructuralError):
            dag_attractor_for_permutation(ex1, (0, 1, 2), [solver.real_nodes] * solver.levels)
        with pytest.raises(GuardExceededError):
            dag_attractor_for_permutation(ex1, solver.initial, [solver.real_nodes] * solver.levels,
                                          max_strong_colors=3)

    def test_fingerprint_graph_positions(self, ex1):
        grafo = FingerprintGraph.build(ex1, (0, 1, 2, 3))
        v1, v2 = ex1.node_index("v1"), ex1.node_index("v2")
        assert grafo.edge_position[(v1, v2)] == 1
        assert grafo.successors((v1, 3)) == [(v2, 3)]


class TestGuards:
    def test_too_many_strong_colors(self, ex1):
        with pytest.raises(GuardExceededError) as info:
            solve_obliging(ex1, max_strong_colors=3)
        assert info.value.guard == "max_strong_colors"

    def test_vbar_length(self, ex1):
        with pytest.raises(StructuralError):
            dag_attractor(ex1, [frozenset()] * 3)

    def test_unknown_engine(self, ex1):
        with pytest.raises(ValueError):
            solve_game(ex1, "magic")


class TestMonotonicity:
    @pytest.mark.parametrize("seed", range(200))
    def test_dag_attractor_is_monotone(self, seed):
        rng = random.Random(seed)
        game = mixed_game(seed, max_nodes=4, max_colors=3)
        solver = ObligingSolver(game)
        chico = _random_vbar(rng, solver, rng.choice([0.2, 0.5, 0.8]))
        grande = [s | frozenset(r for r in solver.real_nodes if rng.random() < 0.3) for s in chico]
        assert dag_attractor(game, chico) <= dag_attractor(game, grande)


class TestRandomGames:
    @pytest.mark.parametrize("seed", range(40))
    def test_fixpoint_is_closed_under_certificate_exits(self, seed):
        game = mixed_game(seed, max_nodes=4, max_colors=2)
        resultado = solve_obliging(game)
        assert resultado.winning_region == frozenset(
            v for v, perm in resultado.fixpoint if perm == resultado.initial_permutation)
        for (v, perm), cert in resultado.certificate_map.items():
            assert perm in all_permutations(game.strong_colors)
            assert is_valid(cert, game)
            for w, huella in certificate_exits(cert, game):
                assert (w, shift(perm, huella)) in resultado.fixpoint

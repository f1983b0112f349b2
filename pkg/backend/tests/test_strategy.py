import pytest

from config.default import FIXTURES_DIR
from tests.conftest import mixed_game
from utils.errors import GameParseError, StrategyError
from utils.game_io import parse_game
from utils.oblige_solver import solve_obliging
from utils.strategy import (
    compressed_memory_bound,
    compressed_memory_count,
    extract_strategy,
    memory_bound,
    parse_strategy,
    serialize_strategy,
    verify_gracious,
    verify_strategy,
    verify_strong,
)


def two_memory_strategy(game) -> str:
    """En v4 alterna v5 y v1; v1 siempre va a v2."""
    nombre = game.node_names
    lineas = ["oblige-strategy 1"]
    lineas += [f"initial {v} m0" for v in nombre]
    lineas += ["move v1 m0 v2", "move v1 m1 v2", "move v4 m0 v5", "move v4 m1 v1"]
    for e in game.arena.edges:
        x, y = nombre[e.source], nombre[e.target]
        for m in ("m0", "m1"):
            nueva = {("v4", "v5"): "m1", ("v4", "v1"): "m0"}.get((x, y), m)
            lineas.append(f"update {m} {x} {y} {nueva}")
    return "\n".join(lineas) + "\n"


class TestHandWrittenStrategy:
    def test_wins_without_dashed_edge(self, ex1):
        reporte = verify_strategy(ex1, parse_strategy(two_memory_strategy(ex1), ex1))
        assert reporte.ok
        assert reporte.reachable_memory_count == 2

    def test_dashed_edge_breaks_strong_objective(self, ex1_dashed):
        estrategia = parse_strategy(two_memory_strategy(ex1_dashed), ex1_dashed)
        ok, contraejemplo = verify_strong(ex1_dashed, estrategia)
        assert not ok
        nodos = set(contraejemplo.loop)
        v5 = ex1_dashed.node_index("v5")
        v4 = ex1_dashed.node_index("v4")
        assert {v4, v5} <= nodos
        assert verify_gracious(ex1_dashed, estrategia)[0]

    def test_missing_move_raises(self, ex1):
        texto = two_memory_strategy(ex1).replace("move v4 m1 v1\n", "")
        with pytest.raises(StrategyError):
            verify_strategy(ex1, parse_strategy(texto, ex1))

    def test_existential_v2_that_never_offers_c(self):
        texto = (FIXTURES_DIR / "ex1.oblige").read_text(encoding="utf-8")
        texto = texto.replace("owners: EAAEA", "owners: EEAEA")
        game = parse_game(texto)
        estrategia_texto = two_memory_strategy(game) + "move v2 m0 v4\nmove v2 m1 v4\n"
        estrategia = parse_strategy(estrategia_texto, game)
        assert verify_strong(game, estrategia)[0]
        ok, atascado = verify_gracious(game, estrategia)
        assert not ok
        assert atascado is not None


class TestExtractedStrategy:
    @pytest.mark.parametrize("name", ["ex1", "ex1_dashed", "ex10"])
    def test_fixture_strategies_verify(self, name, request):
        game = request.getfixturevalue(name)
        resultado = solve_obliging(game)
        estrategia = extract_strategy(game, resultado)
        assert set(estrategia.initial) == set(resultado.winning_region)
        reporte = verify_strategy(game, estrategia)
        assert reporte.ok
        assert reporte.reachable_memory_count <= memory_bound(game)
        assert compressed_memory_count(estrategia) <= compressed_memory_bound(game)

    @pytest.mark.slow
    def test_random_strategies_verify(self):
        resueltos = 0
        seed = 0
        while resueltos < 200:
            assert seed < 5000, f"sólo {resueltos} juegos con región ganadora"
            game = mixed_game(seed, max_nodes=4, max_colors=3)
            seed += 1
            resultado = solve_obliging(game)
            if not resultado.winning_region:
                continue
            resueltos += 1
            estrategia = extract_strategy(game, resultado)
            reporte = verify_strategy(game, estrategia)
            assert reporte.ok, f"seed={seed - 1}"
            assert reporte.reachable_memory_count <= memory_bound(game)
            assert compressed_memory_count(estrategia) <= compressed_memory_bound(game), f"seed={seed - 1}"

    def test_text_reloads_and_verifies(self, ex1_dashed):
        estrategia = extract_strategy(ex1_dashed, solve_obliging(ex1_dashed))
        texto = serialize_strategy(estrategia, ex1_dashed)
        assert texto.startswith("oblige-strategy 1\n")
        recargada = parse_strategy(texto, ex1_dashed)
        assert len(recargada.memories()) == len(estrategia.memories())
        assert verify_strategy(ex1_dashed, recargada).ok


class TestBounds:
    def test_memory_bounds_for_ex1(self, ex1):
        # n=5, d=4, k=2: certLen = 5·4 + 7·6
        assert memory_bound(ex1) == 5 * 62 * 24
        assert compressed_memory_bound(ex1) == 5 * 10 * 24

    def test_compressed_bound_without_strong_colors(self):
        game = parse_game(
            "oblige 1\nnodes: x z y\nowners: EEE\ncolors: a\n"
            "edge x z {}\nedge z y {}\nedge y y {a}\n"
            "strong: true\nweak: Inf(a)\n"
        )
        assert (game.d, game.k) == (0, 1)
        assert compressed_memory_bound(game) == 3 * 2

    def test_compression_requires_structured_memories(self, ex1):
        with pytest.raises(StrategyError):
            compressed_memory_count(parse_strategy(two_memory_strategy(ex1), ex1))


class TestParseErrors:
    def test_bad_header(self, ex1):
        with pytest.raises(GameParseError) as info:
            parse_strategy("strategy 2\ninitial v1 m0\n", ex1)
        assert info.value.line == 1

    def test_unknown_node(self, ex1):
        with pytest.raises(GameParseError) as info:
            parse_strategy("oblige-strategy 1\ninitial v9 m0\n", ex1)
        assert info.value.line == 2
        assert "v9" in info.value.message

    def test_unrecognized_line(self, ex1):
        with pytest.raises(GameParseError) as info:
            parse_strategy("oblige-strategy 1\ninitial v1 m0\nmove v1 m0\n", ex1)
        assert info.value.line == 3

    def test_no_initial_memories(self, ex1):
        with pytest.raises(GameParseError):
            parse_strategy("oblige-strategy 1\n# vacía\n", ex1)

import json

import pytest

from cli import ObligeCLI, RunConfig, load_game, main
from tests.test_strategy import two_memory_strategy


@pytest.fixture
def cli():
    return ObligeCLI()


class TestSolve:
    def test_ex1_every_node_wins(self, cli):
        resultado = cli.handle_request("solve", {"inputs": ["ex1"]})
        assert resultado["exit_code"] == 0
        assert resultado["winning_region"] == ["v1", "v2", "v3", "v4", "v5"]
        assert all(f.winner == "E" for f in resultado["report"].winners)
        assert "v1: E" in resultado["output"]

    def test_prior_engine_agrees(self, cli):
        resultado = cli.handle_request("solve", {"inputs": ["ex10"], "engine": "prior"})
        assert resultado["winning_region"] == ["x", "y", "z"]
        assert resultado["report"].certificates == []

    def test_json_report(self, cli):
        resultado = cli.handle_request("solve", {"inputs": ["ex10-forall"], "output": "json"})
        datos = json.loads(resultado["output"])
        assert datos["winning_region"] == []
        assert datos["schema_version"] == "1.0"

    def test_strategy_file_is_written(self, cli, tmp_path):
        ruta = tmp_path / "ex1.strategy"
        resultado = cli.handle_request("solve", {"inputs": ["ex1"], "strategy": str(ruta)})
        assert resultado["exit_code"] == 0
        assert resultado["report"].verification.strong_ok
        assert ruta.read_text(encoding="utf-8").startswith("oblige-strategy 1")

        verificado = cli.handle_request("verify", {"inputs": ["ex1", str(ruta)]})
        assert verificado["exit_code"] == 0
        assert "fuerte: ok" in verificado["output"]

    def test_game_file_path(self, cli, tmp_path):
        ruta = tmp_path / "uno.oblige"
        ruta.write_text("oblige 1\nnodes: v\nowners: E\ncolors: a\nedge v v {a}\n"
                        "strong: Inf(a)\nweak: true\n", encoding="utf-8")
        assert cli.handle_request("solve", {"inputs": [str(ruta)]})["winning_region"] == ["v"]


class TestExitCodes:
    def test_malformed_file(self, cli, tmp_path):
        ruta = tmp_path / "roto.oblige"
        ruta.write_text("oblige 1\nnodes: a b\nowners: E\n", encoding="utf-8")
        resultado = cli.handle_request("solve", {"inputs": [str(ruta)]})
        assert resultado["status"] == "error"
        assert resultado["exit_code"] == 2

    def test_missing_file(self, cli, tmp_path):
        resultado = cli.handle_request("solve", {"inputs": [str(tmp_path / "nada.oblige")]})
        assert resultado["exit_code"] == 2

    def test_permutation_guard(self, cli):
        resultado = cli.handle_request("solve", {"inputs": ["ex1"], "max_perms": 1})
        assert resultado["exit_code"] == 3
        assert "max_strong_colors" in resultado["message"]

    def test_invalid_arguments(self, cli):
        assert cli.handle_request("gen", {"nodes": 0})["exit_code"] == 2
        assert cli.handle_request("solve", {"inputs": []})["exit_code"] == 2

    def test_unsupported_action(self, cli):
        resultado = cli.handle_request("play", {})
        assert resultado["status"] == "error"
        assert "Acción no soportada" in resultado["message"]
        assert "solve" in resultado["supported_actions"]


class TestVerify:
    def test_counterexample_on_dashed_game(self, cli, tmp_path):
        ruta = tmp_path / "sigma.strategy"
        ruta.write_text(two_memory_strategy(load_game("ex1-dashed")), encoding="utf-8")
        resultado = cli.handle_request("verify", {"inputs": ["ex1-dashed", str(ruta)]})
        assert resultado["exit_code"] == 1
        assert "fuerte: FALLA" in resultado["output"]
        assert "contraejemplo:" in resultado["output"]

    def test_bad_strategy_text(self, cli, tmp_path):
        ruta = tmp_path / "mala.strategy"
        ruta.write_text("oblige-strategy 1\ninitial nadie m0\n", encoding="utf-8")
        assert cli.handle_request("verify", {"inputs": ["ex1", str(ruta)]})["exit_code"] == 2


class TestGen:
    def test_same_seed_same_text(self, cli):
        contexto = {"seed": 7, "nodes": 5, "colors": 3, "strong": "rabin", "weak": "buchi"}
        primero = cli.handle_request("gen", contexto)["output"]
        assert primero == cli.handle_request("gen", contexto)["output"]
        assert primero.startswith("oblige 1\n")
        assert primero != cli.handle_request("gen", {**contexto, "seed": 8})["output"]

    def test_unknown_class(self, cli):
        assert cli.handle_request("gen", {"strong": "muller"})["exit_code"] == 2


class TestBenchAndSelftest:
    def test_small_bench(self, cli, tmp_path):
        grafico = tmp_path / "tiempos.png"
        resultado = cli.handle_request("bench", {
            "sizes": [2, 3], "seeds": [1], "engines": ["cert", "prior"], "chart": str(grafico)})
        assert len(resultado["table"]) == 4
        assert set(resultado["summary"]["engine"]) == {"cert", "prior"}
        assert grafico.exists()

    @pytest.mark.slow
    def test_selftest_passes(self, cli):
        resultado = cli.handle_request("selftest", {})
        assert resultado["exit_code"] == 0, resultado["output"]
        assert resultado["failures"] == []


class TestMain:
    def test_gen_to_stdout(self, capsys):
        assert main(["gen", "--seed", "3", "--nodes", "4"]) == 0
        assert capsys.readouterr().out.startswith("oblige 1\n")

    def test_solve_json(self, capsys):
        assert main(["solve", "ex10", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["winning_region"] == ["x", "y", "z"]

    def test_error_goes_to_stderr(self, capsys):
        assert main(["solve", "no-existe.oblige"]) == 2
        assert "error:" in capsys.readouterr().err


class TestRunConfig:
    @pytest.mark.parametrize("max_perms, esperado", [(1, 1), (2, 2), (5, 2), (6, 3), (24, 4), (119, 4)])
    def test_max_perms_to_strong_colors(self, max_perms, esperado):
        assert RunConfig(command="selftest", max_perms=max_perms).max_strong_colors == esperado

    def test_load_game_unknown(self):
        with pytest.raises(FileNotFoundError):
            load_game("ex99")

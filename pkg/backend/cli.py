"""
Interfaz de línea de comandos del resolvedor de juegos obligantes.

Subcomandos:
    solve     Resolver un juego (archivo o nombre de fixture) e imprimir los ganadores.
    verify    Verificar una estrategia graciosa contra un juego.
    gen       Generar un juego aleatorio determinista por semilla.
    bench     Medir tiempos por motor sobre juegos aleatorios.
    selftest  Concordancia entre el resolvedor y los dos oráculos.

Los códigos de salida están en config.default.EXIT_CODES.
"""

import argparse
import logging
import math
import sys
import time
from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from config.default import (
    BENCH_CONFIG,
    DEFAULT_ENGINE,
    ENGINES,
    EXIT_CODES,
    FIXTURE_NAMES,
    GUARDS,
    OBJECTIVE_CLASSES,
    RANDOM_GAME_CONFIG,
    SELFTEST_CONFIG,
    configure_logging,
)
from utils.errors import (
    FormulaError,
    GameParseError,
    GuardExceededError,
    ObligeError,
    StructuralError,
)
from utils.game_io import fixture, parse_game, random_game, serialize_game
from utils.game_model import ObligingGame
from utils.oblige_solver import solve_game, solve_obliging
from utils.oracles import oracle_explicit_certificate_game, oracle_prior_reduction
from utils.report_generator import ReportGenerator
from utils.strategy import (
    compressed_memory_bound,
    compressed_memory_count,
    extract_strategy,
    memory_bound,
    parse_strategy,
    serialize_strategy,
    verify_strategy,
)
from utils.visualization import VisualizationGenerator

# Configurar logging
logger = logging.getLogger(__name__)

COMMANDS = ("solve", "verify", "gen", "bench", "selftest")
SELFTEST_STRONG = ("streett", "rabin", "genbuchi", "el", "parity")
SELFTEST_WEAK = ("genbuchi", "buchi", "true", "streett")


class RunConfig(BaseModel):
    """Argumentos validados de una ejecución."""
    command: Literal["solve", "verify", "gen", "bench", "selftest"]
    inputs: List[str] = Field(default_factory=list)
    engine: Literal["cert", "prior", "explicit"] = DEFAULT_ENGINE
    output: Literal["human", "json"] = "human"
    strategy: Optional[str] = None
    out: Optional[str] = None
    chart: Optional[str] = None
    seed: int = 0
    nodes: int = Field(RANDOM_GAME_CONFIG["nodes"], gt=0)
    colors: int = Field(RANDOM_GAME_CONFIG["colors"], ge=0)
    density: float = Field(RANDOM_GAME_CONFIG["density"], gt=0, le=1)
    strong: str = RANDOM_GAME_CONFIG["strong"]
    weak: str = RANDOM_GAME_CONFIG["weak"]
    sizes: List[int] = Field(default_factory=lambda: list(BENCH_CONFIG["sizes"]))
    seeds: List[int] = Field(default_factory=lambda: list(BENCH_CONFIG["seeds"]))
    engines: List[str] = Field(default_factory=lambda: list(BENCH_CONFIG["engines"]))
    max_perms: int = Field(math.factorial(GUARDS["max_strong_colors"]), gt=0)
    cert_budget: int = Field(GUARDS["cert_budget"], gt=0)

    @field_validator("strong", "weak")
    @classmethod
    def _known_class(cls, value: str) -> str:
        if value not in OBJECTIVE_CLASSES:
            raise ValueError(f"clase desconocida {value}; opciones: {', '.join(OBJECTIVE_CLASSES)}")
        return value

    @field_validator("engines")
    @classmethod
    def _known_engines(cls, value: List[str]) -> List[str]:
        desconocidos = [e for e in value if e not in ENGINES]
        if desconocidos or not value:
            raise ValueError(f"motores inválidos: {desconocidos or 'ninguno'}")
        return value

    @field_validator("sizes")
    @classmethod
    def _positive_sizes(cls, value: List[int]) -> List[int]:
        if not value or any(n <= 0 for n in value):
            raise ValueError("los tamaños deben ser positivos")
        return value

    @model_validator(mode="after")
    def _inputs_per_command(self) -> "RunConfig":
        esperados = {"solve": 1, "verify": 2}.get(self.command, 0)
        if len(self.inputs) != esperados:
            raise ValueError(f"'{self.command}' espera {esperados} archivo(s), recibió {len(self.inputs)}")
        return self

    @property
    def max_strong_colors(self) -> int:
        """Mayor d con d! <= max_perms."""
        d = 0
        while math.factorial(d + 1) <= self.max_perms:
            d += 1
        return d

    @property
    def guards(self) -> Dict[str, int]:
        return {**GUARDS, "max_strong_colors": self.max_strong_colors, "cert_budget": self.cert_budget}


def load_game(source: str) -> ObligingGame:
    """Cargar un juego desde una ruta o, si no existe el archivo, desde un fixture por nombre."""
    ruta = Path(source)
    if ruta.is_file():
        return parse_game(ruta.read_text(encoding="utf-8"))
    if source in FIXTURE_NAMES:
        return fixture(source)
    raise FileNotFoundError(f"no existe el archivo ni el fixture: {source}")


def _result(status: str, output: str = "", **extra) -> Dict:
    codigo = {"success": EXIT_CODES["ok"], "failed": EXIT_CODES["failed"]}[status]
    return {"status": status, "exit_code": codigo, "output": output, **extra}


def _error(kind: str, message: str) -> Dict:
    logger.error(message)
    return {"status": "error", "exit_code": EXIT_CODES[kind], "message": message, "output": ""}


class ObligeCLI:
    """Despacho de comandos compartido por la línea de comandos y las pruebas."""

    def __init__(self):
        self.report_generator = ReportGenerator()
        self.visualization_generator = VisualizationGenerator()

    def handle_request(self, action: str, context: Dict) -> Dict:
        """
        Punto de entrada principal para ejecutar un comando.

        Args:
            action: Comando a ejecutar.
            context: Argumentos del comando (campos de RunConfig).

        Returns:
            Diccionario con status, exit_code y output.
        """
        action_handlers = {
            "solve": self.solve,
            "verify": self.verify,
            "gen": self.gen,
            "bench": self.bench,
            "selftest": self.selftest,
        }

        if action not in action_handlers:
            return {
                "status": "error",
                "exit_code": EXIT_CODES["failed"],
                "message": f"Acción no soportada: {action}",
                "supported_actions": list(action_handlers.keys()),
            }

        try:
            config = RunConfig(command=action, **context)
        except ValidationError as e:
            return _error("parse_error", f"Argumentos inválidos: {e}")

        try:
            return action_handlers[action](config)
        except (FileNotFoundError, IsADirectoryError) as e:
            return _error("parse_error", f"Archivo no encontrado: {e}")
        except (GameParseError, StructuralError, FormulaError) as e:
            return _error("parse_error", f"Error de análisis: {e}")
        except GuardExceededError as e:
            return _error("guard_exceeded", f"Límite de recursos: {e}")
        except ObligeError as e:
            return _error("failed", f"Error en '{action}': {e}")

    def solve(self, config: RunConfig) -> Dict:
        """Resolver un juego; con `strategy` además extrae, verifica y escribe la estrategia."""
        game = load_game(config.inputs[0])
        resultado = None
        if config.engine == "cert" or config.strategy:
            resultado = solve_obliging(game, config.max_strong_colors)
        if config.engine == "cert":
            region = resultado.winning_region
        else:
            region = solve_game(game, config.engine, config.guards)

        verificacion = None
        if config.strategy:
            estrategia = extract_strategy(game, resultado)
            verificacion = verify_strategy(game, estrategia)
            Path(config.strategy).write_text(serialize_strategy(estrategia, game), encoding="utf-8")
            logger.info(f"Estrategia escrita en {config.strategy}")

        reporte = self.report_generator.build_solve_report(
            game,
            region,
            config.engine,
            certificates=resultado.certificate_map if resultado is not None and config.engine == "cert" else None,
            diagnostics=resultado.diagnostics if resultado is not None and config.engine == "cert" else None,
            verification=verificacion,
        )
        if config.output == "json":
            texto = self.report_generator.to_json(reporte)
        else:
            renderizado = self.report_generator.render_text(reporte)
            if renderizado["status"] != "success":
                return _error("failed", renderizado["message"])
            texto = renderizado["text"]

        estado = "failed" if verificacion is not None and not verificacion.ok else "success"
        return _result(estado, texto, winning_region=game.names(sorted(region)), report=reporte)

    def verify(self, config: RunConfig) -> Dict:
        """Verificar que la estrategia del archivo es fuerte y graciosa."""
        game = load_game(config.inputs[0])
        texto = Path(config.inputs[1]).read_text(encoding="utf-8")
        estrategia = parse_strategy(texto, game)
        verificacion = verify_strategy(game, estrategia)
        modelo = self.report_generator.verification_model(game, verificacion)

        if config.output == "json":
            salida = modelo.model_dump_json(indent=2)
        else:
            lineas = [
                f"fuerte: {'ok' if modelo.strong_ok else 'FALLA'}",
                f"graciosa: {'ok' if modelo.gracious_ok else 'FALLA'}",
                f"memorias alcanzables: {modelo.reachable_memory_count}",
            ]
            if modelo.counterexample is not None:
                lineas.append(f"contraejemplo: {' '.join(modelo.counterexample.stem)} ~ "
                              f"{' '.join(modelo.counterexample.loop)}")
            if modelo.stuck_state is not None:
                lineas.append(f"estado sin continuación: {modelo.stuck_state['node']} "
                              f"[{modelo.stuck_state['memory']}]")
            salida = "\n".join(lineas) + "\n"
        return _result("success" if verificacion.ok else "failed", salida, verification=modelo)

    def gen(self, config: RunConfig) -> Dict:
        """Generar un juego aleatorio; idéntico para la misma semilla y parámetros."""
        game = random_game(config.seed, config.nodes, config.colors, config.density,
                           config.strong, config.weak)
        texto = serialize_game(game)
        if config.out:
            Path(config.out).write_text(texto, encoding="utf-8")
            logger.info(f"Juego escrito en {config.out}")
        return _result("success", texto, game=game)

    def _measure(self, game: ObligingGame, engine: str, config: RunConfig) -> Dict:
        inicio = time.perf_counter()
        iteraciones = 0
        try:
            if engine == "cert":
                resultado = solve_obliging(game, config.max_strong_colors)
                region = resultado.winning_region
                iteraciones = sum(resultado.diagnostics.iterations.values())
            else:
                region = solve_game(game, engine, config.guards)
            estado = "ok"
        except GuardExceededError as e:
            logger.warning(f"Motor {engine} omitido: {e}")
            region, estado = frozenset(), "guard"
        return {
            "engine": engine,
            "seconds": time.perf_counter() - inicio,
            "winners": len(region),
            "iterations": iteraciones,
            "status": estado,
        }

    def bench(self, config: RunConfig) -> Dict:
        """Tiempos por tamaño, semilla y motor; falla si algún motor supera su techo."""
        filas = []
        for n in config.sizes:
            for seed in config.seeds:
                game = random_game(seed, n, BENCH_CONFIG["colors"], BENCH_CONFIG["density"],
                                   config.strong, config.weak)
                for engine in config.engines:
                    fila = {"nodes": n, "seed": seed, **self._measure(game, engine, config)}
                    logger.info(f"bench n={n} seed={seed} {engine}: {fila['seconds']:.3f} s")
                    filas.append(fila)

        tabla = self.visualization_generator.bench_table(filas)
        resumen = self.visualization_generator.summary_table(tabla)
        if config.chart:
            grafico = self.visualization_generator.generate_time_chart(tabla, config.chart)
            if grafico["status"] != "success":
                logger.warning(grafico["message"])

        if config.output == "json":
            salida = tabla.to_json(orient="records", indent=2)
        else:
            salida = tabla.to_string(index=False) + "\n\n" + resumen.to_string(index=False) + "\n"
        excedidos = self.visualization_generator.ceiling_violations(tabla)
        for _, fila in excedidos.iterrows():
            logger.warning(f"Techo superado: {fila['engine']} con {fila['nodes']} nodos tardó {fila['max']:.3f} s")
        return _result("success" if excedidos.empty else "failed", salida, table=tabla, summary=resumen)

    def selftest(self, config: RunConfig) -> Dict:
        """Comparar las regiones de los tres motores y verificar la estrategia extraída."""
        fallas = []
        corridas = 0
        for seed in SELFTEST_CONFIG["seeds"]:
            n = 1 + seed % SELFTEST_CONFIG["max_nodes"]
            game = random_game(seed, n, 1 + seed % SELFTEST_CONFIG["max_colors"], 0.5,
                               SELFTEST_STRONG[seed % len(SELFTEST_STRONG)],
                               SELFTEST_WEAK[seed % len(SELFTEST_WEAK)])
            resultado = solve_obliging(game, config.max_strong_colors)
            previa = oracle_prior_reduction(game)
            if previa != resultado.winning_region:
                fallas.append(f"seed={seed}: cert={sorted(resultado.winning_region)} prior={sorted(previa)}")
            if n <= SELFTEST_CONFIG["explicit_max_nodes"]:
                try:
                    explicita = oracle_explicit_certificate_game(game, cert_budget=config.cert_budget)
                    if explicita != resultado.winning_region:
                        fallas.append(f"seed={seed}: cert={sorted(resultado.winning_region)} "
                                      f"explicit={sorted(explicita)}")
                except GuardExceededError as e:
                    logger.warning(f"Oráculo explícito omitido en seed={seed}: {e}")

            estrategia = extract_strategy(game, resultado)
            verificacion = verify_strategy(game, estrategia)
            if not verificacion.ok:
                fallas.append(f"seed={seed}: estrategia extraída no graciosa")
            if verificacion.reachable_memory_count > memory_bound(game):
                fallas.append(f"seed={seed}: memoria por encima de n·certLen·d!")
            if compressed_memory_count(estrategia) > compressed_memory_bound(game):
                fallas.append(f"seed={seed}: memoria comprimida por encima de la cota")
            corridas += 1

        salida = f"{corridas} juegos, {len(fallas)} discrepancias\n" + "".join(f"  {f}\n" for f in fallas)
        return _result("failed" if fallas else "success", salida, failures=fallas)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oblige", description="Resolvedor de juegos obligantes Emerson-Lei")
    sub = parser.add_subparsers(dest="command", required=True)

    def guardas(p):
        p.add_argument("--max-perms", type=int, default=math.factorial(GUARDS["max_strong_colors"]),
                       help="Máximo de permutaciones d! del resolvedor por certificados")
        p.add_argument("--cert-budget", type=int, default=GUARDS["cert_budget"],
                       help="Máximo de estados del oráculo explícito")

    def aleatorio(p):
        p.add_argument("--strong", default=RANDOM_GAME_CONFIG["strong"], choices=OBJECTIVE_CLASSES)
        p.add_argument("--weak", default=RANDOM_GAME_CONFIG["weak"], choices=OBJECTIVE_CLASSES)

    p = sub.add_parser("solve", help="Resolver un juego")
    p.add_argument("input", help="Archivo .oblige o nombre de fixture")
    p.add_argument("--engine", choices=ENGINES, default=DEFAULT_ENGINE)
    p.add_argument("--json", action="store_true", help="Reporte JSON")
    p.add_argument("--strategy", help="Extraer, verificar y escribir la estrategia en esta ruta")
    guardas(p)

    p = sub.add_parser("verify", help="Verificar una estrategia")
    p.add_argument("input", help="Archivo .oblige o nombre de fixture")
    p.add_argument("strategy_file", help="Archivo de estrategia")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("gen", help="Generar un juego aleatorio")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nodes", type=int, default=RANDOM_GAME_CONFIG["nodes"])
    p.add_argument("--colors", type=int, default=RANDOM_GAME_CONFIG["colors"])
    p.add_argument("--density", type=float, default=RANDOM_GAME_CONFIG["density"])
    p.add_argument("--out", "-o", help="Archivo de salida (por defecto stdout)")
    aleatorio(p)

    p = sub.add_parser("bench", help="Medir tiempos por motor")
    p.add_argument("--sizes", type=int, nargs="+", default=BENCH_CONFIG["sizes"])
    p.add_argument("--seeds", type=int, nargs="+", default=BENCH_CONFIG["seeds"])
    p.add_argument("--engines", nargs="+", choices=ENGINES, default=BENCH_CONFIG["engines"])
    p.add_argument("--json", action="store_true")
    p.add_argument("--chart", help="Guardar un gráfico PNG de tiempos")
    aleatorio(p)
    guardas(p)

    p = sub.add_parser("selftest", help="Concordancia entre motores")
    guardas(p)
    return parser


def context_from_args(args: argparse.Namespace) -> Dict:
    """Traducir el Namespace de argparse a los campos de RunConfig."""
    valores = {k: v for k, v in vars(args).items() if v is not None and k != "command"}
    entradas = [valores.pop(k) for k in ("input", "strategy_file") if k in valores]
    if valores.pop("json", False):
        valores["output"] = "json"
    return {**valores, "inputs": entradas}


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    resultado = ObligeCLI().handle_request(args.command, context_from_args(args))
    if resultado["status"] == "error":
        print(f"error: {resultado['message']}", file=sys.stderr)
    else:
        sys.stdout.write(resultado["output"])
    return resultado["exit_code"]


if __name__ == "__main__":
    sys.exit(main())

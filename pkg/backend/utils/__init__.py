"""
Paquete de utilidades para el módulo backend.

Este paquete contiene el modelo de juegos obligantes, su formato de archivo, el
resolvedor por certificados, los oráculos de validación, la extracción y
verificación de estrategias, y la generación de reportes y gráficos.
"""

from .errors import (
    AcceptanceClassError,
    FormulaError,
    GameParseError,
    GuardExceededError,
    InvalidWitnessError,
    ObligeError,
    SolverConsistencyError,
    StrategyError,
    StructuralError,
)
from .game_model import And, Arena, Fin, Inf, Lasso, ObligingGame, Or, Owner, eval_on_infinity_set
from .game_io import fixture, parse_game, random_game, serialize_game
from .certificates import Certificate, cert_bound, extract_certificate, is_valid
from .el_emptiness import ELAutomaton, is_empty_generic, nonempty_states, witness_lasso
from .lar_parity import paritize, solve_el_game, zielonka_solve
from .oblige_solver import SolveResult, dag_attractor, solve_game, solve_obliging
from .oracles import oracle_explicit_certificate_game, oracle_prior_reduction
from .strategy import GraciousStrategy, extract_strategy, parse_strategy, serialize_strategy, verify_strategy
from .report_generator import ReportGenerator
from .visualization import VisualizationGenerator

__all__ = [
    'ObligeError',
    'GameParseError',
    'StructuralError',
    'FormulaError',
    'InvalidWitnessError',
    'AcceptanceClassError',
    'GuardExceededError',
    'StrategyError',
    'SolverConsistencyError',
    'Owner',
    'Inf',
    'Fin',
    'And',
    'Or',
    'Arena',
    'Lasso',
    'ObligingGame',
    'eval_on_infinity_set',
    'parse_game',
    'serialize_game',
    'random_game',
    'fixture',
    'Certificate',
    'cert_bound',
    'is_valid',
    'extract_certificate',
    'ELAutomaton',
    'nonempty_states',
    'is_empty_generic',
    'witness_lasso',
    'paritize',
    'zielonka_solve',
    'solve_el_game',
    'SolveResult',
    'dag_attractor',
    'solve_obliging',
    'solve_game',
    'oracle_prior_reduction',
    'oracle_explicit_certificate_game',
    'GraciousStrategy',
    'extract_strategy',
    'verify_strategy',
    'serialize_strategy',
    'parse_strategy',
    'ReportGenerator',
    'VisualizationGenerator',
]

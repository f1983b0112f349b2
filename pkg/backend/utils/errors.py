"""
Jerarquía de excepciones del resolvedor.

Todas las operaciones de la biblioteca lanzan subclases de ObligeError; las
superficies (CLI y API) las convierten en diccionarios de estado.
"""

from typing import Optional


class ObligeError(Exception):
    """Error base de la biblioteca."""


class StructuralError(ObligeError):
    """Arena, lasso o camino inválido (arista inexistente, nodo sin sucesor...)."""


class FormulaError(ObligeError):
    """Fórmula Emerson-Lei mal formada o con colores no declarados."""


class GameParseError(ObligeError):
    """Error de análisis de un archivo de juego o de estrategia.

    Args:
        message: Descripción del problema.
        line: Línea (1-indexada) donde se detectó.
        column: Columna (1-indexada), si se conoce.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        ubicacion = ""
        if line is not None:
            ubicacion = f"línea {line}" + (f", columna {column}" if column is not None else "") + ": "
        super().__init__(f"{ubicacion}{message}")


class InvalidWitnessError(ObligeError):
    """Testigo que no satisface alguno de los objetivos."""

    def __init__(self, message: str, formula: str):
        self.formula = formula
        super().__init__(f"{message}: {formula}")


class AcceptanceClassError(ObligeError):
    """La condición de aceptación no pertenece a la clase pedida."""


class GuardExceededError(ObligeError):
    """Se superó un límite de recursos configurado."""

    def __init__(self, guard: str, value: int, limit: int):
        self.guard = guard
        self.value = value
        self.limit = limit
        super().__init__(f"límite '{guard}' superado: {value} > {limit}")


class StrategyError(ObligeError):
    """Estrategia incompleta, mal formada o sin certificado para una memoria."""


class SolverConsistencyError(ObligeError):
    """Falla de una postcondición interna del resolvedor."""

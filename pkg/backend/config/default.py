"""
Archivo de configuración por defecto para el resolvedor de juegos obligantes.

Este módulo define constantes y variables globales utilizadas en todo el sistema,
incluyendo límites de recursos, parámetros de generación aleatoria y opciones
de reportes y visualización.
"""

import os
import logging
from pathlib import Path

from dotenv import load_dotenv

# Variables de entorno (.env opcional en la raíz del proyecto)
load_dotenv()

# Formato de archivos
GAME_FORMAT_HEADER = "oblige"
GAME_FORMAT_VERSION = 1
STRATEGY_FORMAT_HEADER = "oblige-strategy"
STRATEGY_FORMAT_VERSION = 1
REPORT_SCHEMA_VERSION = "1.0"

BACKEND_DIR = Path(__file__).resolve().parent.parent
FIXTURES_DIR = Path(os.getenv("OBLIGE_FIXTURES_DIR", BACKEND_DIR / "fixtures"))
FIXTURE_NAMES = ("ex1", "ex1-dashed", "ex10", "ex10-forall")

# Límites de recursos
GUARDS = {
    "max_strong_colors": 4,        # d! permutaciones
    "cert_budget": 100_000,        # oráculo explícito
    "prior_max_weak_colors": 8,    # autómata 2^k·k
    "generic_max_colors": 16,      # enumeración de subconjuntos
}

ENGINES = ("cert", "prior", "explicit")
DEFAULT_ENGINE = "cert"

# Códigos de salida de la CLI
EXIT_CODES = {
    "ok": 0,
    "failed": 1,
    "parse_error": 2,
    "guard_exceeded": 3,
}

# Generación aleatoria de juegos
RANDOM_GAME_CONFIG = {
    "nodes": 4,
    "colors": 2,
    "density": 0.5,
    "strong": "streett",
    "weak": "genbuchi",
    "forall_ratio": 0.5,
}
OBJECTIVE_CLASSES = ("buchi", "genbuchi", "parity", "rabin", "streett", "gr1", "el", "true")

# Benchmarks
BENCH_CONFIG = {
    "sizes": [3, 4, 5],
    "seeds": [1, 2, 3],
    "colors": 3,
    "density": 0.5,
    "engines": ["cert", "prior"],
    # techos de regresión en segundos por instancia
    "ceilings": {"cert": 5.0, "prior": 20.0, "explicit": 60.0},
}

# Autoprueba de concordancia entre oráculos
SELFTEST_CONFIG = {
    "seeds": list(range(1, 21)),
    "max_nodes": 4,
    "max_colors": 3,
    "explicit_max_nodes": 3,
}

# Configuración de visualización
VISUALIZATION_CONFIG = {
    "engine_colors": {"cert": "#1f77b4", "prior": "#ff7f0e", "explicit": "#2ca02c"},
    "figure_size": (8, 4.5),
    "dpi": 100,
    "title": "Tiempo de resolución por motor",
}

# Configuración para generación de reportes
REPORT_CONFIG = {
    "title": "Reporte de resolución de juego obligante",
    "exists_label": "E",
    "forall_label": "A",
    "max_certificates": 50,
}

# Configuración de logging
LOGGING_CONFIG = {
    "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
    "default_level": "WARNING",
}


def configure_logging(level: str = None) -> None:
    """Configurar logging según OBLIGE_LOG o el nivel indicado."""
    nivel = (level or os.getenv("OBLIGE_LOG") or LOGGING_CONFIG["default_level"]).upper()
    logging.basicConfig(
        level=getattr(logging, nivel, logging.WARNING),
        format=LOGGING_CONFIG["format"],
    )

"""
Utilidad para visualización de benchmarks.

Este módulo contiene funciones para tabular tiempos de resolución con pandas y
graficarlos por motor con matplotlib.
"""

import io
import base64
import logging
from typing import Dict, List, Optional

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from config.default import BENCH_CONFIG, VISUALIZATION_CONFIG

# Configurar logging
logger = logging.getLogger(__name__)

BENCH_COLUMNS = ["nodes", "seed", "engine", "seconds", "winners", "iterations", "status"]


class VisualizationGenerator:
    """Clase para generar tablas y gráficos de benchmarks."""

    def __init__(self,
                 engine_colors: Dict[str, str] = VISUALIZATION_CONFIG["engine_colors"],
                 figure_size=VISUALIZATION_CONFIG["figure_size"],
                 dpi: int = VISUALIZATION_CONFIG["dpi"]):
        """Inicializar generador de visualizaciones.

        Args:
            engine_colors: Color de cada motor en los gráficos.
            figure_size: Tamaño de figura en pulgadas.
            dpi: Resolución de las imágenes.
        """
        self.engine_colors = engine_colors
        self.figure_size = figure_size
        self.dpi = dpi

    def bench_table(self, rows: List[Dict]) -> pd.DataFrame:
        """Tabla de mediciones, una fila por (tamaño, semilla, motor)."""
        tabla = pd.DataFrame(rows, columns=BENCH_COLUMNS)
        return tabla.sort_values(["nodes", "seed", "engine"]).reset_index(drop=True)

    def summary_table(self, table: pd.DataFrame) -> pd.DataFrame:
        """Tiempo medio y máximo por tamaño y motor, con el techo de regresión configurado."""
        correctas = table[table["status"] == "ok"]
        resumen = (correctas.groupby(["nodes", "engine"])["seconds"]
                   .agg(mean="mean", max="max", runs="count")
                   .reset_index())
        techos = BENCH_CONFIG["ceilings"]
        resumen["ceiling"] = resumen["engine"].map(lambda e: techos.get(e, np.inf))
        resumen["within_ceiling"] = resumen["max"] <= resumen["ceiling"]
        return resumen

    def ceiling_violations(self, table: pd.DataFrame) -> pd.DataFrame:
        resumen = self.summary_table(table)
        return resumen[~resumen["within_ceiling"]]

    def generate_time_chart(self, table: pd.DataFrame, path: Optional[str] = None) -> Dict:
        """Generar gráfico de barras con el tiempo medio por tamaño y motor.

        Args:
            table: Tabla de benchmark (ver `bench_table`).
            path: Archivo PNG donde guardar el gráfico (opcional).

        Returns:
            Diccionario con imagen base64 del gráfico y metadatos.
        """
        try:
            resumen = self.summary_table(table)
            if resumen.empty:
                return {"status": "error", "message": "No hay mediciones correctas para graficar", "imagen": None}

            pivote = resumen.pivot(index="nodes", columns="engine", values="mean").fillna(0.0)
            motores = list(pivote.columns)
            indice = np.arange(len(pivote.index))
            ancho = 0.8 / max(len(motores), 1)

            fig, ax = plt.subplots(figsize=self.figure_size)
            for i, motor in enumerate(motores):
                ax.bar(indice + (i - (len(motores) - 1) / 2) * ancho, pivote[motor], ancho,
                       label=motor, color=self.engine_colors.get(motor))

            ax.set_title(VISUALIZATION_CONFIG["title"], fontsize=14)
            ax.set_xlabel("Nodos")
            ax.set_ylabel("Segundos (media)")
            ax.set_xticks(indice)
            ax.set_xticklabels([str(n) for n in pivote.index])
            ax.legend(loc="upper left")
            ax.spines['top'].set_visible(False)
            ax.spines['right'].set_visible(False)
            ax.grid(axis='y', linestyle='--', alpha=0.7)

            buf = io.BytesIO()
            fig.savefig(buf, format='png', dpi=self.dpi, bbox_inches='tight')
            if path:
                fig.savefig(path, format='png', dpi=self.dpi, bbox_inches='tight')
            buf.seek(0)
            imagen_base64 = base64.b64encode(buf.getvalue()).decode('utf-8')
            plt.close(fig)

            return {"status": "success", "imagen": imagen_base64, "formato": "png", "path": path}

        except Exception as e:
            logger.error(f"Error al generar gráfico de tiempos: {str(e)}")
            return {"status": "error", "message": f"Error al generar gráfico de tiempos: {str(e)}", "imagen": None}

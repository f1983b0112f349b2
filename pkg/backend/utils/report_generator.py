"""
Utilidad para generación de reportes de resolución.

Este módulo arma el reporte JSON versionado de una resolución (ganador por
nodo, certificados, diagnósticos y verificación de la estrategia) y su
versión legible renderizada con jinja2.
"""

import datetime
import logging
from typing import Dict, List, Optional

from jinja2 import Template
from pydantic import BaseModel, Field

from config.default import REPORT_CONFIG, REPORT_SCHEMA_VERSION
from utils.certificates import Certificate
from utils.game_model import Lasso, ObligingGame

# Configurar logging
logger = logging.getLogger(__name__)


class NodeWinner(BaseModel):
    node: str
    winner: str


class CertificateEntry(BaseModel):
    node: str
    permutation: List[str]
    stem: List[str]
    loop: List[str]


class LassoModel(BaseModel):
    stem: List[str]
    loop: List[str]


class DiagnosticsModel(BaseModel):
    iterations: Dict[str, int] = Field(default_factory=dict)
    attractor_calls: int = 0
    core_evaluations: int = 0
    cache_hits: int = 0
    candidate_certificates: int = 0
    elapsed_seconds: float = 0.0


class VerificationModel(BaseModel):
    strong_ok: bool
    gracious_ok: bool
    reachable_memory_count: int
    product_states: int
    counterexample: Optional[LassoModel] = None
    stuck_state: Optional[Dict[str, str]] = None


class GameSummary(BaseModel):
    nodes: List[str]
    n: int
    d: int
    k: int


class SolveReport(BaseModel):
    """Reporte de resolución con esquema versionado."""
    schema_version: str = REPORT_SCHEMA_VERSION
    engine: str
    game: GameSummary
    winners: List[NodeWinner]
    winning_region: List[str]
    certificates: List[CertificateEntry] = Field(default_factory=list)
    diagnostics: Optional[DiagnosticsModel] = None
    verification: Optional[VerificationModel] = None


def lasso_model(lasso: Lasso, game: ObligingGame) -> LassoModel:
    return LassoModel(stem=game.names(lasso.stem), loop=game.names(lasso.loop))


class ReportGenerator:
    """Clase para generar reportes de resolución de juegos obligantes."""

    def __init__(self, title: str = REPORT_CONFIG["title"]):
        self.title = title
        self.today = datetime.datetime.now().strftime("%d/%m/%Y")
        self.report_template = self._get_default_template()

    def _get_default_template(self) -> str:
        """Plantilla de texto para el reporte legible."""
        return (
            "{{ titulo }} ({{ fecha }})\n"
            "Motor: {{ reporte.engine }} | n={{ reporte.game.n }} d={{ reporte.game.d }} k={{ reporte.game.k }}\n"
            "\n"
            "Ganadores por nodo:\n"
            "{% for fila in reporte.winners %}"
            "  {{ fila.node }}: {{ etiquetas[fila.winner] }}\n"
            "{% endfor %}"
            "{% if certificados %}"
            "\nCertificados:\n"
            "{% for c in certificados %}"
            "  ({{ c.node }}, {{ c.permutation|join('.') }}): {{ c.stem|join(' ') }} ~ {{ c.loop|join(' ') }}\n"
            "{% endfor %}"
            "{% if omitidos %}  ... {{ omitidos }} certificados más\n{% endif %}"
            "{% endif %}"
            "{% if reporte.diagnostics %}"
            "\nDiagnóstico: {{ reporte.diagnostics.attractor_calls }} atractores, "
            "{{ reporte.diagnostics.core_evaluations }} núcleos, "
            "{{ reporte.diagnostics.cache_hits }} aciertos de caché, "
            "{{ '%.3f'|format(reporte.diagnostics.elapsed_seconds) }} s\n"
            "{% endif %}"
            "{% if reporte.verification %}"
            "\nEstrategia: fuerte={{ 'ok' if reporte.verification.strong_ok else 'FALLA' }}, "
            "graciosa={{ 'ok' if reporte.verification.gracious_ok else 'FALLA' }}, "
            "{{ reporte.verification.reachable_memory_count }} memorias\n"
            "{% if reporte.verification.counterexample %}"
            "  contraejemplo: {{ reporte.verification.counterexample.stem|join(' ') }} ~ "
            "{{ reporte.verification.counterexample.loop|join(' ') }}\n"
            "{% endif %}"
            "{% if reporte.verification.stuck_state %}"
            "  estado sin continuación: {{ reporte.verification.stuck_state.node }} "
            "[{{ reporte.verification.stuck_state.memory }}]\n"
            "{% endif %}"
            "{% endif %}"
        )

    def build_solve_report(self,
                           game: ObligingGame,
                           winning_region,
                           engine: str,
                           certificates: Optional[Dict] = None,
                           diagnostics=None,
                           verification=None) -> SolveReport:
        """Armar el reporte de una resolución.

        Args:
            game: Juego resuelto.
            winning_region: Nodos donde ∃ gana graciosamente.
            engine: Motor utilizado.
            certificates: Mapa (v, π) → Certificate, si el motor los produce.
            diagnostics: SolveDiagnostics del resolvedor por certificados.
            verification: VerificationReport de la estrategia extraída.

        Returns:
            Reporte validado por el esquema.
        """
        etiquetas = {True: REPORT_CONFIG["exists_label"], False: REPORT_CONFIG["forall_label"]}
        ganadores = [NodeWinner(node=game.node_names[v], winner=etiquetas[v in winning_region])
                     for v in game.arena.nodes]
        entradas = []
        for (v, perm), cert in sorted((certificates or {}).items()):
            entradas.append(self._certificate_entry(game, v, perm, cert))

        diag = None
        if diagnostics is not None:
            diag = DiagnosticsModel(
                iterations={str(i): c for i, c in sorted(diagnostics.iterations.items())},
                attractor_calls=diagnostics.attractor_calls,
                core_evaluations=diagnostics.core_evaluations,
                cache_hits=diagnostics.cache_hits,
                candidate_certificates=diagnostics.candidate_certificates,
                elapsed_seconds=diagnostics.elapsed_seconds,
            )

        verif = self.verification_model(game, verification) if verification is not None else None

        return SolveReport(
            engine=engine,
            game=GameSummary(nodes=list(game.node_names), n=game.n, d=game.d, k=game.k),
            winners=ganadores,
            winning_region=game.names(sorted(winning_region)),
            certificates=entradas,
            diagnostics=diag,
            verification=verif,
        )

    @staticmethod
    def verification_model(game: ObligingGame, verification) -> VerificationModel:
        """Resumen serializable de un VerificationReport."""
        atascado = None
        if verification.stuck_state is not None:
            nodo, memoria = verification.stuck_state
            etiqueta = memoria.label(game) if hasattr(memoria, "label") else str(memoria)
            atascado = {"node": game.node_names[nodo], "memory": etiqueta}
        return VerificationModel(
            strong_ok=verification.strong_ok,
            gracious_ok=verification.gracious_ok,
            reachable_memory_count=verification.reachable_memory_count,
            product_states=verification.product_states,
            counterexample=(lasso_model(verification.counterexample, game)
                            if verification.counterexample is not None else None),
            stuck_state=atascado,
        )

    @staticmethod
    def _certificate_entry(game: ObligingGame, v: int, perm, cert: Certificate) -> CertificateEntry:
        return CertificateEntry(
            node=game.node_names[v],
            permutation=[game.color_names[c] for c in perm],
            stem=game.names(cert.stem),
            loop=game.names(cert.loop),
        )

    def to_json(self, report: SolveReport) -> str:
        return report.model_dump_json(indent=2)

    def render_text(self, report: SolveReport) -> Dict:
        """Renderizar el reporte legible.

        Returns:
            Diccionario con estado y texto del reporte.
        """
        try:
            maximo = REPORT_CONFIG["max_certificates"]
            template = Template(self.report_template)
            texto = template.render(
                titulo=self.title,
                fecha=self.today,
                reporte=report,
                etiquetas={REPORT_CONFIG["exists_label"]: "∃", REPORT_CONFIG["forall_label"]: "∀"},
                certificados=report.certificates[:maximo],
                omitidos=max(len(report.certificates) - maximo, 0),
            )
            return {"status": "success", "text": texto}
        except Exception as e:
            logger.error(f"Error al generar reporte de resolución: {str(e)}")
            return {"status": "error", "message": f"Error al generar reporte de resolución: {str(e)}", "text": None}

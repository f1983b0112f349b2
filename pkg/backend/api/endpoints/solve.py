"""
Endpoints de API para resolver juegos y verificar estrategias.
"""

import logging
from typing import List, Literal, Optional

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, model_validator

from config.default import DEFAULT_ENGINE, FIXTURE_NAMES, FIXTURES_DIR, GUARDS
from utils.errors import GuardExceededError, ObligeError
from utils.game_io import fixture, parse_game
from utils.game_model import ObligingGame
from utils.oblige_solver import solve_game, solve_obliging
from utils.report_generator import ReportGenerator, SolveReport, VerificationModel
from utils.strategy import extract_strategy, parse_strategy, serialize_strategy, verify_strategy

# Configurar logging
logger = logging.getLogger(__name__)

router = APIRouter()


# Modelos Pydantic para la API
class GameSource(BaseModel):
    """Juego en texto `.oblige` o nombre de un fixture incluido."""
    game: Optional[str] = None
    fixture: Optional[str] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.game is None) == (self.fixture is None):
            raise ValueError("se requiere exactamente uno de 'game' o 'fixture'")
        return self

    def load(self) -> ObligingGame:
        return parse_game(self.game) if self.game is not None else fixture(self.fixture)


class SolveRequest(GameSource):
    """Modelo para solicitud de resolución."""
    engine: Literal["cert", "prior", "explicit"] = DEFAULT_ENGINE
    strategy: bool = False
    max_strong_colors: int = GUARDS["max_strong_colors"]


class SolveResponse(BaseModel):
    """Modelo para respuesta de resolución."""
    status: str
    report: Optional[SolveReport] = None
    strategy: Optional[str] = None
    mensaje: Optional[str] = None


class VerifyRequest(GameSource):
    strategy: str


class VerifyResponse(BaseModel):
    status: str
    verification: Optional[VerificationModel] = None
    mensaje: Optional[str] = None


class FixtureResponse(BaseModel):
    status: str
    name: str
    game: str
    nodes: List[str]


# Instanciar las clases de utilidades
report_generator = ReportGenerator()


@router.post("/solve", response_model=SolveResponse)
async def resolver_juego(request: SolveRequest):
    """
    Resolver un juego obligante.

    Args:
        request: Juego, motor y si se desea la estrategia extraída.

    Returns:
        Reporte de resolución y, opcionalmente, la estrategia en texto.
    """
    try:
        game = request.load()
        resultado = None
        if request.engine == "cert" or request.strategy:
            resultado = solve_obliging(game, request.max_strong_colors)
        region = (resultado.winning_region if request.engine == "cert"
                  else solve_game(game, request.engine, {"max_strong_colors": request.max_strong_colors}))

        estrategia_texto, verificacion = None, None
        if request.strategy:
            estrategia = extract_strategy(game, resultado)
            verificacion = verify_strategy(game, estrategia)
            estrategia_texto = serialize_strategy(estrategia, game)

        propio = request.engine == "cert"
        reporte = report_generator.build_solve_report(
            game, region, request.engine,
            certificates=resultado.certificate_map if propio else None,
            diagnostics=resultado.diagnostics if propio else None,
            verification=verificacion,
        )
        return SolveResponse(status="success", report=reporte, strategy=estrategia_texto)

    except GuardExceededError as e:
        logger.error(f"Límite de recursos: {e}")
        return SolveResponse(status="error", mensaje=f"Límite de recursos: {str(e)}")
    except ObligeError as e:
        logger.error(f"Error al resolver: {e}")
        return SolveResponse(status="error", mensaje=f"Error al resolver: {str(e)}")


@router.post("/verify", response_model=VerifyResponse)
async def verificar_estrategia(request: VerifyRequest):
    """Verificar que una estrategia es fuerte y graciosa."""
    try:
        game = request.load()
        verificacion = verify_strategy(game, parse_strategy(request.strategy, game))
        return VerifyResponse(
            status="success" if verificacion.ok else "failed",
            verification=report_generator.verification_model(game, verificacion),
        )
    except ObligeError as e:
        logger.error(f"Error al verificar: {e}")
        return VerifyResponse(status="error", mensaje=f"Error al verificar: {str(e)}")


@router.get("/fixtures/{name}", response_model=FixtureResponse)
async def obtener_fixture(name: str):
    """Devolver el texto de un juego de ejemplo."""
    if name not in FIXTURE_NAMES:
        raise HTTPException(status_code=404, detail=f"Fixture desconocido: {name}")
    texto = (FIXTURES_DIR / f"{name}.oblige").read_text(encoding="utf-8")
    return FixtureResponse(status="success", name=name, game=texto, nodes=list(fixture(name).node_names))

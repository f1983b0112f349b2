"""
Certificados: lassos wu^ω que satisfacen ambos objetivos.

Incluye la verificación de validez, las cotas de longitud y la extracción de
un certificado acotado a partir de un lasso testigo.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

from utils.el_emptiness import color_tour
from utils.errors import InvalidWitnessError, SolverConsistencyError, StructuralError
from utils.game_model import (
    ColorSet,
    Lasso,
    ObligingGame,
    eval_on_infinity_set,
    format_formula,
    lasso_infinity_set,
)

# Configurar logging
logger = logging.getLogger(__name__)

Exit = Tuple[int, ColorSet]


@dataclass(frozen=True)
class Certificate:
    """Certificado (w, u) para el nodo w[0]."""
    stem: Tuple[int, ...]
    loop: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.stem or not self.loop:
            raise StructuralError("stem y loop de un certificado deben ser no vacíos")

    @property
    def node(self) -> int:
        return self.stem[0]

    @property
    def sequence(self) -> Tuple[int, ...]:
        return self.stem + self.loop

    def __len__(self) -> int:
        return len(self.stem) + len(self.loop)

    def as_lasso(self) -> Lasso:
        return Lasso(self.stem, self.loop)


def _stem_cap(n: int, d: int) -> int:
    # Con d = 0 la huella siempre es completa: el stem es un camino simple
    return n * d if d else n


def cert_bound(n: int, d: int, k: int) -> int:
    return _stem_cap(n, d) + (d + k + 1) * (n + 1)


def cert_len(game: ObligingGame) -> int:
    """Cota n·d + (d+k+1)·(n+1) de la longitud de un certificado."""
    return cert_bound(game.n, game.d, game.k)


def stem_bound(game: ObligingGame) -> int:
    """Cota n·d del stem extraído (n cuando S = ∅)."""
    return _stem_cap(game.n, game.d)


def loop_bound(game: ObligingGame) -> int:
    return (game.d + game.k + 1) * (game.n + 1)


def failing_formula(lasso: Lasso, game: ObligingGame) -> Optional[str]:
    """Nombre de la primera fórmula que el lasso no satisface, o None."""
    infinitos = lasso_infinity_set(lasso, game)
    for nombre, formula in (("strong", game.strong), ("weak", game.weak)):
        if not eval_on_infinity_set(formula, infinitos):
            return f"{nombre} {format_formula(formula, game.color_names)}"
    return None


def is_valid(cert: Certificate, game: ObligingGame) -> bool:
    """True sii el certificado satisface φS y φW.

    Raises:
        StructuralError: Si wu no es una jugada o el lazo no cierra.
    """
    return failing_formula(cert.as_lasso(), game) is None


def prefix_fingerprints(sequence: Sequence[int], game: ObligingGame) -> List[ColorSet]:
    """Huellas S de cada prefijo: la posición i acumula las aristas hasta sequence[i]."""
    fuertes = frozenset(game.strong_colors)
    huellas = [frozenset()]
    for v, w in zip(sequence, sequence[1:]):
        huellas.append(huellas[-1] | (game.arena.edge_colors(v, w) & fuertes))
    return huellas


def certificate_exits(cert: Certificate, game: ObligingGame) -> FrozenSet[Exit]:
    """Salidas (w, F_i ∪ γS(v_i, w)) desde las posiciones ∀ del primer recorrido de wu.

    Todo sucesor de una posición ∀ es una salida, también el siguiente nodo
    del propio certificado.
    """
    secuencia = cert.sequence
    huellas = prefix_fingerprints(secuencia, game)
    fuertes = frozenset(game.strong_colors)
    salidas = set()
    for i, v in enumerate(secuencia):
        if game.arena.is_exists(v):
            continue
        for w in game.arena.successors(v):
            salidas.add((w, huellas[i] | (game.arena.edge_colors(v, w) & fuertes)))
    return frozenset(salidas)


def fingerprint_correspondence(cert: Certificate, witness: Lasso, game: ObligingGame) -> bool:
    """Cada posición del certificado tiene una posición del testigo con igual nodo y huella."""
    pasos = len(witness.stem) + 2 * len(witness.loop) + 1
    testigo = witness.unroll(pasos)
    pares_testigo = set(zip(testigo, prefix_fingerprints(testigo, game)))
    secuencia = cert.sequence
    return all(par in pares_testigo for par in zip(secuencia, prefix_fingerprints(secuencia, game)))


def _remove_repeats(pairs: List[Tuple[int, ColorSet]]) -> List[Tuple[int, ColorSet]]:
    # par repetido más a la izquierda, tramo más largo
    actual = list(pairs)
    while True:
        corte = None
        for p, par in enumerate(actual):
            for q in range(len(actual) - 1, p, -1):
                if actual[q] == par:
                    corte = (p, q)
                    break
            if corte:
                break
        if corte is None:
            return actual
        p, q = corte
        del actual[p + 1:q + 1]


def extract_certificate(witness: Lasso, game: ObligingGame) -> Certificate:
    """Extraer un certificado acotado de un lasso testigo.

    Args:
        witness: Lasso que satisface φS ∧ φW.
        game: Juego obligante.

    Returns:
        Certificado válido con stem ≤ n·d y loop ≤ (d+k+1)·(n+1), cuya
        huella S al comenzar el lazo ya es completa.

    Raises:
        InvalidWitnessError: Si el testigo no satisface alguno de los objetivos.
    """
    falla = failing_formula(witness, game)
    if falla is not None:
        raise InvalidWitnessError("el testigo no satisface la fórmula", falla)

    arena = game.arena
    jugada = witness.unroll(len(witness.stem) + len(witness.loop) + 1)
    huellas = prefix_fingerprints(jugada, game)
    completa = huellas[-1]
    j = next(i for i in range(len(witness.stem), len(jugada)) if huellas[i] == completa)

    pares = _remove_repeats(list(zip(jugada[:j + 1], huellas[:j + 1])))
    if pares[-1][1] != completa:
        raise SolverConsistencyError("la eliminación de ciclos cambió la huella final")
    stem = [v for v, _ in pares]

    aristas = [(v, w, arena.edge_colors(v, w)) for v, w in witness.loop_edges()]
    requeridos = sorted(lasso_infinity_set(witness, game))
    recorrido = color_tour(aristas, stem[-1], requeridos)
    loop = recorrido[1:]

    # Rotar mientras el stem ya tenga la huella completa
    while len(stem) > 1 and stem[-1] == loop[-1] and prefix_fingerprints(stem, game)[-1] == completa:
        loop = [stem.pop()] + loop[:-1]

    cert = Certificate(tuple(stem), tuple(loop))
    if not is_valid(cert, game):
        raise SolverConsistencyError("el certificado extraído no es válido")
    if len(cert.stem) > stem_bound(game) or len(cert.loop) > loop_bound(game):
        raise SolverConsistencyError(
            f"certificado fuera de cota: stem {len(cert.stem)}, loop {len(cert.loop)}")
    logger.debug(f"Certificado extraído: stem {len(cert.stem)}, loop {len(cert.loop)}")
    return cert


def format_certificate(cert: Certificate, game: ObligingGame) -> str:
    """Forma textual `stem ~ loop` con nombres de nodo."""
    return f"{' '.join(game.names(cert.stem))} ~ {' '.join(game.names(cert.loop))}"

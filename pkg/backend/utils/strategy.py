"""
Estrategias graciosas: extracción desde los certificados, verificación y
formato de texto.

Una estrategia es una máquina de Mealy sobre la arena. La memoria de las
estrategias extraídas es (ancla, π, posición) dentro del certificado vigente;
las estrategias leídas de archivo usan etiquetas de texto arbitrarias.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, List, Optional, Tuple

from config.default import STRATEGY_FORMAT_HEADER, STRATEGY_FORMAT_VERSION
from utils.certificates import Certificate, cert_len, prefix_fingerprints
from utils.el_emptiness import ELAutomaton, Transition, nonempty_states, witness_lasso
from utils.errors import GameParseError, StrategyError, StructuralError
from utils.game_model import Lasso, ObligingGame, negate
from utils.lar_parity import Permutation, shift

# Configurar logging
logger = logging.getLogger(__name__)

ProductState = Tuple[int, Hashable]


@dataclass(frozen=True)
class Memory:
    """Memoria estructurada: certificado de (anchor, perm) y posición actual en él."""
    anchor: int
    perm: Permutation
    pos: int

    def label(self, game: ObligingGame) -> str:
        colores = ".".join(game.color_names[c] for c in self.perm)
        return f"{game.node_names[self.anchor]}:{colores}:{self.pos}"


@dataclass
class GraciousStrategy:
    """Máquina de Mealy: memoria inicial por nodo, movidas de ∃ y actualización por arista."""
    initial: Dict[int, Hashable]
    move: Dict[Tuple[int, Hashable], int]
    update: Dict[Tuple[Hashable, int, int], Hashable]
    certificates: Dict[Tuple[int, Permutation], Certificate] = field(default_factory=dict)

    def memories(self) -> FrozenSet[Hashable]:
        todas = set(self.initial.values())
        for (m, _, _), siguiente in self.update.items():
            todas.add(m)
            todas.add(siguiente)
        return frozenset(todas)

    def next_memory(self, memory: Hashable, source: int, target: int) -> Hashable:
        try:
            return self.update[(memory, source, target)]
        except KeyError:
            raise StrategyError(f"actualización no definida para {memory!r} en ({source},{target})") from None

    def next_node(self, node: int, memory: Hashable) -> int:
        try:
            return self.move[(node, memory)]
        except KeyError:
            raise StrategyError(f"movida no definida para el nodo {node} con memoria {memory!r}") from None


@dataclass
class VerificationReport:
    strong_ok: bool
    gracious_ok: bool
    reachable_memory_count: int
    product_states: int
    counterexample: Optional[Lasso] = None
    stuck_state: Optional[ProductState] = None

    @property
    def ok(self) -> bool:
        return self.strong_ok and self.gracious_ok


def extract_strategy(game: ObligingGame, result) -> GraciousStrategy:
    """Construir la estrategia que recorre certificados y reinicia en cada desvío de ∀.

    Args:
        game: Juego obligante.
        result: SolveResult con un certificado por nodo real ganador.

    Returns:
        Estrategia total sobre las memorias alcanzables desde la región ganadora.
    """
    certificados = result.certificate_map
    fuertes = frozenset(game.strong_colors)
    inicial = {}
    for v in sorted(result.winning_region):
        if (v, result.initial_permutation) not in certificados:
            raise StrategyError(f"falta el certificado del nodo real {(v, result.initial_permutation)}")
        inicial[v] = Memory(v, result.initial_permutation, 0)

    movidas: Dict[Tuple[int, Hashable], int] = {}
    actualizaciones: Dict[Tuple[Hashable, int, int], Hashable] = {}
    vistas = set(inicial.values())
    cola = deque(sorted(vistas, key=lambda m: m.anchor))
    while cola:
        memoria = cola.popleft()
        cert = certificados.get((memoria.anchor, memoria.perm))
        if cert is None:
            raise StrategyError(f"falta el certificado del nodo real {(memoria.anchor, memoria.perm)}")
        secuencia = cert.sequence
        x = secuencia[memoria.pos]
        siguiente = memoria.pos + 1 if memoria.pos + 1 < len(secuencia) else len(cert.stem)
        sucesores = [secuencia[siguiente]] if game.arena.is_exists(x) else list(game.arena.successors(x))
        if game.arena.is_exists(x):
            movidas[(x, memoria)] = secuencia[siguiente]
        huella = prefix_fingerprints(secuencia[:memoria.pos + 1], game)[-1]
        for y in sucesores:
            if y == secuencia[siguiente]:
                nueva = Memory(memoria.anchor, memoria.perm, siguiente)
            else:
                salida = huella | (game.arena.edge_colors(x, y) & fuertes)
                nueva = Memory(y, shift(memoria.perm, salida), 0)
                if (nueva.anchor, nueva.perm) not in certificados:
                    raise StrategyError(f"salida sin certificado hacia {(nueva.anchor, nueva.perm)}")
            actualizaciones[(memoria, x, y)] = nueva
            if nueva not in vistas:
                vistas.add(nueva)
                cola.append(nueva)
    logger.info(f"Estrategia extraída con {len(vistas)} memorias alcanzables")
    return GraciousStrategy(inicial, movidas, actualizaciones, dict(certificados))


def _product(game: ObligingGame, strategy: GraciousStrategy
             ) -> Tuple[List[ProductState], List[Transition], List[int]]:
    """Estados alcanzables de arena × memoria, transiciones y estados iniciales."""
    indice: Dict[ProductState, int] = {}
    estados: List[ProductState] = []
    transiciones: List[Transition] = []
    cola = deque()

    def visitar(estado: ProductState) -> int:
        if estado not in indice:
            indice[estado] = len(estados)
            estados.append(estado)
            cola.append(estado)
        return indice[estado]

    iniciales = [visitar((v, m)) for v, m in sorted(strategy.initial.items(), key=lambda i: i[0])]
    while cola:
        x, memoria = cola.popleft()
        if game.arena.is_exists(x):
            y = strategy.next_node(x, memoria)
            if not game.arena.has_edge(x, y):
                raise StrategyError(f"la estrategia mueve por una arista inexistente ({x},{y})")
            sucesores = [y]
        else:
            sucesores = list(game.arena.successors(x))
        for y in sucesores:
            destino = visitar((y, strategy.next_memory(memoria, x, y)))
            transiciones.append(Transition(indice[(x, memoria)], destino, game.arena.edge_colors(x, y)))
    return estados, transiciones, iniciales


def _lasso_nodes(estados: List[ProductState], stem, loop) -> Lasso:
    return Lasso(tuple(estados[q][0] for q in stem), tuple(estados[q][0] for q in loop))


def verify_strategy(game: ObligingGame, strategy: GraciousStrategy) -> VerificationReport:
    """Verificar las condiciones fuerte y graciosa sobre el producto finito.

    Fuerte: el producto con aceptación ¬φS es vacío desde los estados iniciales.
    Graciosa: todo estado alcanzable tiene una continuación que satisface φW.
    """
    estados, transiciones, iniciales = _product(game, strategy)
    base = ELAutomaton(len(estados), tuple(transiciones), negate(game.strong))

    malos = nonempty_states(base)
    contraejemplo = None
    for q in iniciales:
        if q in malos:
            lasso = witness_lasso(base, q)
            contraejemplo = _lasso_nodes(estados, lasso.stem, lasso.loop)
            break

    debil = base.with_acceptance(game.weak)
    buenos = nonempty_states(debil)
    atascado = next((estados[q] for q in range(len(estados)) if q not in buenos), None)

    reporte = VerificationReport(
        strong_ok=contraejemplo is None,
        gracious_ok=atascado is None,
        reachable_memory_count=len({m for _, m in estados}),
        product_states=len(estados),
        counterexample=contraejemplo,
        stuck_state=atascado,
    )
    logger.info(f"Verificación: fuerte={reporte.strong_ok}, graciosa={reporte.gracious_ok}, "
                f"{reporte.product_states} estados de producto")
    return reporte


def verify_strong(game: ObligingGame, strategy: GraciousStrategy) -> Tuple[bool, Optional[Lasso]]:
    reporte = verify_strategy(game, strategy)
    return reporte.strong_ok, reporte.counterexample


def verify_gracious(game: ObligingGame, strategy: GraciousStrategy) -> Tuple[bool, Optional[ProductState]]:
    reporte = verify_strategy(game, strategy)
    return reporte.gracious_ok, reporte.stuck_state


# Cotas de memoria

def memory_bound(game: ObligingGame) -> int:
    """n·certLen·d! memorias (ancla, π, posición)."""
    return game.n * cert_len(game) * math.factorial(game.d)


def compressed_memory_bound(game: ObligingGame) -> int:
    """n·(2d+k)·d! memorias (ancla, π, ocurrencia).

    Con S = ∅ la fórmula se anula: un nodo aparece una vez en el stem y a lo
    sumo max(1, k) veces en el lazo.
    """
    if game.d == 0:
        return game.n * max(2, game.k + 1)
    return game.n * (2 * game.d + game.k) * math.factorial(game.d)


def compressed_memory_count(strategy: GraciousStrategy) -> int:
    """Memorias distintas si la posición se reemplaza por el número de ocurrencia del nodo actual."""
    comprimidas = set()
    for memoria in strategy.memories():
        if not isinstance(memoria, Memory):
            raise StrategyError("la compresión requiere memorias estructuradas")
        secuencia = strategy.certificates[(memoria.anchor, memoria.perm)].sequence
        actual = secuencia[memoria.pos]
        ocurrencia = secuencia[:memoria.pos + 1].count(actual)
        comprimidas.add((memoria.anchor, memoria.perm, ocurrencia))
    return len(comprimidas)


# Formato de texto

def _memory_label(memory: Hashable, game: ObligingGame) -> str:
    etiqueta = memory.label(game) if isinstance(memory, Memory) else str(memory)
    if not etiqueta or any(c.isspace() for c in etiqueta):
        raise StrategyError(f"etiqueta de memoria inválida: {etiqueta!r}")
    return etiqueta


def serialize_strategy(strategy: GraciousStrategy, game: ObligingGame) -> str:
    """Texto `oblige-strategy 1` con líneas initial/move/update ordenadas."""
    nombre = game.node_names
    lineas = [f"{STRATEGY_FORMAT_HEADER} {STRATEGY_FORMAT_VERSION}"]
    for v, m in sorted(strategy.initial.items(), key=lambda i: i[0]):
        lineas.append(f"initial {nombre[v]} {_memory_label(m, game)}")
    movidas = sorted((nombre[x], _memory_label(m, game), nombre[y]) for (x, m), y in strategy.move.items())
    lineas.extend(f"move {x} {m} {y}" for x, m, y in movidas)
    cambios = sorted((_memory_label(m, game), nombre[x], nombre[y], _memory_label(n, game))
                     for (m, x, y), n in strategy.update.items())
    lineas.extend(f"update {m} {x} {y} {n}" for m, x, y, n in cambios)
    return "\n".join(lineas) + "\n"


def parse_strategy(text: str, game: ObligingGame) -> GraciousStrategy:
    """Leer una estrategia en formato de texto; las memorias quedan como etiquetas.

    Raises:
        GameParseError: Encabezado incorrecto, línea desconocida o nodo desconocido.
    """
    lineas = text.splitlines()
    encabezado = f"{STRATEGY_FORMAT_HEADER} {STRATEGY_FORMAT_VERSION}"
    if not lineas or lineas[0].strip() != encabezado:
        raise GameParseError(f"se esperaba el encabezado '{encabezado}'", 1, 1)

    def nodo(nombre: str, numero: int) -> int:
        try:
            return game.node_index(nombre)
        except StructuralError:
            raise GameParseError(f"unknown node: {nombre}", numero) from None

    inicial, movidas, cambios = {}, {}, {}
    for numero, linea in enumerate(lineas[1:], start=2):
        partes = linea.split("#", 1)[0].split()
        if not partes:
            continue
        clave, argumentos = partes[0], partes[1:]
        if clave == "initial" and len(argumentos) == 2:
            inicial[nodo(argumentos[0], numero)] = argumentos[1]
        elif clave == "move" and len(argumentos) == 3:
            movidas[(nodo(argumentos[0], numero), argumentos[1])] = nodo(argumentos[2], numero)
        elif clave == "update" and len(argumentos) == 4:
            cambios[(argumentos[0], nodo(argumentos[1], numero), nodo(argumentos[2], numero))] = argumentos[3]
        else:
            raise GameParseError(f"línea de estrategia no reconocida: {linea.strip()}", numero, 1)
    if not inicial:
        raise GameParseError("la estrategia no declara memorias iniciales")
    return GraciousStrategy(inicial, movidas, cambios)

"""
Registro de última aparición (LAR) perezoso y juegos de paridad.

Este módulo contiene las permutaciones de colores con su actualización
perezosa, la asignación de prioridades, la paritización explícita de juegos
Emerson-Lei y un resolvedor de Zielonka para paridad máxima.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations as _permutations
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from utils.errors import FormulaError, StructuralError
from utils.game_model import Arena, ELFormula, Owner, eval_on_infinity_set, formula_colors

# Configurar logging
logger = logging.getLogger(__name__)

Permutation = Tuple[int, ...]


def initial_permutation(colors: Iterable[int]) -> Permutation:
    """Permutación inicial: orden de declaración de los colores."""
    return tuple(sorted(set(colors)))


def all_permutations(colors: Iterable[int]) -> List[Permutation]:
    return list(_permutations(initial_permutation(colors)))


def rightmost_position(perm: Permutation, colors: Iterable[int]) -> int:
    """Posición (1-indexada) más a la derecha de π tocada por los colores; 0 si ninguna."""
    tocados = set(colors)
    for i in range(len(perm), 0, -1):
        if perm[i - 1] in tocados:
            return i
    return 0


def shift(perm: Permutation, colors: Iterable[int]) -> Permutation:
    """π@D: mover al frente el elemento de D más a la derecha en π."""
    p = rightmost_position(perm, colors)
    if p == 0:
        return perm
    return (perm[p - 1],) + perm[:p - 1] + perm[p:]


def prefix_set(perm: Permutation, i: int) -> FrozenSet[int]:
    """π[i]: colores de las primeras i posiciones."""
    return frozenset(perm[:i])


def priority_for_position(perm: Permutation, p: int, formula: ELFormula) -> int:
    return 2 * p if eval_on_infinity_set(formula, prefix_set(perm, p)) else 2 * p + 1


def priority_of(perm: Permutation, colors: Iterable[int], formula: ELFormula) -> int:
    """2p si π[p] satisface φ, 2p+1 si no; p es la posición más a la derecha tocada."""
    return priority_for_position(perm, rightmost_position(perm, colors), formula)


@dataclass(frozen=True)
class ParityEdge:
    source: int
    target: int
    priority: int


@dataclass(frozen=True)
class ParityGame:
    """Juego de paridad máxima con prioridades en las aristas (par gana ∃)."""
    owners: Tuple[Owner, ...]
    edges: Tuple[ParityEdge, ...]
    labels: Tuple[Hashable, ...] = ()
    _out: Tuple[Tuple[ParityEdge, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        salientes: List[List[ParityEdge]] = [[] for _ in self.owners]
        for e in self.edges:
            if not (0 <= e.source < len(self.owners) and 0 <= e.target < len(self.owners)):
                raise StructuralError(f"arista de paridad fuera de rango ({e.source},{e.target})")
            if e.priority < 0:
                raise StructuralError(f"prioridad negativa en ({e.source},{e.target})")
            salientes[e.source].append(e)
        for v, lista in enumerate(salientes):
            if not lista:
                raise StructuralError(f"node has no successor: {v}")
        object.__setattr__(self, "_out", tuple(tuple(l) for l in salientes))

    @property
    def node_count(self) -> int:
        return len(self.owners)

    def out_edges(self, v: int) -> Tuple[ParityEdge, ...]:
        return self._out[v]

    def max_priority(self) -> int:
        return max(e.priority for e in self.edges)

    def index_of(self, label: Hashable) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class ParitySolution:
    winning_exists: FrozenSet[int]
    winning_forall: FrozenSet[int]
    strategy: Dict[int, ParityEdge]

    def winner(self, v: int) -> Owner:
        return Owner.EXISTS if v in self.winning_exists else Owner.FORALL


def paritize(arena: Arena, formula: ELFormula, colors: Sequence[int],
             initial: Optional[Permutation] = None) -> ParityGame:
    """Producto explícito arena × LAR alcanzable desde {(v, π_init)}.

    Args:
        arena: Arena con colores en las aristas.
        formula: Objetivo Emerson-Lei de ∃.
        colors: Colores del registro; deben incluir los de la fórmula.
        initial: Permutación inicial (por defecto, orden de declaración).

    Returns:
        Juego de paridad con etiquetas (v, π) en orden BFS.
    """
    universo = frozenset(colors)
    if not formula_colors(formula) <= universo:
        raise FormulaError("la fórmula usa colores fuera del registro")
    inicial = initial_permutation(universo) if initial is None else tuple(initial)
    if set(inicial) != universo:
        raise FormulaError("la permutación inicial no es una biyección sobre los colores")

    indice: Dict[Tuple[int, Permutation], int] = {}
    etiquetas: List[Tuple[int, Permutation]] = []
    cola = deque()

    def visitar(estado):
        if estado not in indice:
            indice[estado] = len(etiquetas)
            etiquetas.append(estado)
            cola.append(estado)
        return indice[estado]

    for v in arena.nodes:
        visitar((v, inicial))
    aristas = []
    while cola:
        v, perm = cola.popleft()
        origen = indice[(v, perm)]
        for w in arena.successors(v):
            tocados = arena.edge_colors(v, w) & universo
            destino = visitar((w, shift(perm, tocados)))
            aristas.append(ParityEdge(origen, destino, priority_of(perm, tocados, formula)))

    duenos = tuple(arena.owners[v] for v, _ in etiquetas)
    logger.debug(f"Paritización con {len(etiquetas)} nodos y {len(aristas)} aristas")
    return ParityGame(duenos, tuple(aristas), tuple(etiquetas))


class _NodeGame:
    """Juego con prioridades en nodos: un nodo intermedio por arista."""

    def __init__(self, pg: ParityGame):
        n = pg.node_count
        self.edge_of_mid: Dict[int, ParityEdge] = {}
        self.owner = [0 if o is Owner.EXISTS else 1 for o in pg.owners]
        self.priority = [0] * n
        self.succ: List[List[int]] = [[] for _ in range(n)]
        self.pred: List[List[int]] = [[] for _ in range(n)]
        for e in pg.edges:
            m = len(self.owner)
            self.owner.append(0)
            self.priority.append(e.priority)
            self.succ.append([e.target])
            self.pred.append([e.source])
            self.succ[e.source].append(m)
            self.pred[e.target].append(m)
            self.edge_of_mid[m] = e

    def attractor(self, current: Set[int], target: Set[int], player: int) -> Tuple[Set[int], Dict[int, int]]:
        atraidos = set(target)
        estrategia: Dict[int, int] = {}
        restantes: Dict[int, int] = {}
        cola = deque(atraidos)
        while cola:
            w = cola.popleft()
            for v in self.pred[w]:
                if v not in current or v in atraidos:
                    continue
                if self.owner[v] == player:
                    atraidos.add(v)
                    estrategia[v] = w
                    cola.append(v)
                else:
                    if v not in restantes:
                        restantes[v] = sum(1 for s in self.succ[v] if s in current)
                    restantes[v] -= 1
                    if restantes[v] == 0:
                        atraidos.add(v)
                        cola.append(v)
        return atraidos, estrategia

    def solve(self, nodes: Set[int]) -> Tuple[List[Set[int]], Dict[int, int]]:
        ganados: List[Set[int]] = [set(), set()]
        estrategia: Dict[int, int] = {}
        actual = set(nodes)
        while actual:
            p = max(self.priority[v] for v in actual)
            jugador = p % 2
            rival = 1 - jugador
            tope = {v for v in actual if self.priority[v] == p}
            atraidos, estr_a = self.attractor(actual, tope, jugador)
            sub_ganados, sub_estr = self.solve(actual - atraidos)
            if not sub_ganados[rival]:
                ganados[jugador] |= actual
                estrategia.update(sub_estr)
                estrategia.update(estr_a)
                for v in tope:
                    if self.owner[v] == jugador:
                        estrategia[v] = next(s for s in self.succ[v] if s in actual)
                break
            atraidos_r, estr_r = self.attractor(actual, sub_ganados[rival], rival)
            ganados[rival] |= atraidos_r
            for v in sub_ganados[rival]:
                if v in sub_estr:
                    estrategia[v] = sub_estr[v]
            estrategia.update(estr_r)
            actual -= atraidos_r
        return ganados, estrategia


def zielonka_solve(pg: ParityGame) -> ParitySolution:
    """Resolver un juego de paridad máxima (∃ gana con prioridad par).

    Returns:
        Regiones ganadoras de ambos jugadores y, para cada nodo, la arista
        que elige su dueño cuando gana allí.
    """
    juego = _NodeGame(pg)
    ganados, estrategia = juego.solve(set(range(len(juego.owner))))
    originales = range(pg.node_count)
    elegidas = {}
    for v in originales:
        dueno = juego.owner[v]
        if v in ganados[dueno] and v in estrategia:
            elegidas[v] = juego.edge_of_mid[estrategia[v]]
    solucion = ParitySolution(
        frozenset(v for v in originales if v in ganados[0]),
        frozenset(v for v in originales if v in ganados[1]),
        elegidas,
    )
    logger.debug(f"Zielonka: ∃ gana {len(solucion.winning_exists)} de {pg.node_count} nodos")
    return solucion


def solve_el_game(arena: Arena, formula: ELFormula, colors: Sequence[int],
                  initial: Optional[Permutation] = None) -> FrozenSet[int]:
    """Región ganadora de ∃ en V para un juego Emerson-Lei, vía paritización."""
    inicial = initial_permutation(colors) if initial is None else tuple(initial)
    pg = paritize(arena, formula, colors, inicial)
    solucion = zielonka_solve(pg)
    return frozenset(v for v in arena.nodes if pg.index_of((v, inicial)) in solucion.winning_exists)


def parity_game_to_text(pg: ParityGame) -> str:
    """Formato de depuración: un nodo por línea con dueño, etiqueta y aristas."""
    lineas = [f"parity {pg.node_count}"]
    for v in range(pg.node_count):
        etiqueta = f" {pg.labels[v]!r}" if pg.labels else ""
        aristas = " ".join(f"{e.target}:{e.priority}" for e in pg.out_edges(v))
        lineas.append(f"node {v} {pg.owners[v].value}{etiqueta} -> {aristas}")
    return "\n".join(lineas) + "\n"

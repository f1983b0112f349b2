"""
Chequeo de vacuidad para autómatas Emerson-Lei de una sola letra.

Este módulo contiene algoritmos especializados por clase de aceptación
(Büchi generalizado, Rabin, Streett, Rabin ∧ Streett), el algoritmo genérico
por enumeración de subconjuntos y la construcción de lassos testigo.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from config.default import GUARDS
from utils.errors import AcceptanceClassError, GuardExceededError, ObligeError, StructuralError
from utils.game_model import (
    Arena,
    ColorSet,
    Const,
    ELFormula,
    Fin,
    Inf,
    And,
    Or,
    eval_on_infinity_set,
    flatten_and,
    flatten_or,
)

# Configurar logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Transition:
    source: int
    target: int
    colors: ColorSet = frozenset()


@dataclass(frozen=True)
class ELAutomaton:
    """Autómata de una letra con aceptación Emerson-Lei.

    Entre dos estados hay a lo sumo una transición; los estados sin sucesores
    están permitidos y son vacíos.
    """
    state_count: int
    transitions: Tuple[Transition, ...]
    acceptance: ELFormula
    initial: Optional[int] = None
    labels: Tuple = ()
    _successors: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _colors: Dict[Tuple[int, int], ColorSet] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        colores = {}
        sucesores = [[] for _ in range(self.state_count)]
        for t in self.transitions:
            if not (0 <= t.source < self.state_count and 0 <= t.target < self.state_count):
                raise StructuralError(f"transición fuera de rango ({t.source},{t.target})")
            if (t.source, t.target) in colores:
                raise StructuralError(f"transición paralela ({t.source},{t.target})")
            colores[(t.source, t.target)] = t.colors
            sucesores[t.source].append(t.target)
        object.__setattr__(self, "_successors", tuple(tuple(sorted(s)) for s in sucesores))
        object.__setattr__(self, "_colors", colores)

    @classmethod
    def from_arena(cls, arena: Arena, acceptance: ELFormula) -> "ELAutomaton":
        """Leer la arena como autómata (los dueños se ignoran)."""
        return cls(arena.node_count,
                   tuple(Transition(e.source, e.target, e.colors) for e in arena.edges),
                   acceptance)

    def successors(self, q: int) -> Tuple[int, ...]:
        return self._successors[q]

    def edge_colors(self, q: int, r: int) -> ColorSet:
        try:
            return self._colors[(q, r)]
        except KeyError:
            raise StructuralError(f"no existe la transición ({q},{r})") from None

    def with_acceptance(self, acceptance: ELFormula) -> "ELAutomaton":
        return ELAutomaton(self.state_count, self.transitions, acceptance, self.initial, self.labels)


@dataclass(frozen=True)
class AcceptingLasso:
    """Corrida aceptante stem · loop^ω desde un estado consultado."""
    stem: Tuple[int, ...]
    loop: Tuple[int, ...]

    def infinity_set(self, aut: ELAutomaton) -> ColorSet:
        cerrado = self.loop + (self.loop[0],)
        colores = set()
        for q, r in zip(cerrado, cerrado[1:]):
            colores |= aut.edge_colors(q, r)
        return frozenset(colores)

    def states(self) -> Tuple[int, ...]:
        return self.stem + self.loop


# Pares de aceptación. En Streett, request None es ⊤ y response None es ⊥;
# en Rabin, fin None es ∅ y inf None es ⊤.

@dataclass(frozen=True)
class StreettPair:
    request: Optional[int]
    response: Optional[int]


@dataclass(frozen=True)
class RabinPair:
    fin: Optional[int]
    inf: Optional[int]


@dataclass(frozen=True)
class AcceptanceClass:
    kind: str
    required: Tuple[int, ...] = ()
    rabin_pairs: Tuple[RabinPair, ...] = ()
    streett_pairs: Tuple[StreettPair, ...] = ()


Component = Tuple[FrozenSet[int], Tuple[Transition, ...]]


def _streett_clause(formula: ELFormula) -> Optional[StreettPair]:
    if isinstance(formula, Inf):
        return StreettPair(None, formula.color)
    if isinstance(formula, Fin):
        return StreettPair(formula.color, None)
    if isinstance(formula, Or):
        partes = flatten_or(formula)
        if len(partes) == 2:
            fins = [p for p in partes if isinstance(p, Fin)]
            infs = [p for p in partes if isinstance(p, Inf)]
            if len(fins) == 1 and len(infs) == 1:
                return StreettPair(fins[0].color, infs[0].color)
    return None


def _rabin_term(formula: ELFormula) -> Optional[RabinPair]:
    if isinstance(formula, Inf):
        return RabinPair(None, formula.color)
    if isinstance(formula, Fin):
        return RabinPair(formula.color, None)
    if isinstance(formula, And):
        partes = flatten_and(formula)
        if len(partes) == 2:
            fins = [p for p in partes if isinstance(p, Fin)]
            infs = [p for p in partes if isinstance(p, Inf)]
            if len(fins) == 1 and len(infs) == 1:
                return RabinPair(fins[0].color, infs[0].color)
    return None


def streett_pairs_of(formula: ELFormula) -> Optional[Tuple[StreettPair, ...]]:
    """Pares Streett si la fórmula es una conjunción de cláusulas (Fin|Inf)."""
    pares = []
    for conjunto in flatten_and(formula):
        if conjunto == Const(True):
            continue
        par = _streett_clause(conjunto)
        if par is None:
            return None
        pares.append(par)
    return tuple(pares)


def rabin_pairs_of(formula: ELFormula) -> Optional[Tuple[RabinPair, ...]]:
    """Pares Rabin si la fórmula es una disyunción de términos (Fin & Inf)."""
    if formula == Const(False):
        return ()
    pares = []
    for termino in flatten_or(formula):
        par = _rabin_term(termino)
        if par is None:
            return None
        pares.append(par)
    return tuple(pares)


def classify(formula: ELFormula) -> AcceptanceClass:
    """Clasificar estructuralmente la condición de aceptación."""
    conjuntos = flatten_and(formula)
    if Const(False) in conjuntos:
        return AcceptanceClass("generic")
    restantes = [c for c in conjuntos if c != Const(True)]
    if all(isinstance(c, Inf) for c in restantes):
        return AcceptanceClass("genbuchi", required=tuple(sorted({c.color for c in restantes})))
    pares = streett_pairs_of(formula)
    if pares is not None:
        return AcceptanceClass("streett", streett_pairs=pares)
    if len(restantes) == 1:
        rabin = rabin_pairs_of(restantes[0])
        if rabin is not None:
            return AcceptanceClass("rabin", rabin_pairs=rabin)
    no_streett = [c for c in restantes if _streett_clause(c) is None]
    if len(no_streett) == 1:
        rabin = rabin_pairs_of(no_streett[0])
        if rabin is not None:
            streett = tuple(_streett_clause(c) for c in restantes if c is not no_streett[0])
            return AcceptanceClass("rabin-streett", rabin_pairs=rabin, streett_pairs=streett)
    return AcceptanceClass("generic")


def _sccs(aut: ELAutomaton, transitions: Sequence[Transition]) -> List[Component]:
    """SCC no triviales (con alguna transición interna), ordenadas por menor estado."""
    grafo = nx.DiGraph()
    grafo.add_nodes_from({t.source for t in transitions} | {t.target for t in transitions})
    grafo.add_edges_from((t.source, t.target) for t in transitions)
    componentes = []
    for nodos in nx.strongly_connected_components(grafo):
        internas = tuple(t for t in transitions if t.source in nodos and t.target in nodos)
        if internas:
            componentes.append((frozenset(nodos), internas))
    componentes.sort(key=lambda c: min(c[0]))
    return componentes


def _union(transitions: Iterable[Transition]) -> ColorSet:
    colores = set()
    for t in transitions:
        colores |= t.colors
    return frozenset(colores)


def gen_buchi_components(aut: ELAutomaton, required: Iterable[int]) -> List[Component]:
    requeridos = frozenset(required)
    return [c for c in _sccs(aut, aut.transitions) if requeridos <= _union(c[1])]


def rabin_components(aut: ELAutomaton, pairs: Sequence[RabinPair]) -> List[Component]:
    buenas = []
    for par in pairs:
        permitidas = [t for t in aut.transitions if par.fin is None or par.fin not in t.colors]
        for nodos, internas in _sccs(aut, permitidas):
            if par.inf is None or any(par.inf in t.colors for t in internas):
                buenas.append((nodos, internas))
    return buenas


def streett_components(aut: ELAutomaton, pairs: Sequence[StreettPair],
                       transitions: Optional[Sequence[Transition]] = None) -> List[Component]:
    """Restricción iterativa de SCC: se borran las transiciones con peticiones incumplidas."""
    buenas = []
    pendientes = [tuple(aut.transitions if transitions is None else transitions)]
    while pendientes:
        actuales = pendientes.pop()
        for nodos, internas in _sccs(aut, actuales):
            colores = _union(internas)
            violados = [p for p in pairs
                        if (p.request is None or p.request in colores)
                        and (p.response is None or p.response not in colores)]
            if not violados:
                buenas.append((nodos, internas))
                continue
            if any(p.request is None for p in violados):
                continue
            prohibidos = {p.request for p in violados}
            restantes = tuple(t for t in internas if not (t.colors & prohibidos))
            if restantes:
                pendientes.append(restantes)
    buenas.sort(key=lambda c: min(c[0]))
    return buenas


def rabin_streett_components(aut: ELAutomaton, rabin: Sequence[RabinPair],
                             streett: Sequence[StreettPair]) -> List[Component]:
    """Para cada par Rabin (E, F) se agregan los pares Streett (⊤, F) y (E, ⊥)."""
    buenas = []
    for par in rabin:
        extra = []
        if par.inf is not None:
            extra.append(StreettPair(None, par.inf))
        if par.fin is not None:
            extra.append(StreettPair(par.fin, None))
        buenas.extend(streett_components(aut, tuple(streett) + tuple(extra)))
    return buenas


def generic_components(aut: ELAutomaton, formula: Optional[ELFormula] = None,
                       max_colors: int = GUARDS["generic_max_colors"]) -> List[Component]:
    """Enumerar subconjuntos I ⊆ U por SCC buscando una sub-SCC con colores exactamente I."""
    formula = aut.acceptance if formula is None else formula
    buenas = []
    for nodos, internas in _sccs(aut, aut.transitions):
        universo = sorted(_union(internas))
        if len(universo) > max_colors:
            raise GuardExceededError("generic_max_colors", len(universo), max_colors)
        encontrada = None
        for tam in range(len(universo), -1, -1):
            for subconjunto in combinations(universo, tam):
                conjunto = frozenset(subconjunto)
                if not eval_on_infinity_set(formula, conjunto):
                    continue
                restringidas = [t for t in internas if t.colors <= conjunto]
                for sub in _sccs(aut, restringidas):
                    if _union(sub[1]) == conjunto:
                        encontrada = sub
                        break
                if encontrada:
                    break
            if encontrada:
                break
        if encontrada:
            buenas.append(encontrada)
    return buenas


def accepting_components(aut: ELAutomaton) -> List[Component]:
    """Componentes cuyo recorrido completo es aceptante, según la clase de aceptación."""
    clase = classify(aut.acceptance)
    if clase.kind == "genbuchi":
        return gen_buchi_components(aut, clase.required)
    if clase.kind == "streett":
        return streett_components(aut, clase.streett_pairs)
    if clase.kind == "rabin":
        return rabin_components(aut, clase.rabin_pairs)
    if clase.kind == "rabin-streett":
        return rabin_streett_components(aut, clase.rabin_pairs, clase.streett_pairs)
    return generic_components(aut)


def _backward_closure(aut: ELAutomaton, targets: Iterable[int]) -> FrozenSet[int]:
    predecesores: Dict[int, List[int]] = {}
    for t in aut.transitions:
        predecesores.setdefault(t.target, []).append(t.source)
    region = set(targets)
    cola = deque(region)
    while cola:
        q = cola.popleft()
        for p in predecesores.get(q, ()):
            if p not in region:
                region.add(p)
                cola.append(p)
    return frozenset(region)


def components_region(aut: ELAutomaton, components: List[Component]) -> FrozenSet[int]:
    return _backward_closure(aut, {q for nodos, _ in components for q in nodos})


def nonempty_states(aut: ELAutomaton) -> FrozenSet[int]:
    """Estados desde los que existe una corrida aceptante."""
    return components_region(aut, accepting_components(aut))


def gen_buchi_region(aut: ELAutomaton) -> FrozenSet[int]:
    clase = classify(aut.acceptance)
    if clase.kind != "genbuchi":
        raise AcceptanceClassError(f"la aceptación no es Büchi generalizada ({clase.kind})")
    return components_region(aut, gen_buchi_components(aut, clase.required))


def rabin_region(aut: ELAutomaton) -> FrozenSet[int]:
    pares = rabin_pairs_of(aut.acceptance)
    if pares is None:
        raise AcceptanceClassError("la aceptación no es una condición Rabin")
    return components_region(aut, rabin_components(aut, pares))


def streett_region(aut: ELAutomaton) -> FrozenSet[int]:
    pares = streett_pairs_of(aut.acceptance)
    if pares is None:
        raise AcceptanceClassError("la aceptación no es una condición Streett")
    return components_region(aut, streett_components(aut, pares))


def generic_region(aut: ELAutomaton) -> FrozenSet[int]:
    return components_region(aut, generic_components(aut))


def is_empty_gen_buchi(aut: ELAutomaton) -> bool:
    return not gen_buchi_region(aut)


def is_empty_rabin(aut: ELAutomaton) -> bool:
    return not rabin_region(aut)


def is_empty_streett(aut: ELAutomaton) -> bool:
    return not streett_region(aut)


def is_empty_rabin_and_streett(aut: ELAutomaton, rabin: Sequence[RabinPair],
                               streett: Sequence[StreettPair]) -> bool:
    """Vacuidad de Rabin ∧ Streett; sin pares Rabin la disyunción es vacía."""
    return not rabin_streett_components(aut, rabin, streett)


def is_empty_generic(aut: ELAutomaton) -> bool:
    return not generic_components(aut)


# Recorridos

def _bfs(adj: Dict[int, List[Tuple[int, ColorSet]]], start: int,
         seed_successors: bool = False) -> Tuple[Dict[int, Optional[int]], Dict[int, int]]:
    padre: Dict[int, Optional[int]] = {}
    dist: Dict[int, int] = {}
    cola = deque()
    if seed_successors:
        for w, _ in adj.get(start, ()):
            if w not in padre:
                padre[w] = start
                dist[w] = 1
                cola.append(w)
    else:
        padre[start] = None
        dist[start] = 0
        cola.append(start)
    while cola:
        x = cola.popleft()
        for y, _ in adj.get(x, ()):
            if y not in padre:
                padre[y] = x
                dist[y] = dist[x] + 1
                cola.append(y)
    return padre, dist


def _path_to(padre: Dict[int, Optional[int]], start: int, target: int,
             seeded: bool = False) -> List[int]:
    camino = [target]
    actual = target
    while True:
        previo = padre[actual]
        if previo is None:
            break
        camino.append(previo)
        if seeded and previo == start:
            break
        actual = previo
        if not seeded and actual == start:
            break
    camino.reverse()
    return camino


def color_tour(edges: Iterable[Tuple[int, int, ColorSet]], start: int,
               required: Sequence[int]) -> List[int]:
    """Recorrido cerrado desde `start` que visita uno a uno los colores pedidos.

    Cada color se alcanza por un camino BFS más corto (desempate por menor
    índice) dentro del subgrafo fuertemente conexo dado; los colores ya vistos
    en el recorrido se saltan. El resultado empieza y termina en `start` y
    tiene al menos una arista.
    """
    adj: Dict[int, List[Tuple[int, ColorSet]]] = {}
    for s, t, c in edges:
        adj.setdefault(s, []).append((t, c))
    for lista in adj.values():
        lista.sort(key=lambda e: e[0])
    colores_de = {(s, t): c for s in adj for t, c in adj[s]}

    recorrido = [start]
    vistos = set()
    actual = start
    for color in required:
        if color in vistos:
            continue
        padre, dist = _bfs(adj, actual)
        mejor = None
        for x in sorted(dist, key=lambda q: (dist[q], q)):
            for y, c in adj.get(x, ()):
                if color in c:
                    mejor = (x, y)
                    break
            if mejor:
                break
        if mejor is None:
            raise StructuralError(f"el color {color} no es alcanzable en la componente")
        camino = _path_to(padre, actual, mejor[0]) + [mejor[1]]
        for a, b in zip(camino, camino[1:]):
            vistos |= colores_de[(a, b)]
        recorrido.extend(camino[1:])
        actual = mejor[1]

    if actual != start or len(recorrido) == 1:
        padre, _ = _bfs(adj, actual, seed_successors=True)
        if start not in padre:
            raise StructuralError("la componente no es fuertemente conexa")
        camino = _path_to(padre, actual, start, seeded=True)
        recorrido.extend(camino[1:])
    return recorrido


def _component_witness(aut: ELAutomaton, component: Component, entry: int) -> Tuple[int, ...]:
    _, internas = component
    colores = sorted(_union(internas))
    recorrido = color_tour(((t.source, t.target, t.colors) for t in internas), entry, colores)
    return tuple(recorrido[:-1])


def witness_lasso(aut: ELAutomaton, state: int,
                  components: Optional[List[Component]] = None) -> AcceptingLasso:
    """Lasso aceptante desde `state`.

    Args:
        aut: Autómata.
        state: Estado consultado; debe pertenecer a la región no vacía.
        components: Componentes aceptantes ya calculadas (opcional).

    Returns:
        Lasso cuyo lazo recorre todos los colores de una componente aceptante.
    """
    components = accepting_components(aut) if components is None else components
    dueno = {}
    for indice, (nodos, _) in enumerate(components):
        for q in nodos:
            dueno.setdefault(q, indice)
    if not dueno:
        raise ObligeError(f"el estado {state} no tiene corridas aceptantes")

    adj = {q: [(r, aut.edge_colors(q, r)) for r in aut.successors(q)] for q in range(aut.state_count)}
    padre, dist = _bfs(adj, state)
    alcanzados = [q for q in dist if q in dueno]
    if not alcanzados:
        raise ObligeError(f"el estado {state} no tiene corridas aceptantes")
    entrada = min(alcanzados, key=lambda q: (dist[q], q))
    stem = tuple(_path_to(padre, state, entrada)[:-1])
    loop = _component_witness(aut, components[dueno[entrada]], entrada)
    lasso = AcceptingLasso(stem, loop)
    if not eval_on_infinity_set(aut.acceptance, lasso.infinity_set(aut)):
        raise ObligeError("el lasso testigo no satisface la aceptación")
    return lasso


def automaton_to_text(aut: ELAutomaton, color_names: Optional[Sequence[str]] = None) -> str:
    """Formato de depuración: estados, transiciones con colores y aceptación."""
    from utils.game_model import format_formula
    nombres = list(color_names) if color_names else [f"c{i}" for i in range(
        max([max(t.colors, default=-1) for t in aut.transitions] + [-1]) + 1)]
    lineas = [f"states: {aut.state_count}"]
    if aut.initial is not None:
        lineas.append(f"initial: {aut.initial}")
    for t in aut.transitions:
        lineas.append(f"trans {t.source} {t.target} {{{','.join(nombres[c] for c in sorted(t.colors))}}}")
    try:
        lineas.append(f"acceptance: {format_formula(aut.acceptance, nombres)}")
    except IndexError:
        lineas.append(f"acceptance: {aut.acceptance!r}")
    return "\n".join(lineas) + "\n"

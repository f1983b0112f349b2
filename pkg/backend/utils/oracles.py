"""
Oráculos independientes para validar el resolvedor por certificados.

- Reducción previa: autómata de Büchi que adivina y verifica φW, producto con
  sugerencias de ∃ en los nodos ∀, paritización y Zielonka.
- Juego de certificados explícito: enumera certificados acotados (módulo
  conjunto de salidas), construye C(G) y lo resuelve por paritización.
"""

import logging
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

from config.default import GUARDS
from utils.certificates import Certificate, Exit, loop_bound as default_loop_bound, stem_bound as default_stem_bound
from utils.errors import GuardExceededError
from utils.game_model import (
    Arena,
    ColorSet,
    ELFormula,
    Inf,
    ObligingGame,
    Or,
    And,
    Owner,
    eval_on_infinity_set,
)
from utils.lar_parity import Permutation, priority_of, shift, solve_el_game

# Configurar logging
logger = logging.getLogger(__name__)

WAIT = "wait"


class WeakObjectiveAutomaton:
    """Büchi no determinista para φW: espera, adivina I ⊨ φW y verifica que todo color de I se repita.

    Los estados son `wait` y (I, ptr); el puntero recorre I y al completarlo
    la transición es aceptante.
    """

    def __init__(self, weak: ELFormula, weak_colors: Sequence[int]):
        self.subsets: List[Tuple[int, ...]] = []
        colores = sorted(weak_colors)
        for tam in range(len(colores) + 1):
            for subconjunto in combinations(colores, tam):
                if eval_on_infinity_set(weak, subconjunto):
                    self.subsets.append(subconjunto)
        self.states: List[Hashable] = [WAIT]
        for subconjunto in self.subsets:
            for ptr in range(max(len(subconjunto), 1)):
                self.states.append((subconjunto, ptr))
        self.weak_colors = frozenset(colores)

    def step(self, state: Hashable, letter: ColorSet) -> List[Tuple[Hashable, bool]]:
        """Sucesores (estado, aceptante) al leer el conjunto de colores débiles `letter`."""
        if state == WAIT:
            return [(WAIT, False)] + [((i, 0), False) for i in self.subsets]
        subconjunto, ptr = state
        if not letter <= frozenset(subconjunto):
            return []
        while ptr < len(subconjunto) and subconjunto[ptr] in letter:
            ptr += 1
        if ptr >= len(subconjunto):
            return [((subconjunto, 0), True)]
        return [((subconjunto, ptr), False)]


def prior_reduction_arena(game: ObligingGame) -> Tuple[Arena, Dict[Hashable, int], int]:
    """Juego producto de la reducción previa.

    Returns:
        Arena producto, índice de cada nodo del producto y el color fresco.
    """
    arena = game.arena
    automata = WeakObjectiveAutomaton(game.weak, game.weak_colors)
    fresco = len(game.color_names)
    debiles = frozenset(game.weak_colors)

    indice: Dict[Hashable, int] = {}
    duenos: List[Owner] = []
    aristas: List[Tuple[int, int, ColorSet]] = []
    cola = deque()

    def nodo(clave: Hashable, dueno: Owner) -> int:
        if clave not in indice:
            indice[clave] = len(duenos)
            duenos.append(dueno)
            cola.append(clave)
        return indice[clave]

    perdedor = nodo(("lose",), Owner.EXISTS)
    for v in arena.nodes:
        nodo((v, WAIT), Owner.EXISTS)
    while cola:
        clave = cola.popleft()
        origen = indice[clave]
        if clave == ("lose",):
            aristas.append((origen, origen, frozenset()))
            continue
        if clave[0] == "resp":
            # ∀ sigue la sugerencia o se desvía y reinicia el autómata
            _, v, s, siguiente, aceptante = clave
            colores = arena.edge_colors(v, s) | ({fresco} if aceptante else set())
            aristas.append((origen, nodo((s, siguiente), Owner.EXISTS), frozenset(colores)))
            for w in arena.successors(v):
                if w != s:
                    aristas.append((origen, nodo((w, WAIT), Owner.EXISTS),
                                    arena.edge_colors(v, w) | {fresco}))
            continue
        v, estado = clave
        salidas = 0
        for w in arena.successors(v):
            for siguiente, aceptante in automata.step(estado, arena.edge_colors(v, w) & debiles):
                if arena.is_exists(v):
                    colores = arena.edge_colors(v, w) | ({fresco} if aceptante else set())
                    aristas.append((origen, nodo((w, siguiente), Owner.EXISTS), frozenset(colores)))
                else:
                    aristas.append((origen, nodo(("resp", v, w, siguiente, aceptante), Owner.FORALL),
                                    frozenset()))
                salidas += 1
        if not salidas:
            aristas.append((origen, perdedor, frozenset()))

    return Arena.from_edges(len(duenos), duenos, aristas), indice, fresco


def oracle_prior_reduction(game: ObligingGame,
                           max_weak_colors: int = GUARDS["prior_max_weak_colors"]) -> FrozenSet[int]:
    """Región ganadora graciosa vía el autómata de Büchi para φW y paritización."""
    if game.k > max_weak_colors:
        raise GuardExceededError("prior_max_weak_colors", game.k, max_weak_colors)
    producto, indice, fresco = prior_reduction_arena(game)
    objetivo = And(game.strong, Inf(fresco))
    colores = tuple(game.strong_colors) + (fresco,)
    ganadores = solve_el_game(producto, objetivo, colores)
    region = frozenset(v for v in game.arena.nodes if indice[(v, WAIT)] in ganadores)
    logger.info(f"Reducción previa: {producto.node_count} nodos en el producto, {len(region)} ganadores")
    return region


# Juego de certificados explícito

@dataclass(frozen=True)
class CertificateCatalog:
    """Certificados canónicos por nodo, uno por conjunto de salidas."""
    entries: Dict[int, Dict[FrozenSet[Exit], Certificate]]
    explored_states: int

    def exit_sets(self, v: int) -> List[FrozenSet[Exit]]:
        return list(self.entries.get(v, {}))


def certificate_catalog(game: ObligingGame, stem_bound: Optional[int] = None,
                        loop_bound: Optional[int] = None,
                        cert_budget: int = GUARDS["cert_budget"]) -> CertificateCatalog:
    """Enumerar conjuntos de salidas de certificados válidos y canónicos dentro de las cotas.

    Un certificado es canónico si su huella S al entrar al lazo ya es la
    final; dos prefijos con igual estado de búsqueda tienen las mismas
    continuaciones, así que basta uno por estado.

    Raises:
        GuardExceededError: Si se exploran más de `cert_budget` estados.
    """
    arena = game.arena
    tope_stem = default_stem_bound(game) if stem_bound is None else stem_bound
    tope_loop = default_loop_bound(game) if loop_bound is None else loop_bound
    fuertes = frozenset(game.strong_colors)

    def salidas_en(v: int, huella: ColorSet) -> FrozenSet[Exit]:
        if arena.is_exists(v):
            return frozenset()
        return frozenset((w, huella | (arena.edge_colors(v, w) & fuertes)) for w in arena.successors(v))

    explorados = 0
    entradas: Dict[int, Dict[FrozenSet[Exit], Certificate]] = {}
    for v in arena.nodes:
        encontrados: Dict[FrozenSet[Exit], Certificate] = {}
        inicio = ("s", v, frozenset(), salidas_en(v, frozenset()))
        padre = {inicio: None}
        largo = {inicio: (1, 0)}
        cola = deque([inicio])
        while cola:
            estado = cola.popleft()
            explorados += 1
            if explorados > cert_budget:
                raise GuardExceededError("cert_budget", explorados, cert_budget)
            n_stem, n_loop = largo[estado]
            sucesores = []
            if estado[0] == "s":
                _, actual, huella, salidas = estado
                for w in arena.successors(actual):
                    nueva = huella | (arena.edge_colors(actual, w) & fuertes)
                    extra = salidas | salidas_en(w, nueva)
                    if n_stem + 1 <= tope_stem:
                        sucesores.append((("s", w, nueva, extra), (n_stem + 1, 0)))
                    if tope_loop >= 1:
                        sucesores.append((("l", w, nueva, extra, w, frozenset()), (n_stem, 1)))
            else:
                _, actual, huella, salidas, inicio_lazo, colores = estado
                cierre = arena.edge_colors(actual, inicio_lazo) if arena.has_edge(actual, inicio_lazo) else None
                if cierre is not None and (cierre & fuertes) <= huella:
                    infinitos = colores | cierre
                    if (eval_on_infinity_set(game.strong, infinitos)
                            and eval_on_infinity_set(game.weak, infinitos)
                            and salidas not in encontrados):
                        encontrados[salidas] = _rebuild(padre, estado)
                for w in arena.successors(actual):
                    tocados = arena.edge_colors(actual, w)
                    if not (tocados & fuertes) <= huella or n_loop + 1 > tope_loop:
                        continue
                    extra = salidas | salidas_en(w, huella)
                    sucesores.append((("l", w, huella, extra, inicio_lazo, colores | tocados),
                                      (n_stem, n_loop + 1)))
            for sucesor, longitudes in sucesores:
                if sucesor not in padre:
                    padre[sucesor] = estado
                    largo[sucesor] = longitudes
                    cola.append(sucesor)
        entradas[v] = encontrados
    logger.debug(f"Catálogo explícito: {explorados} estados explorados")
    return CertificateCatalog(entradas, explorados)


def _rebuild(padre: Dict, estado) -> Certificate:
    stem: List[int] = []
    loop: List[int] = []
    while estado is not None:
        (loop if estado[0] == "l" else stem).append(estado[1])
        estado = padre[estado]
    return Certificate(tuple(reversed(stem)), tuple(reversed(loop)))


def _prune_catalog(game: ObligingGame, catalog: CertificateCatalog) -> Dict[int, List[FrozenSet[Exit]]]:
    """Quitar nodos sin certificados y certificados con salidas hacia nodos quitados."""
    vivos = {v: catalog.exit_sets(v) for v in game.arena.nodes}
    while True:
        sin_cert = {v for v, lista in vivos.items() if not lista}
        depurado = {v: [s for s in lista if all(w not in sin_cert for w, _ in s)]
                    for v, lista in vivos.items() if v not in sin_cert}
        if depurado == vivos:
            return vivos
        vivos = depurado


def certificate_game_arena(game: ObligingGame, exit_sets: Dict[int, List[FrozenSet[Exit]]]
                           ) -> Tuple[Arena, Dict[int, int], int]:
    """Arena Emerson-Lei de C(G): v → certificado → (w, F) → w; lazo c⊤ en cada certificado."""
    tope = len(game.color_names)
    indice: Dict[Hashable, int] = {}
    duenos: List[Owner] = []
    aristas: List[Tuple[int, int, ColorSet]] = []

    def nodo(clave: Hashable, dueno: Owner) -> int:
        if clave not in indice:
            indice[clave] = len(duenos)
            duenos.append(dueno)
        return indice[clave]

    for v in sorted(exit_sets):
        nodo(("v", v), Owner.EXISTS)
    for v in sorted(exit_sets):
        for salidas in exit_sets[v]:
            c = nodo(("c", v, salidas), Owner.FORALL)
            aristas.append((indice[("v", v)], c, frozenset()))
            aristas.append((c, c, frozenset({tope})))
            for w, huella in salidas:
                m = nodo(("m", w, huella), Owner.FORALL)
                aristas.append((c, m, huella))
                aristas.append((m, indice[("v", w)], frozenset()))
    nodos_reales = {v: indice[("v", v)] for v in exit_sets}
    return Arena.from_edges(len(duenos), duenos, aristas), nodos_reales, tope


def oracle_explicit_certificate_game(game: ObligingGame, stem_bound: Optional[int] = None,
                                     loop_bound: Optional[int] = None,
                                     cert_budget: int = GUARDS["cert_budget"]) -> FrozenSet[int]:
    """Región ganadora construyendo y paritizando el juego de certificados explícito."""
    catalogo = certificate_catalog(game, stem_bound, loop_bound, cert_budget)
    vivos = _prune_catalog(game, catalogo)
    if not vivos:
        return frozenset()
    arena_c, reales, tope = certificate_game_arena(game, vivos)
    objetivo = Or(Inf(tope), game.strong)
    colores = tuple(game.strong_colors) + (tope,)
    ganadores = solve_el_game(arena_c, objetivo, colores)
    region = frozenset(v for v, i in reales.items() if i in ganadores)
    logger.info(f"Juego de certificados explícito: {arena_c.node_count} nodos, {len(region)} ganadores")
    return region


def explicit_dag_attractor(game: ObligingGame, perm: Permutation,
                           vbar: Sequence[FrozenSet[Tuple[int, Permutation]]],
                           catalog: CertificateCatalog) -> FrozenSet[int]:
    """Atractor DAG calculado sobre el catálogo: algún certificado con todas sus salidas seguras."""
    perm = tuple(perm)
    atraidos = set()
    for v in game.arena.nodes:
        for salidas in catalog.exit_sets(v):
            if all((w, shift(perm, huella)) in vbar[priority_of(perm, huella, game.strong)]
                   for w, huella in salidas):
                atraidos.add(v)
                break
    return frozenset(atraidos)

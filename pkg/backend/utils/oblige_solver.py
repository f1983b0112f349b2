"""
Resolvedor de juegos obligantes basado en certificados.

Calcula el punto fijo anidado de paridad sobre los nodos reales (v, π) usando
atractores DAG, que se deciden con chequeos de vacuidad Emerson-Lei por
permutación. Al estabilizar, elige un certificado por nodo real ganador
resolviendo el juego finito de certificados candidatos.
"""

import logging
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from config.default import DEFAULT_ENGINE, GUARDS
from utils.certificates import Certificate, certificate_exits, extract_certificate
from utils.el_emptiness import (
    ELAutomaton,
    Transition,
    accepting_components,
    components_region,
    nonempty_states,
    witness_lasso,
)
from utils.errors import GuardExceededError, SolverConsistencyError, StructuralError
from utils.game_model import And, Lasso, ObligingGame, Owner
from utils.lar_parity import (
    ParityEdge,
    ParityGame,
    Permutation,
    all_permutations,
    initial_permutation,
    priority_for_position,
    priority_of,
    rightmost_position,
    shift,
    zielonka_solve,
)

# Configurar logging
logger = logging.getLogger(__name__)

RealNode = Tuple[int, Permutation]
Vertex = Tuple[int, int]


def _shift_to_position(perm: Permutation, p: int) -> Permutation:
    # memoria de salida cuando la huella tiene posición más a la derecha p
    return perm if p == 0 else (perm[p - 1],) + perm[:p - 1] + perm[p:]


def _exit_table(game: ObligingGame, perm: Permutation) -> Tuple[Tuple[int, ...], Tuple[Permutation, ...]]:
    """Prioridad y permutación de destino de una salida, por posición 0..d."""
    rango = range(game.d + 1)
    return (tuple(priority_for_position(perm, p, game.strong) for p in rango),
            tuple(_shift_to_position(perm, p) for p in rango))


def _safe_masks(game: ObligingGame, table: Tuple[Tuple[int, ...], Tuple[Permutation, ...]],
                vbar: Sequence[FrozenSet[RealNode]]) -> Tuple[FrozenSet[int], ...]:
    prios, destinos = table
    return tuple(
        frozenset(w for w in game.arena.nodes if (w, destinos[p]) in vbar[prios[p]])
        for p in range(game.d + 1))


@dataclass(frozen=True)
class FingerprintGraph:
    """Grafo M de vértices (v, p): p es la posición más a la derecha de la huella en π."""
    game: ObligingGame = field(repr=False)
    perm: Permutation
    edge_position: Dict[Tuple[int, int], int] = field(repr=False, compare=False)

    @classmethod
    def build(cls, game: ObligingGame, perm: Permutation) -> "FingerprintGraph":
        posiciones = {}
        for e in game.arena.edges:
            posiciones[(e.source, e.target)] = rightmost_position(perm, game.strong_part(e.colors))
        return cls(game, tuple(perm), posiciones)

    @property
    def d(self) -> int:
        return len(self.perm)

    def vertices(self) -> List[Vertex]:
        return [(v, p) for v in self.game.arena.nodes for p in range(self.d + 1)]

    def successors(self, vertex: Vertex) -> List[Vertex]:
        v, p = vertex
        return [(w, max(p, self.edge_position[(v, w)])) for w in self.game.arena.successors(v)]


@dataclass
class AttractorResult:
    nodes: FrozenSet[int]
    certificates: Dict[int, Certificate]


@dataclass
class SolveDiagnostics:
    iterations: Dict[int, int] = field(default_factory=dict)
    attractor_calls: int = 0
    core_evaluations: int = 0
    cache_hits: int = 0
    candidate_certificates: int = 0
    elapsed_seconds: float = 0.0


@dataclass
class SolveResult:
    """Resultado del resolvedor por certificados."""
    game: ObligingGame = field(repr=False)
    winning_region: FrozenSet[int]
    certificate_map: Dict[RealNode, Certificate]
    fixpoint: FrozenSet[RealNode]
    initial_permutation: Permutation
    diagnostics: SolveDiagnostics
    engine: str = "cert"

    def certificate_for(self, v: int, perm: Optional[Permutation] = None) -> Certificate:
        return self.certificate_map[(v, self.initial_permutation if perm is None else tuple(perm))]


class _PermutationCore:
    """Atractor DAG para una permutación fija y máscaras seguras por posición."""

    def __init__(self, game: ObligingGame, perm: Permutation, safe: Tuple[FrozenSet[int], ...]):
        self.game = game
        self.perm = perm
        self.graph = FingerprintGraph.build(game, perm)
        arena = game.arena
        d = len(perm)

        # Vértices ∀ con alguna salida insegura
        self.alive: Set[Vertex] = set()
        for v, p in self.graph.vertices():
            if not arena.is_exists(v):
                if any(w not in safe[q] for w, q in self.graph.successors((v, p))):
                    continue
            self.alive.add((v, p))

        aceptacion = And(game.strong, game.weak)
        self.loops: Dict[int, Tuple[ELAutomaton, list]] = {}
        self.good: Set[Vertex] = set()
        for p in range(d + 1):
            estados = [v for v in arena.nodes if (v, p) in self.alive]
            indice = {v: i for i, v in enumerate(estados)}
            transiciones = tuple(
                Transition(indice[v], indice[w], arena.edge_colors(v, w))
                for v in estados for w in arena.successors(v)
                if w in indice and self.graph.edge_position[(v, w)] <= p)
            automata = ELAutomaton(len(estados), transiciones, aceptacion, labels=tuple(estados))
            componentes = accepting_components(automata)
            self.loops[p] = (automata, componentes)
            for i in components_region(automata, componentes):
                self.good.add((estados[i], p))

        predecesores: Dict[Vertex, List[Vertex]] = {}
        for vertice in self.alive:
            for sucesor in self.graph.successors(vertice):
                if sucesor in self.alive:
                    predecesores.setdefault(sucesor, []).append(vertice)
        alcanzan = set(self.good)
        cola = deque(alcanzan)
        while cola:
            actual = cola.popleft()
            for previo in predecesores.get(actual, ()):
                if previo not in alcanzan:
                    alcanzan.add(previo)
                    cola.append(previo)
        self.nodes = frozenset(v for v in arena.nodes if (v, 0) in alcanzan)
        self._certificates: Dict[int, Certificate] = {}

    def _stem_path(self, v: int) -> List[Vertex]:
        inicio = (v, 0)
        padre = {inicio: None}
        cola = deque([inicio])
        while cola:
            actual = cola.popleft()
            if actual in self.good:
                camino = [actual]
                while padre[camino[-1]] is not None:
                    camino.append(padre[camino[-1]])
                return camino[::-1]
            for sucesor in sorted(self.graph.successors(actual)):
                if sucesor in self.alive and sucesor not in padre:
                    padre[sucesor] = actual
                    cola.append(sucesor)
        raise SolverConsistencyError(f"no hay stem seguro desde el nodo {v}")

    def witness(self, v: int) -> Lasso:
        """Lasso testigo: stem seguro en M seguido de un lazo aceptante de A_p."""
        camino = self._stem_path(v)
        u, p = camino[-1]
        automata, componentes = self.loops[p]
        estados = automata.labels
        lasso = witness_lasso(automata, estados.index(u), componentes)
        stem = [x for x, _ in camino[:-1]] + [estados[q] for q in lasso.stem]
        return Lasso(tuple(stem), tuple(estados[q] for q in lasso.loop))

    def certificate(self, v: int) -> Certificate:
        if v not in self._certificates:
            self._certificates[v] = extract_certificate(self.witness(v), self.game)
        return self._certificates[v]


class ObligingSolver:
    """Punto fijo anidado ηX_{2d+1} … ηX_0 sobre los nodos reales V × Π(S).

    Args:
        game: Juego obligante.
        max_strong_colors: Límite de |S| (el trabajo crece con d!).
    """

    def __init__(self, game: ObligingGame, max_strong_colors: int = GUARDS["max_strong_colors"]):
        if game.d > max_strong_colors:
            raise GuardExceededError("max_strong_colors", game.d, max_strong_colors)
        self.game = game
        self.initial = initial_permutation(game.strong_colors)
        self.permutations = all_permutations(game.strong_colors)
        self.levels = 2 * game.d + 2
        self.real_nodes = frozenset((v, perm) for v in game.arena.nodes for perm in self.permutations)
        self._exits = {perm: _exit_table(game, perm) for perm in self.permutations}
        self.realizable = frozenset(q for prios, _ in self._exits.values() for q in prios)
        self._cache: Dict[Tuple[Permutation, Tuple[FrozenSet[int], ...]], _PermutationCore] = {}
        self.diagnostics = SolveDiagnostics()

    def _check_vbar(self, vbar: Sequence[FrozenSet[RealNode]]) -> None:
        if len(vbar) != self.levels:
            raise StructuralError(f"se esperaban {self.levels} conjuntos en V̄, hay {len(vbar)}")

    def safe_masks(self, perm: Permutation, vbar: Sequence[FrozenSet[RealNode]]) -> Tuple[FrozenSet[int], ...]:
        """Nodos w cuya salida (w, π@p) está en V̄ a la prioridad de la posición p."""
        return _safe_masks(self.game, self._exits[perm], vbar)

    def core(self, perm: Permutation, vbar: Sequence[FrozenSet[RealNode]]) -> _PermutationCore:
        clave = (perm, self.safe_masks(perm, vbar))
        if clave in self._cache:
            self.diagnostics.cache_hits += 1
            return self._cache[clave]
        self.diagnostics.core_evaluations += 1
        nucleo = _PermutationCore(self.game, perm, clave[1])
        self._cache[clave] = nucleo
        return nucleo

    def attractor(self, vbar: Sequence[FrozenSet[RealNode]]) -> FrozenSet[RealNode]:
        """Unión de los atractores DAG de todas las permutaciones."""
        self._check_vbar(vbar)
        self.diagnostics.attractor_calls += 1
        return frozenset((v, perm) for perm in self.permutations for v in self.core(perm, vbar).nodes)

    def _fixpoint(self, i: int, values: List[FrozenSet[RealNode]]) -> FrozenSet[RealNode]:
        actual = self.real_nodes if i % 2 == 0 else frozenset()
        inerte = i not in self.realizable
        while True:
            self.diagnostics.iterations[i] = self.diagnostics.iterations.get(i, 0) + 1
            values[i] = actual
            nuevo = self.attractor(values) if i == 0 else self._fixpoint(i - 1, values)
            if nuevo == actual:
                return actual
            if inerte:
                # X_i no influye en el resultado interno
                values[i] = nuevo
                return nuevo
            logger.debug(f"Nivel {i}: {len(actual)} -> {len(nuevo)} nodos reales")
            actual = nuevo

    def _candidate_certificates(self, region: FrozenSet[RealNode]) -> Dict[RealNode, Set[Certificate]]:
        finales = (region,) * self.levels
        mascaras = {perm: self.safe_masks(perm, finales) for perm in self.permutations}
        candidatos: Dict[RealNode, Set[Certificate]] = {}
        for (perm, seguras), nucleo in list(self._cache.items()):
            if not all(s <= f for s, f in zip(seguras, mascaras[perm])):
                continue
            for v in nucleo.nodes:
                if (v, perm) in region:
                    candidatos.setdefault((v, perm), set()).add(nucleo.certificate(v))
        return candidatos

    def _exit_edges(self, perm: Permutation, cert: Certificate) -> Set[Tuple[RealNode, int]]:
        return {((w, shift(perm, huella)), priority_of(perm, huella, self.game.strong))
                for w, huella in certificate_exits(cert, self.game)}

    def _choose_certificates(self, region: FrozenSet[RealNode]) -> Dict[RealNode, Certificate]:
        """Resolver el juego de certificados candidatos restringido a la región ganadora."""
        candidatos = self._candidate_certificates(region)
        reales = sorted(region)
        indice = {r: i for i, r in enumerate(reales)}
        duenos = [Owner.EXISTS] * len(reales)
        aristas: List[ParityEdge] = []
        nodo_cert: Dict[int, Certificate] = {}
        for r in reales:
            ofrecidos = 0
            for cert in sorted(candidatos.get(r, ()), key=lambda c: (len(c), c.stem, c.loop)):
                salidas = self._exit_edges(r[1], cert)
                if any(destino not in indice for destino, _ in salidas):
                    continue
                c = len(duenos)
                duenos.append(Owner.FORALL)
                nodo_cert[c] = cert
                aristas.append(ParityEdge(indice[r], c, 0))
                aristas.append(ParityEdge(c, c, 0))
                for destino, prioridad in sorted(salidas):
                    aristas.append(ParityEdge(c, indice[destino], prioridad))
                ofrecidos += 1
            if not ofrecidos:
                raise SolverConsistencyError(f"el nodo real {r} no tiene certificados seguros")
        self.diagnostics.candidate_certificates = len(nodo_cert)
        juego = ParityGame(tuple(duenos), tuple(aristas))
        solucion = zielonka_solve(juego)
        elegidos = {}
        for r in reales:
            i = indice[r]
            if i not in solucion.winning_exists:
                raise SolverConsistencyError(f"el juego de certificados pierde el nodo real {r}")
            elegidos[r] = nodo_cert[solucion.strategy[i].target]
        return elegidos

    def _recheck(self, region: FrozenSet[RealNode], certificates: Dict[RealNode, Certificate]) -> None:
        for (v, perm), cert in certificates.items():
            if cert.node != v:
                raise SolverConsistencyError(f"el certificado de {(v, perm)} empieza en otro nodo")
            for destino, _ in self._exit_edges(perm, cert):
                if destino not in region:
                    raise SolverConsistencyError(f"salida insegura {destino} desde {(v, perm)}")
        objetivo = ELAutomaton.from_arena(self.game.arena, And(self.game.strong, self.game.weak))
        con_testigo = nonempty_states(objetivo)
        sobrantes = {v for v, _ in region} - con_testigo
        if sobrantes:
            raise SolverConsistencyError(f"nodos ganadores sin certificado válido: {sorted(sobrantes)}")

    def solve(self) -> SolveResult:
        inicio = time.perf_counter()
        valores: List[FrozenSet[RealNode]] = [frozenset()] * self.levels
        region = self._fixpoint(self.levels - 1, valores)
        logger.info(f"Punto fijo estabilizado con {len(region)} nodos reales ganadores")
        certificados = self._choose_certificates(region)
        self._recheck(region, certificados)
        ganadores = frozenset(v for v, perm in region if perm == self.initial)
        self.diagnostics.elapsed_seconds = time.perf_counter() - inicio
        return SolveResult(self.game, ganadores, certificados, region, self.initial, self.diagnostics)


def dag_attractor_for_permutation(game: ObligingGame, perm: Permutation,
                                  vbar: Sequence[FrozenSet[RealNode]],
                                  max_strong_colors: int = GUARDS["max_strong_colors"]) -> AttractorResult:
    """Nodos v tales que (v, π) es atraído a V̄, con un certificado válido y seguro para cada uno.

    Sólo construye el núcleo de π; no enumera las demás permutaciones.

    Args:
        game: Juego obligante.
        perm: Permutación de S.
        vbar: Conjuntos de nodos reales indexados por prioridad 0..2d+1.
        max_strong_colors: Límite de |S|.

    Raises:
        GuardExceededError: Si d supera max_strong_colors.
        StructuralError: Si V̄ no tiene 2d+2 conjuntos o π no es una permutación de S.
    """
    if game.d > max_strong_colors:
        raise GuardExceededError("max_strong_colors", game.d, max_strong_colors)
    niveles = 2 * game.d + 2
    if len(vbar) != niveles:
        raise StructuralError(f"se esperaban {niveles} conjuntos en V̄, hay {len(vbar)}")
    perm = tuple(perm)
    if sorted(perm) != sorted(game.strong_colors):
        raise StructuralError("π no es una permutación de los colores fuertes")
    nucleo = _PermutationCore(game, perm, _safe_masks(game, _exit_table(game, perm), vbar))
    return AttractorResult(nucleo.nodes, {v: nucleo.certificate(v) for v in sorted(nucleo.nodes)})


def dag_attractor(game: ObligingGame, vbar: Sequence[FrozenSet[RealNode]]) -> FrozenSet[RealNode]:
    return ObligingSolver(game).attractor(vbar)


def solve_obliging(game: ObligingGame, max_strong_colors: int = GUARDS["max_strong_colors"]) -> SolveResult:
    """Región ganadora graciosa de ∃ y un certificado por nodo real ganador."""
    logger.info(f"Resolviendo juego con {game.n} nodos, d={game.d}, k={game.k}")
    return ObligingSolver(game, max_strong_colors).solve()


def solve_game(game: ObligingGame, engine: str = DEFAULT_ENGINE,
               guards: Optional[Dict[str, int]] = None) -> FrozenSet[int]:
    """Región ganadora según el motor elegido (cert, prior o explicit)."""
    from utils.oracles import oracle_explicit_certificate_game, oracle_prior_reduction

    limites = {**GUARDS, **(guards or {})}
    if engine == "cert":
        return solve_obliging(game, limites["max_strong_colors"]).winning_region
    if engine == "prior":
        return oracle_prior_reduction(game, limites["prior_max_weak_colors"])
    if engine == "explicit":
        return oracle_explicit_certificate_game(game, cert_budget=limites["cert_budget"])
    raise ValueError(f"motor desconocido: {engine}")

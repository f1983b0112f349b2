"""
Modelo de datos de arenas, coloraciones y objetivos Emerson-Lei.

Este módulo contiene los tipos inmutables del dominio (arena, juego obligante,
lasso) y las fórmulas Emerson-Lei con su evaluación sobre conjuntos de
colores visitados infinitas veces.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from utils.errors import FormulaError, StructuralError

# Configurar logging
logger = logging.getLogger(__name__)

ColorSet = FrozenSet[int]
EMPTY: ColorSet = frozenset()


class Owner(str, Enum):
    """Dueño de un nodo de la arena."""
    EXISTS = "E"
    FORALL = "A"


# Fórmulas Emerson-Lei positivas

@dataclass(frozen=True)
class Inf:
    color: int


@dataclass(frozen=True)
class Fin:
    color: int


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class And:
    left: "ELFormula"
    right: "ELFormula"


@dataclass(frozen=True)
class Or:
    left: "ELFormula"
    right: "ELFormula"


ELFormula = Union[Inf, Fin, Const, And, Or]
TRUE = Const(True)
FALSE = Const(False)


def eval_on_infinity_set(formula: ELFormula, inf_set: Iterable[int]) -> bool:
    """Evaluar una fórmula sobre el conjunto de colores vistos infinitas veces.

    Args:
        formula: Fórmula Emerson-Lei.
        inf_set: Colores que ocurren infinitas veces.

    Returns:
        Valor de verdad de la fórmula (Inf c sii c pertenece, Fin c sii no).
    """
    if not isinstance(inf_set, (set, frozenset)):
        inf_set = frozenset(inf_set)
    return _eval(formula, inf_set)


def _eval(formula: ELFormula, inf_set: FrozenSet[int]) -> bool:
    if isinstance(formula, Inf):
        return formula.color in inf_set
    if isinstance(formula, Fin):
        return formula.color not in inf_set
    if isinstance(formula, Const):
        return formula.value
    if isinstance(formula, And):
        return _eval(formula.left, inf_set) and _eval(formula.right, inf_set)
    if isinstance(formula, Or):
        return _eval(formula.left, inf_set) or _eval(formula.right, inf_set)
    raise FormulaError(f"nodo de fórmula desconocido: {formula!r}")


def formula_colors(formula: ELFormula) -> ColorSet:
    """Colores referenciados por la fórmula."""
    if isinstance(formula, (Inf, Fin)):
        return frozenset((formula.color,))
    if isinstance(formula, (And, Or)):
        return formula_colors(formula.left) | formula_colors(formula.right)
    return EMPTY


def negate(formula: ELFormula) -> ELFormula:
    """Dualizar la fórmula (Inf↔Fin, And↔Or, True↔False)."""
    if isinstance(formula, Inf):
        return Fin(formula.color)
    if isinstance(formula, Fin):
        return Inf(formula.color)
    if isinstance(formula, Const):
        return Const(not formula.value)
    if isinstance(formula, And):
        return Or(negate(formula.left), negate(formula.right))
    if isinstance(formula, Or):
        return And(negate(formula.left), negate(formula.right))
    raise FormulaError(f"nodo de fórmula desconocido: {formula!r}")


def conjunction(formulas: Sequence[ELFormula]) -> ELFormula:
    """Conjunción asociada a izquierda; la lista vacía es True."""
    if not formulas:
        return TRUE
    return reduce(And, formulas)


def disjunction(formulas: Sequence[ELFormula]) -> ELFormula:
    """Disyunción asociada a izquierda; la lista vacía es False."""
    if not formulas:
        return FALSE
    return reduce(Or, formulas)


def flatten_and(formula: ELFormula) -> List[ELFormula]:
    if isinstance(formula, And):
        return flatten_and(formula.left) + flatten_and(formula.right)
    return [formula]


def flatten_or(formula: ELFormula) -> List[ELFormula]:
    if isinstance(formula, Or):
        return flatten_or(formula.left) + flatten_or(formula.right)
    return [formula]


def format_formula(formula: ELFormula, color_names: Sequence[str]) -> str:
    """Imprimir la fórmula en la sintaxis del formato de archivo."""
    if isinstance(formula, Inf):
        return f"Inf({color_names[formula.color]})"
    if isinstance(formula, Fin):
        return f"Fin({color_names[formula.color]})"
    if isinstance(formula, Const):
        return "true" if formula.value else "false"
    if isinstance(formula, Or):
        izquierda = format_formula(formula.left, color_names)
        derecha = format_formula(formula.right, color_names)
        # el analizador asocia a la izquierda: un Or a la derecha necesita paréntesis
        return f"{izquierda} | ({derecha})" if isinstance(formula.right, Or) else f"{izquierda} | {derecha}"
    # & liga más fuerte que |: los Or internos y un And a la derecha llevan paréntesis
    partes = []
    for i, lado in enumerate((formula.left, formula.right)):
        texto = format_formula(lado, color_names)
        agrupar = isinstance(lado, Or) or (i == 1 and isinstance(lado, And))
        partes.append(f"({texto})" if agrupar else texto)
    return " & ".join(partes)


# Constructores de clases de objetivos

def buchi(color: int) -> ELFormula:
    return Inf(color)


def gen_buchi(colors: Iterable[int]) -> ELFormula:
    """Büchi generalizado: todos los colores infinitas veces."""
    colores = sorted(set(colors))
    if not colores:
        raise FormulaError("genBuchi requiere al menos un color")
    return conjunction([Inf(c) for c in colores])


def parity(priorities: Sequence[int]) -> ELFormula:
    """Paridad máxima sobre colores ordenados por prioridad creciente.

    Args:
        priorities: priorities[i] es el color de prioridad i.

    Returns:
        Disyunción sobre prioridades pares i de Inf p_i & Fin p_j (j > i).
    """
    if not priorities:
        raise FormulaError("parity requiere al menos una prioridad")
    terminos = []
    for i in range(0, len(priorities), 2):
        mayores = [Fin(p) for p in priorities[i + 1:]]
        terminos.append(conjunction([Inf(priorities[i])] + mayores))
    return disjunction(terminos)


def rabin(pairs: Sequence[Tuple[int, int]]) -> ELFormula:
    """Rabin: disyunción de (Fin e & Inf f)."""
    if not pairs:
        raise FormulaError("rabin requiere al menos un par")
    return disjunction([And(Fin(e), Inf(f)) for e, f in pairs])


def streett(pairs: Sequence[Tuple[int, int]]) -> ELFormula:
    """Streett: conjunción de (Fin a | Inf b)."""
    if not pairs:
        raise FormulaError("streett requiere al menos un par")
    return conjunction([Or(Fin(a), Inf(b)) for a, b in pairs])


def gr1(requests: Sequence[int], grants: Sequence[int]) -> ELFormula:
    """GR[1]: si todas las peticiones ocurren infinitas veces, también las respuestas."""
    if not requests or not grants:
        raise FormulaError("gr1 requiere peticiones y respuestas")
    return Or(disjunction([Fin(r) for r in requests]), conjunction([Inf(g) for g in grants]))


# Arenas y juegos

@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    colors: ColorSet = EMPTY


@dataclass(frozen=True)
class Arena:
    """Arena (V, V∃, E) con un conjunto de colores por arista."""
    node_count: int
    owners: Tuple[Owner, ...]
    edges: Tuple[Edge, ...]
    _successors: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _colors: Dict[Tuple[int, int], ColorSet] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.node_count < 1:
            raise StructuralError("la arena necesita al menos un nodo")
        if len(self.owners) != self.node_count:
            raise StructuralError(
                f"se esperaban {self.node_count} dueños, hay {len(self.owners)}")
        colores: Dict[Tuple[int, int], ColorSet] = {}
        sucesores: List[List[int]] = [[] for _ in range(self.node_count)]
        for edge in self.edges:
            for extremo in (edge.source, edge.target):
                if not 0 <= extremo < self.node_count:
                    raise StructuralError(f"nodo fuera de rango en arista ({edge.source},{edge.target})")
            par = (edge.source, edge.target)
            if par in colores:
                raise StructuralError(f"arista duplicada {par}")
            colores[par] = edge.colors
            sucesores[edge.source].append(edge.target)
        for v, lista in enumerate(sucesores):
            if not lista:
                raise StructuralError(f"node has no successor: {v}")
        object.__setattr__(self, "_successors", tuple(tuple(sorted(s)) for s in sucesores))
        object.__setattr__(self, "_colors", colores)

    @classmethod
    def from_edges(cls, node_count: int, owners: Sequence[Owner],
                   edges: Iterable[Tuple[int, int, Iterable[int]]]) -> "Arena":
        """Construir una arena fusionando aristas paralelas por unión de colores."""
        fusion: Dict[Tuple[int, int], set] = {}
        for source, target, colors in edges:
            fusion.setdefault((source, target), set()).update(colors)
        aristas = tuple(Edge(s, t, frozenset(c)) for (s, t), c in sorted(fusion.items()))
        return cls(node_count, tuple(Owner(o) for o in owners), aristas)

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    def successors(self, v: int) -> Tuple[int, ...]:
        return self._successors[v]

    def has_edge(self, v: int, w: int) -> bool:
        return (v, w) in self._colors

    def edge_colors(self, v: int, w: int) -> ColorSet:
        try:
            return self._colors[(v, w)]
        except KeyError:
            raise StructuralError(f"no existe la arista ({v},{w})") from None

    def is_exists(self, v: int) -> bool:
        return self.owners[v] is Owner.EXISTS


@dataclass(frozen=True)
class ObligingGame:
    """Juego obligante: arena más objetivos fuerte (φS) y débil (φW).

    S y W son los colores de cada fórmula salvo que el archivo declare
    universos explícitos (strong_decl / weak_decl), que deben contenerlos.
    """
    arena: Arena
    color_names: Tuple[str, ...]
    strong: ELFormula
    weak: ELFormula
    node_names: Tuple[str, ...] = ()
    strong_decl: Optional[ColorSet] = None
    weak_decl: Optional[ColorSet] = None

    def __post_init__(self):
        if not self.node_names:
            object.__setattr__(self, "node_names", tuple(f"v{i}" for i in self.arena.nodes))
        if len(self.node_names) != self.arena.node_count:
            raise StructuralError("la cantidad de nombres de nodo no coincide con la arena")
        universo = range(len(self.color_names))
        for nombre, formula, decl in (("strong", self.strong, self.strong_decl),
                                      ("weak", self.weak, self.weak_decl)):
            colores = formula_colors(formula)
            if any(c not in universo for c in colores):
                raise FormulaError(f"la fórmula {nombre} usa colores no declarados")
            if decl is not None and not colores <= decl:
                raise FormulaError(f"la fórmula {nombre} usa colores fuera de su universo declarado")
        permitidos = set(self.strong_colors) | set(self.weak_colors)
        for edge in self.arena.edges:
            sobrantes = edge.colors - permitidos
            if sobrantes:
                raise StructuralError(
                    f"la arista ({self.node_names[edge.source]},{self.node_names[edge.target]}) "
                    f"usa colores fuera de S∪W: {sorted(self.color_names[c] for c in sobrantes)}")

    @property
    def n(self) -> int:
        return self.arena.node_count

    @property
    def strong_colors(self) -> Tuple[int, ...]:
        """S en orden de declaración."""
        base = self.strong_decl if self.strong_decl is not None else formula_colors(self.strong)
        return tuple(sorted(base))

    @property
    def weak_colors(self) -> Tuple[int, ...]:
        base = self.weak_decl if self.weak_decl is not None else formula_colors(self.weak)
        return tuple(sorted(base))

    @property
    def d(self) -> int:
        return len(self.strong_colors)

    @property
    def k(self) -> int:
        return len(self.weak_colors)

    def node_index(self, name: str) -> int:
        try:
            return self.node_names.index(name)
        except ValueError:
            raise StructuralError(f"nodo desconocido: {name}") from None

    def color_index(self, name: str) -> int:
        try:
            return self.color_names.index(name)
        except ValueError:
            raise FormulaError(f"color no declarado: {name}") from None

    def strong_part(self, colors: ColorSet) -> ColorSet:
        return colors & frozenset(self.strong_colors)

    def names(self, nodes: Iterable[int]) -> List[str]:
        return [self.node_names[v] for v in nodes]


@dataclass(frozen=True)
class Lasso:
    """Jugada ultimamente periódica stem · loop^ω."""
    stem: Tuple[int, ...]
    loop: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise StructuralError("el lazo de un lasso no puede ser vacío")

    def validate(self, arena: Arena) -> None:
        """Verificar que cada par consecutivo (incluido el cierre) sea una arista."""
        recorrido = self.stem + self.loop + (self.loop[0],)
        for v, w in zip(recorrido, recorrido[1:]):
            if not arena.has_edge(v, w):
                raise StructuralError(f"falta la arista ({v},{w}) en el lasso")

    def loop_edges(self) -> List[Tuple[int, int]]:
        cerrado = self.loop + (self.loop[0],)
        return list(zip(cerrado, cerrado[1:]))

    def unroll(self, steps: int) -> List[int]:
        """Prefijo de la jugada infinita con `steps` posiciones."""
        jugada = list(self.stem)
        while len(jugada) < steps:
            jugada.extend(self.loop)
        return jugada[:steps]


def path_edges(path: Sequence[int]) -> List[Tuple[int, int]]:
    return list(zip(path, path[1:]))


def lasso_infinity_set(lasso: Lasso, game: ObligingGame) -> ColorSet:
    """Colores que ocurren infinitas veces en stem · loop^ω."""
    lasso.validate(game.arena)
    colores = set()
    for v, w in lasso.loop_edges():
        colores |= game.arena.edge_colors(v, w)
    return frozenset(colores)


def fingerprint(path: Sequence[int], restrict_to: Iterable[int], game: ObligingGame) -> ColorSet:
    """Huella de colores (restringida) de una jugada finita."""
    filtro = frozenset(restrict_to)
    colores = set()
    for v, w in path_edges(path):
        if not game.arena.has_edge(v, w):
            raise StructuralError(f"falta la arista ({v},{w}) en el camino")
        colores |= game.arena.edge_colors(v, w) & filtro
    return frozenset(colores)

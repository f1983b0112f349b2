"""
Lectura y escritura del formato de juegos `.oblige`.

Este módulo contiene el analizador y el serializador del formato de texto,
el acceso a los juegos de ejemplo incluidos como archivos y el generador de
instancias aleatorias reproducibles por semilla.
"""

import logging
import random
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from config.default import (
    FIXTURES_DIR,
    FIXTURE_NAMES,
    GAME_FORMAT_HEADER,
    GAME_FORMAT_VERSION,
    OBJECTIVE_CLASSES,
    RANDOM_GAME_CONFIG,
)
from utils.errors import FormulaError, GameParseError, ObligeError, StructuralError
from utils.game_model import (
    And,
    Arena,
    ELFormula,
    FALSE,
    Fin,
    Inf,
    ObligingGame,
    Or,
    Owner,
    TRUE,
    conjunction,
    disjunction,
    format_formula,
    formula_colors,
    gen_buchi,
    gr1,
    parity,
    rabin,
    streett,
)

# Configurar logging
logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(?P<op>[&|()])|(?P<word>[A-Za-z_][A-Za-z0-9_.\-]*))")


@dataclass
class GameDocument:
    """Representación textual intermedia de un juego."""
    version: int
    node_names: List[str]
    owners: str
    color_names: List[str]
    edges: List[Tuple[str, str, List[str]]] = field(default_factory=list)
    strong: str = "true"
    weak: str = "true"
    strong_colors: Optional[List[str]] = None
    weak_colors: Optional[List[str]] = None


class _FormulaParser:
    """Descenso recursivo: or := and ('|' and)*; and := atom ('&' atom)*."""

    def __init__(self, text: str, colors: Dict[str, int], line: int, offset: int):
        self.text = text
        self.colors = colors
        self.line = line
        self.offset = offset
        self.tokens: List[Tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match:
                self._fail("símbolo inesperado", pos)
            valor = match.group("op") or match.group("word")
            inicio = match.start("op") if match.group("op") else match.start("word")
            self.tokens.append((valor, inicio))
            pos = match.end()
        self.index = 0

    def _fail(self, message: str, pos: Optional[int] = None):
        if pos is None:
            pos = self.tokens[self.index][1] if self.index < len(self.tokens) else len(self.text)
        raise GameParseError(f"fórmula mal formada: {message}", self.line, self.offset + pos + 1)

    def _peek(self) -> Optional[str]:
        return self.tokens[self.index][0] if self.index < len(self.tokens) else None

    def _take(self, expected: Optional[str] = None) -> str:
        token = self._peek()
        if token is None or (expected is not None and token != expected):
            self._fail(f"se esperaba '{expected}'" if expected else "fin inesperado")
        self.index += 1
        return token

    def parse(self) -> ELFormula:
        formula = self._or()
        if self._peek() is not None:
            self._fail(f"sobra '{self._peek()}'")
        return formula

    def _or(self) -> ELFormula:
        partes = [self._and()]
        while self._peek() == "|":
            self._take("|")
            partes.append(self._and())
        return disjunction(partes)

    def _and(self) -> ELFormula:
        partes = [self._atom()]
        while self._peek() == "&":
            self._take("&")
            partes.append(self._atom())
        return conjunction(partes)

    def _atom(self) -> ELFormula:
        token = self._peek()
        if token == "(":
            self._take("(")
            formula = self._or()
            self._take(")")
            return formula
        if token == "true":
            self._take()
            return TRUE
        if token == "false":
            self._take()
            return FALSE
        if token in ("Inf", "Fin"):
            self._take()
            self._take("(")
            pos = self.tokens[self.index][1] if self.index < len(self.tokens) else len(self.text)
            nombre = self._take()
            if nombre not in self.colors:
                raise GameParseError(f"color no declarado: {nombre}", self.line, self.offset + pos + 1)
            self._take(")")
            return Inf(self.colors[nombre]) if token == "Inf" else Fin(self.colors[nombre])
        self._fail(f"átomo inválido '{token}'" if token else "fin inesperado")


def parse_formula(text: str, color_names: Sequence[str], line: int = 0, offset: int = 0) -> ELFormula:
    """Analizar una fórmula Emerson-Lei en la sintaxis del archivo."""
    return _FormulaParser(text, {c: i for i, c in enumerate(color_names)}, line, offset).parse()


def parse_document(text: str) -> Tuple[GameDocument, Dict[str, int]]:
    """Analizar el texto a un GameDocument, guardando la línea de cada clave."""
    lineas = [(i + 1, l.split("#", 1)[0].rstrip()) for i, l in enumerate(text.splitlines())]
    lineas = [(n, l) for n, l in lineas if l.strip()]
    if not lineas:
        raise GameParseError("archivo vacío", 1)
    numero, cabecera = lineas[0]
    partes = cabecera.split()
    if len(partes) != 2 or partes[0] != GAME_FORMAT_HEADER:
        raise GameParseError(f"se esperaba la cabecera '{GAME_FORMAT_HEADER} {GAME_FORMAT_VERSION}'", numero, 1)
    if partes[1] != str(GAME_FORMAT_VERSION):
        raise GameParseError(f"versión de formato no soportada: {partes[1]}", numero, len(partes[0]) + 2)

    claves: Dict[str, int] = {}
    valores: Dict[str, str] = {}
    aristas: List[Tuple[int, str]] = []
    for numero, linea in lineas[1:]:
        contenido = linea.strip()
        if contenido.startswith("edge ") or contenido == "edge":
            aristas.append((numero, linea))
            continue
        if ":" not in contenido:
            raise GameParseError(f"línea no reconocida: '{contenido}'", numero, 1)
        clave, valor = contenido.split(":", 1)
        clave = clave.strip()
        if clave not in ("nodes", "owners", "colors", "strong", "weak", "strong-colors", "weak-colors"):
            raise GameParseError(f"clave desconocida: {clave}", numero, 1)
        if clave in claves:
            raise GameParseError(f"clave repetida: {clave}", numero, 1)
        claves[clave] = numero
        valores[clave] = valor.strip()

    for requerida in ("nodes", "owners", "colors", "strong", "weak"):
        if requerida not in valores:
            raise GameParseError(f"falta la clave '{requerida}'", lineas[-1][0])

    nodos = valores["nodes"].split()
    if len(nodos) == 1 and nodos[0].isdigit():
        nodos = [str(i) for i in range(int(nodos[0]))]
    if not nodos or len(set(nodos)) != len(nodos):
        raise GameParseError("lista de nodos vacía o con repetidos", claves["nodes"])

    doc = GameDocument(
        version=GAME_FORMAT_VERSION,
        node_names=nodos,
        owners=valores["owners"].replace(" ", ""),
        color_names=valores["colors"].split(),
        strong=valores["strong"],
        weak=valores["weak"],
        strong_colors=valores["strong-colors"].split() if "strong-colors" in valores else None,
        weak_colors=valores["weak-colors"].split() if "weak-colors" in valores else None,
    )
    claves["edges"] = aristas[0][0] if aristas else claves["nodes"]
    for numero, linea in aristas:
        match = re.match(r"\s*edge\s+(\S+)\s+(\S+)\s*\{([^}]*)\}\s*$", linea)
        if not match:
            raise GameParseError("arista mal formada, se esperaba 'edge <src> <dst> {c1,c2}'", numero, 1)
        origen, destino, colores = match.group(1), match.group(2), match.group(3)
        for grupo, nombre in ((1, origen), (2, destino)):
            if nombre not in nodos:
                raise GameParseError(f"unknown node: {nombre}", numero, match.start(grupo) + 1)
        lista = [c.strip() for c in colores.split(",") if c.strip()]
        for color in lista:
            if color not in doc.color_names:
                raise GameParseError(f"color no declarado: {color}", numero, match.start(3) + 1)
        doc.edges.append((origen, destino, lista))
    return doc, claves


def document_to_game(doc: GameDocument, lines: Optional[Dict[str, int]] = None) -> ObligingGame:
    """Validar el documento y construir el juego."""
    lines = lines or {}
    n = len(doc.node_names)
    if len(doc.owners) != n or any(o not in "EA" for o in doc.owners):
        raise GameParseError(f"owners debe tener una letra E/A por nodo ({n})", lines.get("owners"))
    indice = {nombre: i for i, nombre in enumerate(doc.node_names)}
    colores = {nombre: i for i, nombre in enumerate(doc.color_names)}
    if len(colores) != len(doc.color_names):
        raise GameParseError("colores repetidos", lines.get("colors"))

    strong = _formula_at(doc.strong, doc.color_names, lines.get("strong"), "strong: ")
    weak = _formula_at(doc.weak, doc.color_names, lines.get("weak"), "weak: ")
    decl = {}
    for clave, valor in (("strong-colors", doc.strong_colors), ("weak-colors", doc.weak_colors)):
        if valor is None:
            decl[clave] = None
            continue
        faltantes = [c for c in valor if c not in colores]
        if faltantes:
            raise GameParseError(f"color no declarado: {faltantes[0]}", lines.get(clave))
        decl[clave] = frozenset(colores[c] for c in valor)

    aristas = [(indice[s], indice[t], [colores[c] for c in cs]) for s, t, cs in doc.edges]
    salientes = {s for s, _, _ in aristas}
    for v, nombre in enumerate(doc.node_names):
        if v not in salientes:
            raise GameParseError(f"node has no successor: {nombre}", lines.get("edges"))
    try:
        arena = Arena.from_edges(n, [Owner(o) for o in doc.owners], aristas)
        return ObligingGame(
            arena=arena,
            color_names=tuple(doc.color_names),
            strong=strong,
            weak=weak,
            node_names=tuple(doc.node_names),
            strong_decl=decl["strong-colors"],
            weak_decl=decl["weak-colors"],
        )
    except (StructuralError, FormulaError) as e:
        raise GameParseError(str(e), lines.get("edges")) from e


def _formula_at(text: str, color_names: Sequence[str], line: Optional[int], prefix: str) -> ELFormula:
    return parse_formula(text, color_names, line or 0, len(prefix))


def parse_game(text: str) -> ObligingGame:
    """Analizar un archivo `.oblige` y devolver el juego validado.

    Args:
        text: Contenido del archivo.

    Returns:
        Juego obligante con todos los invariantes verificados.
    """
    doc, lineas = parse_document(text)
    return document_to_game(doc, lineas)


def game_to_document(game: ObligingGame) -> GameDocument:
    nombres = game.color_names
    doc = GameDocument(
        version=GAME_FORMAT_VERSION,
        node_names=list(game.node_names),
        owners="".join(o.value for o in game.arena.owners),
        color_names=list(nombres),
        strong=format_formula(game.strong, nombres),
        weak=format_formula(game.weak, nombres),
    )
    if game.strong_decl is not None:
        doc.strong_colors = [nombres[c] for c in sorted(game.strong_decl)]
    if game.weak_decl is not None:
        doc.weak_colors = [nombres[c] for c in sorted(game.weak_decl)]
    for edge in game.arena.edges:
        doc.edges.append((game.node_names[edge.source], game.node_names[edge.target],
                          [nombres[c] for c in sorted(edge.colors)]))
    return doc


def serialize_game(game: ObligingGame) -> str:
    """Serializar el juego en el formato `.oblige` normalizado."""
    doc = game_to_document(game)
    lineas = [
        f"{GAME_FORMAT_HEADER} {doc.version}",
        f"nodes: {' '.join(doc.node_names)}",
        f"owners: {doc.owners}",
        f"colors: {' '.join(doc.color_names)}",
    ]
    if doc.strong_colors is not None:
        lineas.append(f"strong-colors: {' '.join(doc.strong_colors)}")
    if doc.weak_colors is not None:
        lineas.append(f"weak-colors: {' '.join(doc.weak_colors)}")
    for origen, destino, colores in doc.edges:
        lineas.append(f"edge {origen} {destino} {{{','.join(colores)}}}")
    lineas.append(f"strong: {doc.strong}")
    lineas.append(f"weak: {doc.weak}")
    return "\n".join(lineas) + "\n"


def fixture(name: str) -> ObligingGame:
    """Cargar un juego de ejemplo incluido en el repositorio."""
    if name not in FIXTURE_NAMES:
        raise ObligeError(f"fixture desconocido: {name}. Opciones: {', '.join(FIXTURE_NAMES)}")
    ruta = FIXTURES_DIR / f"{name}.oblige"
    return parse_game(ruta.read_text(encoding="utf-8"))


def _random_objective(rng: random.Random, kind: str, colors: List[int]) -> ELFormula:
    if kind == "true":
        return TRUE
    if not colors:
        raise StructuralError(f"la clase {kind} necesita al menos un color")
    if kind == "buchi":
        return Inf(rng.choice(colors))
    if kind == "genbuchi":
        return gen_buchi(rng.sample(colors, rng.randint(1, min(2, len(colors)))))
    if kind == "parity":
        orden = rng.sample(colors, rng.randint(1, len(colors)))
        return parity(orden)
    if kind in ("rabin", "streett"):
        pares = []
        for _ in range(rng.randint(1, min(2, len(colors)))):
            if len(colors) >= 2:
                a, b = rng.sample(colors, 2)
            else:
                a = b = colors[0]
            pares.append((a, b))
        return rabin(pares) if kind == "rabin" else streett(pares)
    if kind == "gr1":
        return gr1(rng.sample(colors, rng.randint(1, len(colors))),
                   rng.sample(colors, rng.randint(1, len(colors))))
    if kind == "el":
        def atomo():
            c = rng.choice(colors)
            return Inf(c) if rng.random() < 0.5 else Fin(c)
        terminos = [conjunction([atomo() for _ in range(rng.randint(1, 2))]) for _ in range(2)]
        return disjunction(terminos) if rng.random() < 0.5 else And(terminos[0], Or(atomo(), atomo()))
    raise StructuralError(f"clase de objetivo desconocida: {kind}. Opciones: {', '.join(OBJECTIVE_CLASSES)}")


def random_game(seed: int,
                nodes: int = RANDOM_GAME_CONFIG["nodes"],
                colors: int = RANDOM_GAME_CONFIG["colors"],
                density: float = RANDOM_GAME_CONFIG["density"],
                strong_class: str = RANDOM_GAME_CONFIG["strong"],
                weak_class: str = RANDOM_GAME_CONFIG["weak"],
                forall_ratio: float = RANDOM_GAME_CONFIG["forall_ratio"]) -> ObligingGame:
    """Generar un juego aleatorio determinista por semilla.

    Args:
        seed: Semilla del generador.
        nodes: Cantidad de nodos (>= 1).
        colors: Tamaño del universo de colores.
        density: Probabilidad de cada arista, en (0, 1]; 1 da el digrafo completo con lazos.
        strong_class: Clase del objetivo fuerte.
        weak_class: Clase del objetivo débil.
        forall_ratio: Probabilidad de que un nodo sea de ∀.

    Returns:
        Juego obligante válido.
    """
    if nodes < 1 or colors < 0 or not 0 < density <= 1:
        raise StructuralError(f"parámetros inviables: nodes={nodes}, colors={colors}, density={density}")
    rng = random.Random(seed)
    universo = list(range(colors))
    owners = [Owner.FORALL if rng.random() < forall_ratio else Owner.EXISTS for _ in range(nodes)]
    strong = _random_objective(rng, strong_class, universo)
    weak = _random_objective(rng, weak_class, universo)
    permitidos = formula_colors(strong) | formula_colors(weak)

    aristas = []
    for v in range(nodes):
        destinos = [w for w in range(nodes) if density >= 1 or rng.random() < density]
        if not destinos:
            destinos = [rng.randrange(nodes)]
        for w in destinos:
            etiqueta = [c for c in universo if c in permitidos and rng.random() < 0.4]
            aristas.append((v, w, etiqueta))
    arena = Arena.from_edges(nodes, owners, aristas)
    logger.debug(f"Juego aleatorio seed={seed}: {nodes} nodos, {len(arena.edges)} aristas")
    return ObligingGame(
        arena=arena,
        color_names=tuple(chr(ord("a") + c) if c < 26 else f"c{c}" for c in universo),
        strong=strong,
        weak=weak,
        node_names=tuple(f"v{i}" for i in range(nodes)),
    )

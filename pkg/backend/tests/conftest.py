"""Fixtures compartidas de la suite."""

import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from utils.el_emptiness import ELAutomaton, Transition  # noqa: E402
from utils.game_io import fixture, random_game  # noqa: E402

STRONG_CLASSES = ("streett", "rabin", "genbuchi", "el", "parity")
WEAK_CLASSES = ("genbuchi", "buchi", "true", "streett", "el")


@pytest.fixture
def ex1():
    return fixture("ex1")


@pytest.fixture
def ex1_dashed():
    return fixture("ex1-dashed")


@pytest.fixture
def ex10():
    return fixture("ex10")


@pytest.fixture
def ex10_forall():
    return fixture("ex10-forall")


def mixed_game(seed: int, max_nodes: int = 5, max_colors: int = 3):
    """Juego aleatorio con clases de objetivo alternadas según la semilla."""
    rng = random.Random(seed)
    return random_game(
        seed,
        nodes=rng.randint(1, max_nodes),
        colors=rng.randint(1, max_colors),
        density=rng.choice([0.3, 0.5, 0.7]),
        strong_class=STRONG_CLASSES[seed % len(STRONG_CLASSES)],
        weak_class=WEAK_CLASSES[(seed // len(STRONG_CLASSES)) % len(WEAK_CLASSES)],
    )


def random_automaton(seed: int, max_states: int = 8, max_colors: int = 4, acceptance=None):
    """Autómata de una letra aleatorio; la aceptación se reemplaza después."""
    from utils.game_model import TRUE

    rng = random.Random(seed)
    estados = rng.randint(1, max_states)
    colores = rng.randint(1, max_colors)
    densidad = rng.choice([0.15, 0.3, 0.5])
    transiciones = []
    for q in range(estados):
        for r in range(estados):
            if rng.random() < densidad:
                etiqueta = frozenset(c for c in range(colores) if rng.random() < 0.35)
                transiciones.append(Transition(q, r, etiqueta))
    return ELAutomaton(estados, tuple(transiciones), TRUE if acceptance is None else acceptance), colores

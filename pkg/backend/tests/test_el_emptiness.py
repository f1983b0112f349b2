import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from tests.conftest import random_automaton
from utils.el_emptiness import (
    ELAutomaton,
    Transition,
    automaton_to_text,
    classify,
    gen_buchi_region,
    generic_components,
    generic_region,
    is_empty_gen_buchi,
    is_empty_generic,
    is_empty_rabin,
    is_empty_rabin_and_streett,
    is_empty_streett,
    nonempty_states,
    rabin_pairs_of,
    rabin_region,
    streett_pairs_of,
    streett_region,
    witness_lasso,
)
from utils.errors import AcceptanceClassError, GuardExceededError, ObligeError, StructuralError
from utils.game_model import And, Const, Fin, Inf, Or, eval_on_infinity_set, gen_buchi, rabin, streett

AUTOMATA_PER_CLASS = 500

PROPERTY_SETTINGS = settings(
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


def _pairs(rng, colors, count):
    return [(rng.randrange(colors), rng.randrange(colors)) for _ in range(count)]


class TestClassify:
    def test_classes(self):
        assert classify(gen_buchi([0, 2])).kind == "genbuchi"
        assert classify(streett([(0, 1), (2, 3)])).kind == "streett"
        assert classify(rabin([(0, 1), (2, 3)])).kind == "rabin"
        assert classify(And(streett([(0, 1)]), rabin([(2, 3), (1, 0)]))).kind == "rabin-streett"
        assert classify(Or(And(Inf(0), Inf(1)), Fin(2))).kind == "generic"

    def test_genbuchi_required_colors(self):
        assert classify(gen_buchi([2, 0])).required == (0, 2)

    def test_wrong_class_raises(self):
        aut = ELAutomaton(1, (Transition(0, 0, frozenset({0})),), streett([(0, 1)]))
        with pytest.raises(AcceptanceClassError):
            gen_buchi_region(aut)
        with pytest.raises(AcceptanceClassError):
            streett_region(aut.with_acceptance(Or(And(Inf(0), Inf(1)), Fin(2))))


class TestSmallAutomata:
    def test_parallel_transition(self):
        with pytest.raises(StructuralError):
            ELAutomaton(1, (Transition(0, 0), Transition(0, 0, frozenset({1}))), Const(True))

    def test_dead_end_is_empty(self):
        aut = ELAutomaton(2, (Transition(0, 1, frozenset({0})),), Inf(0))
        assert is_empty_gen_buchi(aut)
        assert nonempty_states(aut) == frozenset()

    def test_streett_needs_response(self):
        aut = ELAutomaton(2, (Transition(0, 1, frozenset({0})), Transition(1, 0, frozenset())),
                          streett([(0, 1)]))
        assert is_empty_streett(aut)
        con_respuesta = ELAutomaton(2, (Transition(0, 1, frozenset({0})), Transition(1, 0, frozenset({1}))),
                                    streett([(0, 1)]))
        assert not is_empty_streett(con_respuesta)

    def test_streett_drops_bad_transitions(self):
        # el lazo 1→1 sin la petición 0 es aceptante aunque la SCC completa no lo sea
        aut = ELAutomaton(2, (Transition(0, 1, frozenset({0})), Transition(1, 0),
                              Transition(1, 1, frozenset({2}))), streett([(0, 1)]))
        assert streett_region(aut) == frozenset({0, 1})

    def test_rabin_fin_excludes_component(self):
        aut = ELAutomaton(1, (Transition(0, 0, frozenset({0, 1})),), rabin([(0, 1)]))
        assert is_empty_rabin(aut)

    def test_generic_guard(self):
        aut = ELAutomaton(1, (Transition(0, 0, frozenset({0, 1})),), Inf(0))
        with pytest.raises(GuardExceededError):
            generic_components(aut, max_colors=1)

    def test_witness_for_empty_state(self):
        aut = ELAutomaton(2, (Transition(0, 1), Transition(1, 1)), Inf(0))
        with pytest.raises(ObligeError):
            witness_lasso(aut, 0)

    def test_text_format(self):
        aut = ELAutomaton(1, (Transition(0, 0, frozenset({0})),), Inf(0))
        assert automaton_to_text(aut, ["a"]) == "states: 1\ntrans 0 0 {a}\nacceptance: Inf(a)\n"


class TestCrossValidation:
    def test_genbuchi_against_generic(self):
        for seed in range(AUTOMATA_PER_CLASS):
            rng = random.Random(seed)
            aut, colores = random_automaton(seed)
            aut = aut.with_acceptance(gen_buchi(rng.sample(range(colores), rng.randint(1, colores))))
            assert is_empty_gen_buchi(aut) == is_empty_generic(aut), seed
            assert gen_buchi_region(aut) == generic_region(aut), seed

    def test_rabin_against_generic(self):
        for seed in range(AUTOMATA_PER_CLASS):
            rng = random.Random(seed)
            aut, colores = random_automaton(seed)
            aut = aut.with_acceptance(rabin(_pairs(rng, colores, rng.randint(1, 3))))
            assert is_empty_rabin(aut) == is_empty_generic(aut), seed
            assert rabin_region(aut) == generic_region(aut), seed

    def test_streett_against_generic(self):
        for seed in range(AUTOMATA_PER_CLASS):
            rng = random.Random(seed)
            aut, colores = random_automaton(seed)
            aut = aut.with_acceptance(streett(_pairs(rng, colores, rng.randint(1, 3))))
            assert is_empty_streett(aut) == is_empty_generic(aut), seed
            assert streett_region(aut) == generic_region(aut), seed

    def test_rabin_and_streett_against_generic(self):
        for seed in range(AUTOMATA_PER_CLASS):
            rng = random.Random(seed)
            aut, colores = random_automaton(seed)
            formula_rabin = rabin(_pairs(rng, colores, rng.randint(1, 2)))
            formula_streett = streett(_pairs(rng, colores, rng.randint(1, 2)))
            conjunta = aut.with_acceptance(And(formula_streett, formula_rabin))
            especializado = is_empty_rabin_and_streett(
                conjunta, rabin_pairs_of(formula_rabin), streett_pairs_of(formula_streett))
            assert especializado == is_empty_generic(conjunta), seed
            assert nonempty_states(conjunta) == generic_region(conjunta), seed


class TestWitness:
    @PROPERTY_SETTINGS
    @given(seed=st.integers(min_value=0, max_value=100_000))
    def test_witness_is_accepting_run(self, seed):
        rng = random.Random(seed)
        aut, colores = random_automaton(seed)
        aut = aut.with_acceptance(And(streett(_pairs(rng, colores, 1)), gen_buchi([rng.randrange(colores)])))
        for q in sorted(nonempty_states(aut)):
            lasso = witness_lasso(aut, q)
            assert lasso.states()[0] == q
            cerrado = lasso.states() + (lasso.loop[0],)
            for origen, destino in zip(cerrado, cerrado[1:]):
                aut.edge_colors(origen, destino)
            assert eval_on_infinity_set(aut.acceptance, lasso.infinity_set(aut))

    @PROPERTY_SETTINGS
    @given(seed=st.integers(min_value=0, max_value=100_000))
    def test_nonempty_states_closed_under_predecessors(self, seed):
        rng = random.Random(seed)
        aut, colores = random_automaton(seed)
        aut = aut.with_acceptance(Or(rabin(_pairs(rng, colores, 1)), streett(_pairs(rng, colores, 2))))
        region = nonempty_states(aut)
        for t in aut.transitions:
            if t.target in region:
                assert t.source in region
        for q in region:
            assert set(witness_lasso(aut, q).states()) <= region

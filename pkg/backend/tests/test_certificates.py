import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from tests.conftest import mixed_game
from utils.certificates import (
    Certificate,
    cert_bound,
    certificate_exits,
    extract_certificate,
    failing_formula,
    fingerprint_correspondence,
    format_certificate,
    is_valid,
    loop_bound,
    prefix_fingerprints,
    stem_bound,
)
from utils.el_emptiness import ELAutomaton, nonempty_states, witness_lasso
from utils.errors import InvalidWitnessError, StructuralError
from utils.game_io import parse_game
from utils.game_model import And, Lasso

PROPERTY_SETTINGS = settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


def _nodes(game, text):
    return tuple(game.node_index(name) for name in text.split())


class TestValidity:
    def test_ex1_loop_without_c_is_rejected(self, ex1):
        cert = Certificate(_nodes(ex1, "v1"), _nodes(ex1, "v2 v4 v5 v1"))
        assert not is_valid(cert, ex1)
        assert failing_formula(cert.as_lasso(), ex1).startswith("weak")

    def test_ex1_loop_with_all_colors_is_accepted(self, ex1):
        cert = Certificate(_nodes(ex1, "v1"), _nodes(ex1, "v2 v3 v4 v1 v2 v4 v5 v1"))
        assert is_valid(cert, ex1)

    def test_ex10_reference_certificate(self, ex10):
        cert = Certificate(_nodes(ex10, "x y y z z"), _nodes(ex10, "y z z y z"))
        assert is_valid(cert, ex10)

    def test_not_a_play(self, ex1):
        with pytest.raises(StructuralError):
            is_valid(Certificate(_nodes(ex1, "v1"), _nodes(ex1, "v3")), ex1)

    def test_empty_parts_rejected(self):
        with pytest.raises(StructuralError):
            Certificate((), (0,))


class TestBounds:
    def test_cert_bound_values(self):
        assert cert_bound(3, 4, 4) == 48
        assert cert_bound(5, 4, 2) == 62

    def test_ex10_bounds(self, ex10):
        # n=3, d=4
        assert stem_bound(ex10) == 12
        assert loop_bound(ex10) == 36


class TestFingerprints:
    def test_prefix_fingerprints_ex10(self, ex10):
        huellas = prefix_fingerprints(_nodes(ex10, "x y y z"), ex10)
        assert huellas == [frozenset(), frozenset({0}), frozenset({0, 1}), frozenset({0, 1})]

    def test_exits_ex1(self, ex1):
        cert = Certificate(_nodes(ex1, "v1"), _nodes(ex1, "v2 v3 v4 v1 v2 v4 v5 v1"))
        v = ex1.node_index
        a, b, c, d = range(4)
        assert certificate_exits(cert, ex1) == frozenset({
            (v("v3"), frozenset({a, c})),
            (v("v4"), frozenset({a})),
            (v("v4"), frozenset({a, c})),
            (v("v3"), frozenset({a, c, d})),
            (v("v4"), frozenset({a, c, d})),
            (v("v1"), frozenset({a, b, c, d})),
        })

    def test_all_exists_certificate_has_no_exits(self, ex10):
        cert = Certificate(_nodes(ex10, "x y y z z"), _nodes(ex10, "y z z y z"))
        assert certificate_exits(cert, ex10) == frozenset()


class TestExtraction:
    def test_ex10_witness(self, ex10):
        witness = Lasso(_nodes(ex10, "x y y z"), _nodes(ex10, "y z z"))
        cert = extract_certificate(witness, ex10)
        assert format_certificate(cert, ex10) == "x y y z y z ~ z y z"
        assert is_valid(cert, ex10)
        assert len(cert.stem) <= 12 and len(cert.loop) <= 36
        assert fingerprint_correspondence(cert, witness, ex10)

    def test_transient_chain_without_strong_colors(self):
        game = parse_game(
            "oblige 1\nnodes: x z y\nowners: EEE\ncolors: a\n"
            "edge x z {}\nedge z y {}\nedge y y {a}\n"
            "strong: true\nweak: Inf(a)\n"
        )
        witness = Lasso(_nodes(game, "x z"), _nodes(game, "y"))
        cert = extract_certificate(witness, game)
        assert is_valid(cert, game)
        # x no está en ningún ciclo, así que el stem necesita x z
        assert format_certificate(cert, game) == "x z ~ y"
        assert len(cert.stem) <= stem_bound(game) == game.n

    def test_loop_starts_with_complete_fingerprint(self, ex10):
        witness = Lasso(_nodes(ex10, "x y y z"), _nodes(ex10, "y z z"))
        cert = extract_certificate(witness, ex10)
        huellas = prefix_fingerprints(cert.sequence, ex10)
        assert huellas[len(cert.stem)] == frozenset(ex10.strong_colors)

    def test_invalid_witness(self, ex10):
        witness = Lasso(_nodes(ex10, "x"), _nodes(ex10, "y"))
        with pytest.raises(InvalidWitnessError) as info:
            extract_certificate(witness, ex10)
        assert info.value.formula.startswith("strong")

    @PROPERTY_SETTINGS
    @given(seed=st.integers(min_value=0, max_value=10_000))
    def test_extracted_from_any_witness(self, seed):
        game = mixed_game(seed, max_nodes=5, max_colors=3)
        automata = ELAutomaton.from_arena(game.arena, And(game.strong, game.weak))
        for v in sorted(nonempty_states(automata)):
            lasso = witness_lasso(automata, v)
            witness = Lasso(lasso.stem, lasso.loop)
            cert = extract_certificate(witness, game)
            assert cert.node == (witness.stem + witness.loop)[0]
            assert is_valid(cert, game)
            assert len(cert.stem) <= stem_bound(game) == game.n * game.d
            assert len(cert.loop) <= loop_bound(game)
            assert fingerprint_correspondence(cert, witness, game)
            huellas = prefix_fingerprints(cert.sequence, game)
            assert huellas[len(cert.stem)] == huellas[-1]

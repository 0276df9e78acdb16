"""Correspondence-problem encodings and the non-solution expression."""

import pytest

from rewb import classify, member_any
from rewb.errors import BudgetError, ValidationError
from rewb.pcp import (
    MUTATION_KINDS,
    PcpInstance,
    pcp_check_solution,
    pcp_delta,
    pcp_encode,
    pcp_mutate,
)

SOLVABLE = PcpInstance((("ab", "a"), ("c", "bc")))
UNSOLVABLE = PcpInstance((("a", "aa"),))


def test_check_solution():
    assert pcp_check_solution(SOLVABLE, [1, 2])
    assert not pcp_check_solution(SOLVABLE, [2, 1])
    assert not pcp_check_solution(UNSOLVABLE, [1])
    assert not pcp_check_solution(UNSOLVABLE, [1, 1, 1])
    assert not pcp_check_solution(SOLVABLE, [])  # by convention
    with pytest.raises(ValidationError):
        pcp_check_solution(SOLVABLE, [3])


def test_encode_letter_projection():
    enc = pcp_encode(SOLVABLE, [1, 2], 1)
    letters = [letter for letter, _ in enc]
    assert letters == [
        "dollar1", "a", "b", "dollar2", "c",
        "hash", "a1", "b1", "hash",
        "dollar1", "a", "dollar2", "b", "c",
    ]
    values = [value for _, value in enc]
    # the two sides share dollar values h_j and position values 1..r
    assert values == ["h1", "1", "2", "h2", "3", "d1", "d_1_1", "d_1_1", "d2",
                      "h1", "1", "h2", "2", "3"]


def test_encode_refuses_non_solutions_without_the_flag():
    with pytest.raises(ValidationError):
        pcp_encode(SOLVABLE, [2, 1], 1)
    enc = pcp_encode(SOLVABLE, [2, 1], 1, allow_nonsolution=True)
    assert enc[0][0] == "dollar2"


def test_instance_letters_must_be_identifier_characters():
    # reserved names (hash, dollarN, aN/bN) are all multi-character, so
    # single-character instance letters cannot clash with them; what can
    # go wrong is a letter the word format cannot spell
    with pytest.raises(ValidationError):
        PcpInstance((("a1", "a"),))
    with pytest.raises(ValidationError):
        PcpInstance(())


def test_delta_level():
    delta = pcp_delta(SOLVABLE, 1)
    assert classify(delta).e_level == 2


def test_delta_rejects_the_solution_encoding():
    delta = pcp_delta(SOLVABLE, 1)
    assert not member_any(delta, pcp_encode(SOLVABLE, [1, 2], 1))


def test_delta_accepts_every_mutation_kind():
    delta = pcp_delta(SOLVABLE, 1)
    enc = pcp_encode(SOLVABLE, [1, 2], 1)
    for kind in MUTATION_KINDS:
        mutant = pcp_mutate(enc, kind, seed=9)
        assert mutant != enc
        assert member_any(delta, mutant), kind


def test_delta_accepts_well_shaped_words_of_unsolvable_instances():
    delta = pcp_delta(UNSOLVABLE, 1)
    for seq in ([1], [1, 1], [1, 1, 1]):
        enc = pcp_encode(UNSOLVABLE, seq, 1, allow_nonsolution=True)
        assert member_any(delta, enc), seq


def test_mutate_rejects_unknown_kinds_and_bad_words():
    enc = pcp_encode(SOLVABLE, [1, 2], 1)
    with pytest.raises(ValidationError):
        pcp_mutate(enc, "nope", 0)
    with pytest.raises(ValidationError):
        pcp_mutate((("a", "1"),), "letter-shape", 0)


def test_complement_budget_errors_loudly():
    with pytest.raises(BudgetError):
        pcp_delta(SOLVABLE, 1, state_budget=2)


def test_level2_delta():
    delta = pcp_delta(SOLVABLE, 2)
    assert classify(delta).e_level == 3
    encoding = pcp_encode(SOLVABLE, [1, 2], 2)
    assert not member_any(delta, encoding)
    for kind in MUTATION_KINDS:
        assert member_any(delta, pcp_mutate(encoding, kind, seed=1)), kind

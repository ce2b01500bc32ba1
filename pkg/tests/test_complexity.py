import json
import logging
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from iceberg.builders import LevelSpec, RandomSpec, build_iceberg, random_schedule
from iceberg.complexity import (SuffixAutomaton, complexity, complexity_profile,
                                empirical_frequencies, language, saturated_complexity)

from oracles import distinct_count


def test_language_examples():
    assert language("abab", 2) == {"ab", "ba"}
    assert language("aaaa", 3) == {"aaa"}
    assert language("abba", 2) == {"ab", "bb", "ba"}
    assert language("ab", 3) == set()
    assert language("ab", 0) == set()


@pytest.mark.parametrize("engine", ["naive", "fast"])
def test_profile_examples(engine):
    assert complexity_profile("abab", 4, engine).values == [2, 2, 2, 1]
    assert complexity_profile("aaaa", 4, engine).values == [1, 1, 1, 1]


def test_profile_clamps_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        prof = complexity_profile("abc", 10)
    assert prof.l_max == 3 and "clamping" in caplog.text


def test_profile_rejects_unknown_engine():
    with pytest.raises(ValueError):
        complexity_profile("ab", 2, "magic")


def test_engines_agree_on_random_words():
    rng = np.random.default_rng(7)
    for n in (1, 2, 17, 300, 2000):
        w = "".join(rng.choice(list("01"), size=n))
        fast = complexity_profile(w, engine="fast").values
        assert fast == complexity_profile(w, engine="naive").values
        if n <= 300:
            assert fast == [distinct_count(w, l) for l in range(1, n + 1)]


@settings(max_examples=200, deadline=None)
@given(st.text("012", min_size=1, max_size=60))
def test_engines_match_the_set_oracle(w):
    expected = [distinct_count(w, l) for l in range(1, len(w) + 1)]
    assert complexity_profile(w, engine="fast").values == expected
    assert complexity_profile(w, engine="naive").values == expected


@given(st.text("01", min_size=1, max_size=80))
def test_profile_bounds(w):
    prof = complexity_profile(w)
    for l in range(1, len(w) + 1):
        assert prof[l] <= min(2**l, len(w) - l + 1)


def test_automaton_membership_and_matching():
    sam = SuffixAutomaton("abcbc")
    assert "cbc" in sam and "bcb" in sam and "cc" not in sam
    assert sam.match_length("xbcbcz", 1) == 4
    assert sam.match_length("bcbc", 0, limit=2) == 2
    assert len(SuffixAutomaton("a" * 50)) == 51


def test_complexity_single_length():
    w = "0110100110010110"
    assert complexity(w, 4) == complexity(w, 4, "naive") == len(language(w, 4))


def test_csv_output():
    prof = complexity_profile("abab", 3)
    assert prof.to_csv() == "l,p_l\n1,2\n2,2\n3,2\n"
    assert prof.to_csv({1: 2, 2: 2, 3: 2}).splitlines()[0] == "l,p_l,p_bar_l"


def _saturated_oracle(w, l):
    lang = language(w, l)

    def below(v, u):  # v obtained from u by spacer replacements
        return v != u and all(a == b or b == "0" for a, b in zip(u, v))

    return sum(1 for u in lang if not any(below(u, v) for v in lang))


def test_saturated_examples():
    assert saturated_complexity("10", 1) == 1
    # L = {10, 00, 01}: 00 lies below both others
    assert language("1001", 2) == {"10", "00", "01"}
    assert saturated_complexity("1001", 2) == 2
    w = "1221312"
    assert all(saturated_complexity(w, l) == complexity(w, l) for l in range(1, 8))


@settings(max_examples=100, deadline=None)
@given(st.text("012", min_size=1, max_size=40), st.integers(1, 8))
def test_saturated_matches_oracle(w, l):
    l = min(l, len(w))
    sat = saturated_complexity(w, l)
    assert sat == _saturated_oracle(w, l)
    assert 1 <= sat <= complexity(w, l)


def test_frequencies():
    t = empirical_frequencies("abab", 2)
    assert t.freqs == {"ab": Fraction(2, 3), "ba": Fraction(1, 3)}
    assert empirical_frequencies("aaa", 1).freqs == {"a": 1}
    w = "10010110"
    assert empirical_frequencies(w, 1).freq("1") == Fraction(w.count("1"), len(w))
    d = json.loads(t.to_json())
    assert d["l"] == 2 and d["entries"][0] == {"word": "ab", "count": 2, "freq": 2 / 3}


@given(st.text("01", min_size=1, max_size=50), st.integers(1, 10))
def test_frequency_conservation(w, l):
    l = min(l, len(w))
    t = empirical_frequencies(w, l)
    assert sum(t.counts.values()) == len(w) - l + 1
    assert sum(t.freqs.values()) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(3, 8), st.integers(2, 8), st.integers(2, 8))
def test_upper_bounds_on_random_icebergs(seed, h1, q1, q2):
    rng = np.random.default_rng(seed)
    w1 = "1" + "0" + "".join(rng.choice(list("01"), size=h1 - 2))
    sched = random_schedule(RandomSpec(seed, q_list=[q1, q2]), w1, 2)
    _, w2, w3 = build_iceberg(w1, sched)
    h = len(w2)
    prof = complexity_profile(w3, h + 1)
    assert prof[h + 1] <= h**3
    assert prof[h] <= h**3 - h**2 + h


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_saturated_bound_with_spacers(seed):
    rng = np.random.default_rng(seed)
    q1, q2 = rng.integers(2, 6, size=2)
    spacers = [rng.integers(0, 3, size=q1).tolist(), rng.integers(0, 3, size=q2).tolist()]
    sched = random_schedule(RandomSpec(seed, q_list=[int(q1), int(q2)], spacers=spacers), "1101", 2)
    _, w2, w3 = build_iceberg("1101", sched)
    h = len(w2)
    assert saturated_complexity(w3, h + 1) <= h**3

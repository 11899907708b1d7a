"""Rewriting engine: orders, termination, confluence, oracle agreement."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reldiv.alphabet import paired_alphabet
from reldiv.errors import BudgetExceededError, ConfigError, RewriteError
from reldiv.groups import HeisenbergOracle, ZdOracle
from reldiv.rewrite import (
    RewritingSystem,
    ShortlexOrder,
    WreathOrder,
    free_reduction_rules,
    heisenberg_collection_rules,
    parse_rules_text,
    read_rules,
    shipped_rules_text,
    z2_abelian_rules,
)

AB = paired_alphabet("ab")
ABC = paired_alphabet("abc")


class TestShortlexOrder:
    def test_length_dominates(self):
        o = ShortlexOrder(AB)
        assert o.compare(("a", "a"), ("b",)) > 0
        assert o.compare(("b",), ("a", "a")) < 0

    def test_ties_broken_by_alphabet_position(self):
        o = ShortlexOrder(AB)
        assert o.compare(("b", "a"), ("a", "b")) > 0
        assert o.compare(("a", "b"), ("a", "b")) == 0

    @settings(max_examples=80, deadline=None)
    @given(
        u=st.lists(st.sampled_from(["a", "A", "b", "B"]), max_size=6).map(tuple),
        v=st.lists(st.sampled_from(["a", "A", "b", "B"]), max_size=6).map(tuple),
        w=st.lists(st.sampled_from(["a", "A", "b", "B"]), max_size=4).map(tuple),
    )
    def test_antisymmetry_and_concatenation(self, u, v, w):
        o = ShortlexOrder(AB)
        c = o.compare(u, v)
        assert o.compare(v, u) == -c
        if c == 0:
            assert u == v
        # compatible with concatenation on both sides when lengths agree
        if len(u) == len(v) and c != 0:
            assert o.compare(w + u, w + v) == c
            assert o.compare(u + w, v + w) == c


class TestWreathOrder:
    def _order(self):
        return WreathOrder(ABC, {"a": 3, "A": 3, "b": 2, "B": 2, "c": 1, "C": 1})

    def test_higher_level_letter_dominates_many_lower(self):
        o = self._order()
        assert o.compare(("a",), ("b",) * 9) > 0
        assert o.compare(("b",), ("c",) * 9) > 0

    def test_collection_rules_decrease(self):
        o = self._order()
        # the length-increasing commutation is still a decrease
        assert o.compare(("b", "a"), ("a", "b", "c")) > 0
        assert o.compare(("c", "a"), ("a", "c")) > 0

    def test_levels_must_cover_alphabet(self):
        with pytest.raises(ConfigError):
            WreathOrder(ABC, {"a": 1, "A": 1})

    @settings(max_examples=80, deadline=None)
    @given(
        u=st.lists(st.sampled_from(["a", "A", "b", "B", "c", "C"]), max_size=5).map(tuple),
        v=st.lists(st.sampled_from(["a", "A", "b", "B", "c", "C"]), max_size=5).map(tuple),
    )
    def test_total_order_properties(self, u, v):
        o = self._order()
        c = o.compare(u, v)
        assert c in (-1, 0, 1)
        assert o.compare(v, u) == -c
        if c == 0:
            assert u == v


class TestValidation:
    def test_non_decreasing_rule_rejected(self):
        with pytest.raises(RewriteError):
            RewritingSystem(AB, [(("a",), ("a", "a"))])

    def test_unknown_symbol_rejected(self):
        with pytest.raises(RewriteError):
            RewritingSystem(AB, [(("x",), ())])

    def test_empty_lhs_rejected(self):
        with pytest.raises(RewriteError):
            RewritingSystem(AB, [((), ("a",))])

    def test_wreath_requires_levels(self):
        with pytest.raises(ConfigError):
            RewritingSystem(AB, [], order="wreath")


class TestNormalization:
    def test_free_reduction(self):
        rs = free_reduction_rules(2)
        assert rs.normalize(("a", "A", "b")) == ("b",)
        assert rs.normalize(("a", "b", "B", "A")) == ()
        assert rs.is_irreducible(("a", "b"))
        assert not rs.is_irreducible(("a", "A"))

    def test_abelian_sorting(self):
        rs = z2_abelian_rules()
        assert rs.normalize(("b", "a", "b", "A")) == ("b", "b")
        assert rs.normalize(("b", "a")) == ("a", "b")

    def test_collection_single_step(self):
        rs = heisenberg_collection_rules()
        assert rs.normalize(("b", "a")) == ("a", "b", "c")

    def test_step_budget(self):
        rs = heisenberg_collection_rules()
        long_word = ("b",) * 12 + ("a",) * 12
        with pytest.raises(BudgetExceededError):
            rs.normalize(long_word, step_budget=5)

    def test_termination_on_random_words(self):
        rng = random.Random(7)
        rs = heisenberg_collection_rules()
        syms = list(rs.alphabet.symbols)
        for _ in range(50):
            w = tuple(rng.choice(syms) for _ in range(rng.randint(0, 16)))
            nf = rs.normalize(w)
            assert rs.is_irreducible(nf)


class TestConfluence:
    @pytest.mark.parametrize(
        "factory,pairs",
        [(free_reduction_rules, 4), (z2_abelian_rules, 12), (heisenberg_collection_rules, 38)],
        ids=["free-reduction", "z2-abelian", "heisenberg-collection"],
    )
    def test_shipped_systems_confluent(self, factory, pairs):
        rep = factory().critical_pairs()
        assert rep.confluent is True
        assert rep.unresolved == []
        assert rep.pairs_checked == pairs
        assert not rep.budget_exhausted

    def test_non_confluent_system_detected(self):
        rs = RewritingSystem(AB, [(("a", "b"), ("a",)), (("b", "a"), ("b",))])
        rep = rs.critical_pairs()
        assert rep.confluent is False
        assert rep.unresolved
        bad = rep.unresolved[0]
        assert bad["left_normal"] != bad["right_normal"]

    def test_pair_budget(self):
        rep = heisenberg_collection_rules().critical_pairs(pair_budget=3)
        assert rep.confluent is None
        assert rep.budget_exhausted


class TestOracleAgreement:
    def test_heisenberg_normal_forms_match_oracle(self):
        rng = random.Random(20260823)
        rs = heisenberg_collection_rules()
        oracle = HeisenbergOracle()
        syms = list(rs.alphabet.symbols)
        for _ in range(300):
            w = [rng.choice(syms) for _ in range(rng.randint(0, 14))]
            k, l, p = oracle.word_to_element(w)
            expected = (
                ("a",) * k if k >= 0 else ("A",) * -k
            ) + (("b",) * l if l >= 0 else ("B",) * -l) + (
                ("c",) * p if p >= 0 else ("C",) * -p
            )
            assert rs.normalize(w) == expected

    def test_z2_normal_forms_match_oracle(self):
        rng = random.Random(5)
        rs = z2_abelian_rules()
        oracle = ZdOracle(2)
        syms = list(rs.alphabet.symbols)
        for _ in range(200):
            w = [rng.choice(syms) for _ in range(rng.randint(0, 12))]
            x, y = oracle.word_to_element(w)
            expected = (("a",) * x if x >= 0 else ("A",) * -x) + (
                ("b",) * y if y >= 0 else ("B",) * -y
            )
            assert rs.normalize(w) == expected


class TestRulesFiles:
    def test_shipped_roundtrip_preserves_confluence(self, tmp_path):
        for name in ("free-reduction", "z2-abelian", "heisenberg-collection"):
            text = shipped_rules_text(name)
            rs = parse_rules_text(text)
            assert rs.critical_pairs().confluent is True
            path = tmp_path / f"{name}.rules"
            path.write_text(text)
            rs2 = read_rules(path)
            assert rs2.rules == rs.rules

    def test_parse_errors_are_config_errors(self):
        with pytest.raises(ConfigError):
            parse_rules_text("rules without header\n")

    def test_inline_comments_and_identity_rhs(self):
        rs = parse_rules_text(
            "alphabet: a/A\n"
            "order: shortlex\n"
            "a A -> 1  # cancel\n"
            "A a ->\n"
        )
        assert len(rs.rules) == 2
        assert rs.normalize(("a", "A")) == ()

"""String rewriting over group alphabets: normalization and confluence checks.

Systems here are terminating by construction: every rule must strictly
decrease a well-founded reduction order fixed at construction time.  Two
orders are available:

``shortlex``
    length first, then the alphabet order letter by letter.

``wreath``
    letters carry integer levels; words compare by their subword of
    highest-level letters (shortlex), then by the gap words between those
    letters, recursively.  This admits collection rules such as
    ``b a -> a b c`` whose right side is longer but pushes high letters left.

Completion is out of scope; ``critical_pairs`` only reports whether the
given rules resolve their overlaps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .alphabet import GeneratorAlphabet, paired_alphabet
from .errors import BudgetExceededError, ConfigError, RewriteError

Word = tuple[str, ...]

DEFAULT_STEP_BUDGET = 200_000
DEFAULT_PAIR_BUDGET = 100_000


class ShortlexOrder:
    name = "shortlex"

    def __init__(self, alphabet: GeneratorAlphabet):
        self._rank = {s: i for i, s in enumerate(alphabet.symbols)}

    def key(self, w: Word):
        return (len(w), tuple(self._rank[s] for s in w))

    def compare(self, u: Word, v: Word) -> int:
        ku, kv = self.key(u), self.key(v)
        return (ku > kv) - (ku < kv)


class WreathOrder:
    """Wreath-product style order driven by a letter level map.

    Well founded (induction on the highest level present) and compatible
    with concatenation, which makes it a valid reduction order; the tests
    probe both properties on random words.
    """

    name = "wreath"

    def __init__(self, alphabet: GeneratorAlphabet, levels: dict[str, int]):
        if set(levels) != set(alphabet.symbols):
            raise ConfigError("wreath levels must cover exactly the alphabet")
        if any(l < 1 for l in levels.values()):
            raise ConfigError("wreath levels must be positive")
        self.levels = dict(levels)
        self._rank = {s: i for i, s in enumerate(alphabet.symbols)}

    def _split(self, w: Word, level: int) -> tuple[list[str], list[Word]]:
        top: list[str] = []
        gaps: list[list[str]] = [[]]
        for s in w:
            if self.levels[s] == level:
                top.append(s)
                gaps.append([])
            else:
                gaps[-1].append(s)
        return top, [tuple(g) for g in gaps]

    def compare(self, u: Word, v: Word) -> int:
        if u == v:
            return 0
        if not u and not v:
            return 0
        level = max(self.levels[s] for s in u + v)
        utop, ugaps = self._split(u, level)
        vtop, vgaps = self._split(v, level)
        ku = (len(utop), tuple(self._rank[s] for s in utop))
        kv = (len(vtop), tuple(self._rank[s] for s in vtop))
        if ku != kv:
            return 1 if ku > kv else -1
        for ug, vg in zip(ugaps, vgaps):
            c = self.compare(ug, vg)
            if c:
                return c
        return 0


@dataclass
class ConfluenceReport:
    confluent: Optional[bool]  # None when the pair budget ran out
    pairs_checked: int
    unresolved: list[dict] = field(default_factory=list)
    budget_exhausted: bool = False

    def to_jsonable(self) -> dict:
        return {
            "confluent": self.confluent,
            "pairs_checked": self.pairs_checked,
            "unresolved": self.unresolved,
            "budget_exhausted": self.budget_exhausted,
        }


class RewritingSystem:
    def __init__(
        self,
        alphabet: GeneratorAlphabet,
        rules: list[tuple[Word, Word]],
        order: str = "shortlex",
        levels: Optional[dict[str, int]] = None,
    ):
        self.alphabet = alphabet
        if order == "shortlex":
            self.order = ShortlexOrder(alphabet)
        elif order == "wreath":
            if levels is None:
                raise ConfigError("wreath order needs a levels map")
            self.order = WreathOrder(alphabet, levels)
        else:
            raise ConfigError(f"unknown order {order!r}")
        self.rules: list[tuple[Word, Word]] = []
        for lhs, rhs in rules:
            lhs, rhs = tuple(lhs), tuple(rhs)
            for s in lhs + rhs:
                if s not in alphabet.symbols:
                    raise RewriteError(f"rule uses unknown symbol {s!r}")
            if not lhs:
                raise RewriteError("rule left side must be nonempty")
            if self.order.compare(lhs, rhs) <= 0:
                raise RewriteError(
                    f"rule {' '.join(lhs)} -> {' '.join(rhs) or '1'} does not "
                    f"decrease the {self.order.name} order"
                )
            self.rules.append((lhs, rhs))
        self._max_lhs = max((len(l) for l, _ in self.rules), default=1)

    def normalize(self, word: Word | list[str], step_budget: int = DEFAULT_STEP_BUDGET) -> Word:
        """Rewrite to the unique irreducible word (unique when confluent).

        Strategy: leftmost redex, first matching rule in declaration order.
        Termination is guaranteed by the reduction order; the budget guards
        against misuse with very long inputs.
        """
        w = list(word)
        steps = 0
        i = 0
        while i < len(w):
            matched = False
            for lhs, rhs in self.rules:
                n = len(lhs)
                if tuple(w[i:i + n]) == lhs:
                    w[i:i + n] = list(rhs)
                    steps += 1
                    if steps > step_budget:
                        raise BudgetExceededError("normalize step budget exceeded")
                    i = max(0, i - self._max_lhs + 1)
                    matched = True
                    break
            if not matched:
                i += 1
        return tuple(w)

    def is_irreducible(self, word: Word) -> bool:
        w = tuple(word)
        for i in range(len(w)):
            for lhs, _ in self.rules:
                if w[i:i + len(lhs)] == lhs:
                    return False
        return True

    def critical_pairs(self, pair_budget: int = DEFAULT_PAIR_BUDGET) -> ConfluenceReport:
        """Check resolution of all overlap and containment superpositions."""
        unresolved: list[dict] = []
        checked = 0
        for i, (li, ri) in enumerate(self.rules):
            for j, (lj, rj) in enumerate(self.rules):
                # proper overlap: a suffix of li equals a prefix of lj
                for k in range(1, min(len(li), len(lj))):
                    if li[-k:] != lj[:k]:
                        continue
                    word = li + lj[k:]
                    left = ri + lj[k:]
                    right = li[:-k] + rj
                    checked += 1
                    if checked > pair_budget:
                        return ConfluenceReport(None, checked - 1, unresolved, True)
                    self._resolve(word, left, right, i, j, len(li) - k, unresolved)
                # containment: lj occurs inside li
                if len(lj) <= len(li):
                    for p in range(0, len(li) - len(lj) + 1):
                        if i == j and p == 0 and len(li) == len(lj):
                            continue
                        if li[p:p + len(lj)] != lj:
                            continue
                        word = li
                        left = ri
                        right = li[:p] + rj + li[p + len(lj):]
                        checked += 1
                        if checked > pair_budget:
                            return ConfluenceReport(None, checked - 1, unresolved, True)
                        self._resolve(word, left, right, i, j, p, unresolved)
        return ConfluenceReport(not unresolved, checked, unresolved, False)

    def _resolve(self, word, left, right, i, j, pos, unresolved) -> None:
        nl = self.normalize(left)
        nr = self.normalize(right)
        if nl != nr:
            unresolved.append(
                {
                    "word": " ".join(word),
                    "left_normal": " ".join(nl) or "1",
                    "right_normal": " ".join(nr) or "1",
                    "rules": [i, j],
                    "position": pos,
                }
            )


# ---------------------------------------------------------------------------
# rules file format


def parse_rules_text(text: str) -> RewritingSystem:
    """Parse the plain rules format.

    Header lines: ``alphabet: a/A b/B s1`` (slash pairs an inverse, a bare
    token is its own inverse), optional ``order: shortlex|wreath`` and, for
    wreath, ``levels: a:3 A:3 ...``.  Every other nonempty line is a rule
    ``lhs -> rhs`` with whitespace separated tokens; an empty right side
    (or the token ``1``) is the empty word.
    """
    alphabet: Optional[GeneratorAlphabet] = None
    order = "shortlex"
    levels: Optional[dict[str, int]] = None
    rules: list[tuple[Word, Word]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("alphabet:"):
            symbols: list[str] = []
            inverse: dict[str, str] = {}
            for token in line.split(":", 1)[1].split():
                if "/" in token:
                    a, b = token.split("/", 1)
                    symbols.extend([a, b])
                    inverse[a] = b
                    inverse[b] = a
                else:
                    symbols.append(token)
                    inverse[token] = token
            alphabet = GeneratorAlphabet(tuple(symbols), inverse)
            continue
        if low.startswith("order:"):
            order = line.split(":", 1)[1].strip().lower()
            continue
        if low.startswith("levels:"):
            levels = {}
            for token in line.split(":", 1)[1].split():
                if ":" not in token:
                    raise ConfigError(f"line {lineno}: level token {token!r} must be sym:int")
                sym, lvl = token.rsplit(":", 1)
                levels[sym] = int(lvl)
            continue
        if "->" not in line:
            raise ConfigError(f"line {lineno}: expected 'lhs -> rhs', got {raw!r}")
        if alphabet is None:
            raise ConfigError(f"line {lineno}: rules before the alphabet header")
        lhs_text, rhs_text = line.split("->", 1)
        lhs = tuple(lhs_text.split())
        rhs = tuple(t for t in rhs_text.split() if t != "1")
        rules.append((lhs, rhs))
    if alphabet is None:
        raise ConfigError("rules file has no alphabet header")
    return RewritingSystem(alphabet, rules, order=order, levels=levels)


def read_rules(path) -> RewritingSystem:
    from pathlib import Path

    return parse_rules_text(Path(path).read_text())


# ---------------------------------------------------------------------------
# shipped systems


def free_reduction_rules(rank: int = 2) -> RewritingSystem:
    letters = "".join(chr(ord("a") + i) for i in range(rank))
    alphabet = paired_alphabet(letters)
    rules = []
    for s in alphabet.symbols:
        rules.append(((s, alphabet.inverse[s]), ()))
    return RewritingSystem(alphabet, rules)


def z2_abelian_rules() -> RewritingSystem:
    alphabet = paired_alphabet("ab")
    rules: list[tuple[Word, Word]] = []
    for s in alphabet.symbols:
        rules.append(((s, alphabet.inverse[s]), ()))
    for hi in ("b", "B"):
        for lo in ("a", "A"):
            rules.append(((hi, lo), (lo, hi)))
    return RewritingSystem(alphabet, rules)


def heisenberg_collection_rules() -> RewritingSystem:
    """Collection to the a^k b^l c^p normal form.

    The commutation rules lengthen words (``b a -> a b c``), which no
    shortlex order permits; central powers are genuinely longer than
    geodesics here.  The wreath order with levels a > b > c orients the
    whole system.
    """
    alphabet = paired_alphabet("abc")
    levels = {"a": 3, "A": 3, "b": 2, "B": 2, "c": 1, "C": 1}
    rules: list[tuple[Word, Word]] = []
    for s in alphabet.symbols:
        rules.append(((s, alphabet.inverse[s]), ()))
    rules.extend(
        [
            (("b", "a"), ("a", "b", "c")),
            (("b", "A"), ("A", "b", "C")),
            (("B", "a"), ("a", "B", "C")),
            (("B", "A"), ("A", "B", "c")),
        ]
    )
    for z in ("c", "C"):
        for s in ("a", "A", "b", "B"):
            rules.append(((z, s), (s, z)))
    return RewritingSystem(alphabet, rules, order="wreath", levels=levels)


SHIPPED_SYSTEMS = {
    "free-reduction": free_reduction_rules,
    "z2-abelian": z2_abelian_rules,
    "heisenberg-collection": heisenberg_collection_rules,
}


def shipped_rules_text(name: str) -> str:
    """Render a shipped system in the rules file format."""
    if name not in SHIPPED_SYSTEMS:
        raise ConfigError(f"unknown shipped system {name!r}; have {sorted(SHIPPED_SYSTEMS)}")
    system = SHIPPED_SYSTEMS[name]()
    lines = [f"# {name} rewriting system"]
    tokens = []
    done = set()
    for s in system.alphabet.symbols:
        if s in done:
            continue
        inv = system.alphabet.inverse[s]
        if inv == s:
            tokens.append(s)
            done.add(s)
        else:
            tokens.append(f"{s}/{inv}")
            done.update((s, inv))
    lines.append("alphabet: " + " ".join(tokens))
    lines.append(f"order: {system.order.name}")
    if isinstance(system.order, WreathOrder):
        lines.append(
            "levels: " + " ".join(f"{s}:{l}" for s, l in sorted(system.order.levels.items()))
        )
    for lhs, rhs in system.rules:
        lines.append(" ".join(lhs) + " -> " + (" ".join(rhs) if rhs else "1"))
    return "\n".join(lines) + "\n"

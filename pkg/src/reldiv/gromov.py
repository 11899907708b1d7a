"""Doubly exponential cyclic-subgroup distortion, certified symbolically.

In the group with relations ``b a b^-1 = a^2`` and ``c b c^-1 = b^2``
(generators a, b, c), conjugation by c doubles b-exponents and conjugation
by b doubles a-exponents, so the commutator-style word

    c^n b c^-n  a  c^n b^-1 c^-n

equals ``a^(2^(2^n))`` while using only ``4n + 3`` letters.  Band lengths
in that subgroup therefore grow at least like ``2^(2^r)``: distortion
admits no recursive bound in general.

Group elements of size 2^(2^n) overflow any ball atlas immediately, so the
certificate works on symbolic syllable words ``[(base, exponent), ...]``
and rewrites them with exactly two exponent-level laws until the word is a
single ``a`` power.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, ConfigError

Syllables = list[tuple[str, int]]

MAX_TOWER_HEIGHT = 6  # 2^(2^6) has ~2 * 10^19 digits of exponent; plenty

_BASES = ("a", "b", "c")
_LETTER_TO_SYLLABLE = {
    "a": ("a", 1),
    "A": ("a", -1),
    "b": ("b", 1),
    "B": ("b", -1),
    "c": ("c", 1),
    "C": ("c", -1),
}


def syllables_from_letters(letters: list[str]) -> Syllables:
    out: Syllables = []
    for s in letters:
        if s not in _LETTER_TO_SYLLABLE:
            raise ConfigError(f"unknown letter {s!r}; alphabet is a A b B c C")
        base, e = _LETTER_TO_SYLLABLE[s]
        out.append((base, e))
    return merge_syllables(out)


def merge_syllables(word: Syllables) -> Syllables:
    """Combine adjacent equal-base syllables and drop zero exponents."""
    out: Syllables = []
    for base, e in word:
        if base not in _BASES:
            raise ConfigError(f"unknown syllable base {base!r}")
        if e == 0:
            continue
        if out and out[-1][0] == base:
            e += out[-1][1]
            out.pop()
            if e == 0:
                continue
        out.append((base, e))
    return out


def _peel_step(word: Syllables) -> Syllables | None:
    """Apply one doubling law at the leftmost site, or return None.

    Laws (direct consequences of the two defining relations):

        c^i b^k c^j -> c^(i-1) b^(2k) c^(j+1)   for i >= 1, j <= -1
        b^i a^k b^j -> b^(i-1) a^(2k) b^(j+1)   for i >= 1, j <= -1
    """
    for upper, lower in (("c", "b"), ("b", "a")):
        for t in range(len(word) - 2):
            (b0, e0), (b1, e1), (b2, e2) = word[t], word[t + 1], word[t + 2]
            if b0 == upper and b1 == lower and b2 == upper and e0 >= 1 and e2 <= -1:
                new = word[:t] + [(upper, e0 - 1), (lower, 2 * e1), (upper, e2 + 1)] + word[t + 3:]
                return merge_syllables(new)
    return None


def peel_normal_form(word: Syllables, step_budget: int = 100_000) -> Syllables:
    """Apply the doubling laws until none fires."""
    w = merge_syllables(word)
    steps = 0
    while True:
        nxt = _peel_step(w)
        if nxt is None:
            return w
        w = nxt
        steps += 1
        if steps > step_budget:
            raise BudgetExceededError("syllable rewriting budget exceeded")


@dataclass(frozen=True)
class TowerWitness:
    n: int
    letters: tuple[str, ...]
    word_length: int          # letters spent, one a kept aside as the seed
    target_exponent: int      # the witness equals a ** target_exponent
    verified: bool

    def summary(self) -> dict:
        return {
            "n": self.n,
            "word": " ".join(self.letters),
            "word_length": self.word_length,
            "target_exponent_digits": len(str(self.target_exponent)),
            "verified": self.verified,
        }


def tower_witness(n: int, max_n: int = MAX_TOWER_HEIGHT) -> TowerWitness:
    """Build and certify the length-(4n+3) word equal to a^(2^(2^n))."""
    if n < 0:
        raise ConfigError("tower height must be nonnegative")
    if n > max_n:
        raise ConfigError(f"tower height {n} exceeds the cap {max_n}")
    letters = ("c",) * n + ("b",) + ("C",) * n + ("a",) + ("c",) * n + ("B",) + ("C",) * n
    target = 2 ** (2 ** n)
    normal = peel_normal_form(syllables_from_letters(list(letters)))
    verified = normal == [("a", target)]
    return TowerWitness(
        n=n,
        letters=letters,
        word_length=len(letters) - 1,
        target_exponent=target,
        verified=verified,
    )


def distortion_lower_bound_table(max_n: int) -> list[dict]:
    """Certified (radius, subgroup length) pairs along the witness family."""
    rows = []
    for n in range(0, max_n + 1):
        w = tower_witness(n)
        if not w.verified:
            raise ConfigError(f"tower witness failed verification at n={n}")
        rows.append(
            {
                "n": n,
                "radius": w.word_length + 1,
                "subgroup_exponent": w.target_exponent,
                "word": " ".join(w.letters),
            }
        )
    return rows

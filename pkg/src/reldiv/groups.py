"""Group oracles: canonical element encodings plus multiplication.

Every oracle exposes its elements through a canonical, hashable encoding, so
equality of encodings is equality in the group.  Integer-lattice style groups
encode as tuples of Python ints (arbitrary precision); word-hyperbolic style
groups encode as ``bytes`` of generator indices.
"""

from __future__ import annotations

import hashlib
import json
from typing import Optional

from .alphabet import GeneratorAlphabet, format_word, paired_alphabet
from .errors import ConfigError

Element = object  # tuple[int, ...] or bytes depending on the family


def describe_digest(desc: dict) -> str:
    blob = json.dumps(desc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class GroupOracle:
    """Base interface.  Subclasses fix an encoding and the group law."""

    alphabet: GeneratorAlphabet
    identity: Element
    #: serialization codec for atlas files: "intvec" or "word"
    codec: str = "intvec"

    def right_multiply(self, g: Element, symbol: str) -> Element:
        return self.right_multiply_index(g, self.alphabet.index(symbol))

    def right_multiply_index(self, g: Element, i: int) -> Element:
        raise NotImplementedError

    def multiply(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inverse(self, g: Element) -> Element:
        raise NotImplementedError

    def exact_word_length(self, g: Element) -> Optional[int]:
        """Word length from a closed formula, or None when only BFS knows."""
        return None

    def word_to_element(self, labels: list[str] | tuple[str, ...]) -> Element:
        g = self.identity
        for s in labels:
            g = self.right_multiply(g, s)
        return g

    def power(self, g: Element, n: int) -> Element:
        out = self.identity
        step = g if n >= 0 else self.inverse(g)
        for _ in range(abs(n)):
            out = self.multiply(out, step)
        return out

    def format_element(self, g: Element) -> str:
        raise NotImplementedError

    def element_jsonable(self, g: Element):
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    @property
    def digest(self) -> str:
        return describe_digest(self.describe())


class ZdOracle(GroupOracle):
    """Free abelian group of rank d, generators along the coordinate axes.

    Elements are integer tuples; word length is the L1 norm.
    """

    codec = "intvec"

    def __init__(self, d: int):
        if not 1 <= d <= 26:
            raise ConfigError("rank d must be between 1 and 26")
        self.d = d
        letters = "".join(chr(ord("a") + i) for i in range(d))
        self.alphabet = paired_alphabet(letters)
        self.identity = (0,) * d
        # symbol index i acts on coordinate i // 2 with sign +1 / -1
        self._moves = []
        for i in range(2 * d):
            coord, sign = divmod(i, 2)
            self._moves.append((coord, 1 if sign == 0 else -1))

    def right_multiply_index(self, g, i):
        coord, delta = self._moves[i]
        return g[:coord] + (g[coord] + delta,) + g[coord + 1:]

    def multiply(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g):
        return tuple(-a for a in g)

    def exact_word_length(self, g):
        return sum(abs(a) for a in g)

    def format_element(self, g):
        return "(" + ",".join(str(a) for a in g) + ")"

    def element_jsonable(self, g):
        return list(g)

    def describe(self):
        return {"family": "zd", "d": self.d}


class HeisenbergOracle(GroupOracle):
    """Discrete Heisenberg group with normal form a^k b^l c^p.

    c is the central commutator of b and a.  Right multiplication acts on the
    normal-form triple (k, l, p) by

        * a:   (k+1, l, p+l)        * a^-1: (k-1, l, p-l)
        * b:   (k, l+1, p)          * b^-1: (k, l-1, p)
        * c:   (k, l, p+1)          * c^-1: (k, l, p-1)

    Exponents are Python ints, so deep central powers never overflow.  The
    generating set is {a, b, c} by default; ``include_c=False`` drops the
    central generator from the alphabet (the group is unchanged).
    """

    codec = "intvec"

    def __init__(self, include_c: bool = True):
        self.include_c = include_c
        self.alphabet = paired_alphabet("abc" if include_c else "ab")
        self.identity = (0, 0, 0)

    def right_multiply_index(self, g, i):
        k, l, p = g
        if i == 0:
            return (k + 1, l, p + l)
        if i == 1:
            return (k - 1, l, p - l)
        if i == 2:
            return (k, l + 1, p)
        if i == 3:
            return (k, l - 1, p)
        if i == 4:
            return (k, l, p + 1)
        if i == 5:
            return (k, l, p - 1)
        raise IndexError(i)

    def multiply(self, g, h):
        k, l, p = g
        k2, l2, p2 = h
        return (k + k2, l + l2, p + p2 + l * k2)

    def inverse(self, g):
        k, l, p = g
        return (-k, -l, -p + l * k)

    def central_power(self, p: int) -> Element:
        return (0, 0, p)

    def format_element(self, g):
        return "(" + ",".join(str(a) for a in g) + ")"

    def element_jsonable(self, g):
        return list(g)

    def describe(self):
        return {"family": "heisenberg", "include_c": self.include_c}


class FreeGroupOracle(GroupOracle):
    """Free group of finite rank; elements are freely reduced words.

    Encoded as bytes of symbol indices (even = positive letter, odd = its
    inverse), so equality is byte equality and word length is len().
    """

    codec = "word"

    def __init__(self, rank: int):
        if not 1 <= rank <= 26:
            raise ConfigError("rank must be between 1 and 26")
        self.rank = rank
        letters = "".join(chr(ord("a") + i) for i in range(rank))
        self.alphabet = paired_alphabet(letters)
        self.identity = b""
        n = len(self.alphabet)
        self._inv = bytes(self.alphabet.inverse_index(i) for i in range(n))

    def right_multiply_index(self, g, i):
        if g and g[-1] == self._inv[i]:
            return g[:-1]
        return g + bytes([i])

    def multiply(self, g, h):
        out = g
        for i in h:
            out = self.right_multiply_index(out, i)
        return out

    def inverse(self, g):
        return bytes(self._inv[i] for i in reversed(g))

    def exact_word_length(self, g):
        return len(g)

    def format_element(self, g):
        return format_word(self.alphabet, [self.alphabet.symbols[i] for i in g])

    def element_jsonable(self, g):
        return list(g)

    def describe(self):
        return {"family": "free", "rank": self.rank}


class ExtendedGeneratorOracle(GroupOracle):
    """Wrap an oracle with extra generators given as words in the old ones.

    Canonical encodings are unchanged; only the alphabet (hence the word
    metric) grows.  Word lengths in the extended metric have no formula and
    come from ball BFS.
    """

    def __init__(self, base: GroupOracle, extra: dict[str, list[str]]):
        self.base = base
        self.extra_words = dict(extra)
        self.codec = base.codec
        symbols = list(base.alphabet.symbols)
        inverse = dict(base.alphabet.inverse)
        self._extra_elements: list[Element] = []
        for label, word in extra.items():
            inv_label = label + "'"
            if label in symbols or inv_label in symbols:
                raise ConfigError(f"extension label {label!r} collides with alphabet")
            g = base.word_to_element(word)
            symbols.extend([label, inv_label])
            inverse[label] = inv_label
            inverse[inv_label] = label
            self._extra_elements.extend([g, base.inverse(g)])
        self.alphabet = GeneratorAlphabet(tuple(symbols), inverse)
        self.identity = base.identity
        self._n_base = len(base.alphabet)

    def right_multiply_index(self, g, i):
        if i < self._n_base:
            return self.base.right_multiply_index(g, i)
        return self.base.multiply(g, self._extra_elements[i - self._n_base])

    def multiply(self, g, h):
        return self.base.multiply(g, h)

    def inverse(self, g):
        return self.base.inverse(g)

    def exact_word_length(self, g):
        return None

    def format_element(self, g):
        return self.base.format_element(g)

    def element_jsonable(self, g):
        return self.base.element_jsonable(g)

    def describe(self):
        return {
            "family": "extended",
            "base": self.base.describe(),
            "extra": {k: list(v) for k, v in self.extra_words.items()},
        }

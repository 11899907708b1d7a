"""Right-angled Coxeter groups over a finite commutation graph.

Generators are involutions; two generators commute exactly when they are
adjacent in the defining graph.  Every element has a unique shortlex-minimal
representative word, reachable from any representative by deleting adjacent
equal letters and swapping adjacent commuting letters.

Two normal-form routines live here:

``normal_form``
    letter-by-letter reduction that keeps the word geodesic and
    lexicographically least at every step.  Linear-ish per letter, used by
    the oracle for ball enumeration.

``normal_form_exhaustive``
    closure of the word under the two local moves, returning the shortlex
    least word visited.  Exponential, only for desk-scale words; serves as
    the correctness oracle for ``normal_form`` in the tests.
"""

from __future__ import annotations

from .alphabet import GeneratorAlphabet, format_word, involutive_alphabet
from .errors import ConfigError
from .groups import GroupOracle


class CommutationGraph:
    """Vertices are generator labels; edges mark commuting pairs."""

    def __init__(self, labels: list[str] | tuple[str, ...], edges: list[tuple[str, str]]):
        if len(set(labels)) != len(labels):
            raise ConfigError("duplicate generator labels")
        self.labels = tuple(labels)
        self._index = {s: i for i, s in enumerate(self.labels)}
        n = len(self.labels)
        self.adj = [[False] * n for _ in range(n)]
        for u, v in edges:
            if u not in self._index or v not in self._index:
                raise ConfigError(f"edge ({u},{v}) uses unknown labels")
            if u == v:
                raise ConfigError(f"self-loop at {u}")
            i, j = self._index[u], self._index[v]
            self.adj[i][j] = self.adj[j][i] = True
        self.edge_list = sorted(
            (min(self._index[u], self._index[v]), max(self._index[u], self._index[v]))
            for u, v in edges
        )

    def commute(self, i: int, j: int) -> bool:
        return self.adj[i][j]


def cycle_graph(labels: list[str]) -> CommutationGraph:
    n = len(labels)
    edges = [(labels[i], labels[(i + 1) % n]) for i in range(n)]
    return CommutationGraph(labels, edges)


def pentagon_graph() -> CommutationGraph:
    """The 5-cycle commutation graph on s1..s5.

    The resulting group is one-ended and word hyperbolic, which makes it the
    stock example for exponential lower divergence.
    """
    return cycle_graph(["s1", "s2", "s3", "s4", "s5"])


def append_letter(graph: CommutationGraph, word: bytes, s: int) -> bytes:
    """Shortlex normal form of (word * s), given word already in normal form.

    Scan from the right across letters commuting with s.  Meeting an equal
    letter cancels it (involution); the remainder is still least because the
    deleted letter commuted with everything after it, so it never constrained
    the order of the others.  Otherwise insert s at the least position it can
    occupy.
    """
    n = len(word)
    adj = graph.adj[s]
    j_min = n
    for i in range(n - 1, -1, -1):
        t = word[i]
        if t == s:
            return word[:i] + word[i + 1:]
        if not adj[t]:
            break
        j_min = i
    insert_at = n
    for j in range(j_min, n):
        if word[j] > s:
            insert_at = j
            break
    return word[:insert_at] + bytes([s]) + word[insert_at:]


def normal_form(graph: CommutationGraph, letters: list[int] | bytes) -> bytes:
    out = b""
    for s in letters:
        out = append_letter(graph, out, s)
    return out


def normal_form_exhaustive(graph: CommutationGraph, letters: list[int] | bytes) -> bytes:
    """Shortlex least word in the closure under {delete ss, swap commuting}."""
    start = bytes(letters)
    seen = {start}
    stack = [start]
    best = start
    while stack:
        w = stack.pop()
        if (len(w), w) < (len(best), best):
            best = w
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a == b:
                nxt = w[:i] + w[i + 2:]
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
            elif graph.commute(a, b):
                nxt = w[:i] + bytes([b, a]) + w[i + 2:]
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return best


class RacgOracle(GroupOracle):
    """Oracle for a right-angled Coxeter group.

    Elements encode as their shortlex-minimal word, as bytes of generator
    indices; word length is therefore len() of the encoding.
    """

    codec = "word"

    def __init__(self, graph: CommutationGraph):
        self.graph = graph
        self.alphabet = involutive_alphabet(graph.labels)
        self.identity = b""

    def right_multiply_index(self, g, i):
        return append_letter(self.graph, g, i)

    def multiply(self, g, h):
        out = g
        for s in h:
            out = append_letter(self.graph, out, s)
        return out

    def inverse(self, g):
        # generators are involutions, so the inverse word is the reversal
        return normal_form(self.graph, bytes(reversed(g)))

    def exact_word_length(self, g):
        return len(g)

    def normal_form_word(self, labels: list[str]) -> list[str]:
        """Shortlex normal form at the level of label lists."""
        idx = [self.alphabet.index(s) for s in labels]
        return [self.alphabet.symbols[i] for i in normal_form(self.graph, idx)]

    def format_element(self, g):
        return format_word(self.alphabet, [self.alphabet.symbols[i] for i in g])

    def element_jsonable(self, g):
        return list(g)

    def describe(self):
        return {
            "family": "racg",
            "labels": list(self.graph.labels),
            "edges": self.graph.edge_list,
        }

"""Generator alphabets: ordered symbols with a formal inversion."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError


@dataclass(frozen=True)
class GeneratorAlphabet:
    """An ordered list of generator labels closed under formal inversion.

    ``symbols`` fixes the shortlex order used everywhere downstream.  The
    ``inverse`` map must be an involution on the symbol set; a symbol may be
    its own inverse (Coxeter generators).
    """

    symbols: tuple[str, ...]
    inverse: dict[str, str] = field(compare=False)

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise ConfigError("duplicate symbols in alphabet")
        if set(self.inverse) != set(self.symbols):
            raise ConfigError("inverse map must cover exactly the symbol set")
        for s, t in self.inverse.items():
            if t not in self.inverse or self.inverse[t] != s:
                raise ConfigError(f"inverse map is not an involution at {s!r}")

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise ConfigError(f"unknown generator label {symbol!r}") from None

    def inverse_index(self, i: int) -> int:
        return self.index(self.inverse[self.symbols[i]])

    @property
    def single_char(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)


def paired_alphabet(letters: str) -> GeneratorAlphabet:
    """Alphabet with lowercase letters and uppercase formal inverses.

    ``paired_alphabet("ab")`` gives symbols (a, A, b, B) with a<->A, b<->B.
    """
    symbols: list[str] = []
    inverse: dict[str, str] = {}
    for ch in letters:
        up = ch.upper()
        if up == ch:
            raise ConfigError(f"paired alphabet needs lowercase letters, got {ch!r}")
        symbols.extend([ch, up])
        inverse[ch] = up
        inverse[up] = ch
    return GeneratorAlphabet(tuple(symbols), inverse)


def involutive_alphabet(labels: list[str] | tuple[str, ...]) -> GeneratorAlphabet:
    """Alphabet where every generator is its own inverse."""
    return GeneratorAlphabet(tuple(labels), {s: s for s in labels})


def parse_word(alphabet: GeneratorAlphabet, text: str) -> list[str]:
    """Parse a word into generator labels.

    Tokens are whitespace separated.  As a convenience for single-character
    alphabets, an unspaced string such as ``"aabA"`` is split per character.
    The empty string is the empty word.
    """
    text = text.strip()
    if not text:
        return []
    tokens = text.split()
    if len(tokens) == 1 and alphabet.single_char and tokens[0] not in alphabet.symbols:
        tokens = list(tokens[0])
    for t in tokens:
        if t not in alphabet.symbols:
            raise ConfigError(f"unknown generator label {t!r}")
    return tokens


def format_word(alphabet: GeneratorAlphabet, labels: list[str] | tuple[str, ...]) -> str:
    if not labels:
        return "e"
    if alphabet.single_char:
        return "".join(labels)
    return " ".join(labels)


def invert_word(alphabet: GeneratorAlphabet, labels: list[str]) -> list[str]:
    return [alphabet.inverse[s] for s in reversed(labels)]

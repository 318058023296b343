import re
import unicodedata

SC_TOKEN = "<sc>"
_SC_PATTERN = re.compile(re.escape(SC_TOKEN))


def _strip_punctuation(token: str) -> str:
    return "".join(ch for ch in token if not unicodedata.category(ch).startswith("P"))


def normalize(text: str) -> list[str]:
    """Lowercase, drop punctuation, keep <sc> as a standalone token."""
    padded = _SC_PATTERN.sub(f" {SC_TOKEN} ", text.lower())
    tokens = []
    for raw in padded.split():
        if raw == SC_TOKEN:
            tokens.append(raw)
        elif token := _strip_punctuation(raw):
            tokens.append(token)
    return tokens


def words(tokens: list[str]) -> list[str]:
    return [token for token in tokens if token != SC_TOKEN]


def chars(tokens: list[str]) -> list[str]:
    """Characters of the normalised words joined by single spaces."""
    return list(" ".join(words(tokens)))


def sc_count(tokens: list[str]) -> int:
    return sum(1 for token in tokens if token == SC_TOKEN)


def split_segments(tokens: list[str]) -> list[list[str]]:
    """Word lists between <sc> tokens; empty segments are dropped."""
    segments = [[]]
    for token in tokens:
        if token == SC_TOKEN:
            segments.append([])
        else:
            segments[-1].append(token)
    return [segment for segment in segments if segment]

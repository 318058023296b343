import pytest

from sascsim.metrics.text import chars, normalize, sc_count, split_segments, words


@pytest.mark.parametrize(
    "text,tokens",
    [
        ("Okay. <sc> Great.", ["okay", "<sc>", "great"]),
        ("  A   b ", ["a", "b"]),
        ("", []),
        ("yes<sc>no", ["yes", "<sc>", "no"]),
        ("Hogy vagy? «Jól!»", ["hogy", "vagy", "jól"]),
        ("... <sc> ok", ["<sc>", "ok"]),
    ],
)
def test_normalize(text, tokens):
    assert normalize(text) == tokens


def test_chars_use_single_spaces():
    assert chars(normalize("Ab, <sc> c")) == list("ab c")


def test_words_drop_tokens():
    assert words(["a", "<sc>", "b"]) == ["a", "b"]


def test_sc_count():
    assert sc_count(normalize("a <sc> b <sc> c")) == 2


def test_split_segments_drops_empty():
    assert split_segments(normalize("<sc> a b <sc> <sc> c")) == [["a", "b"], ["c"]]

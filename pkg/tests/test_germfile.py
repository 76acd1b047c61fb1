import pytest

from conftest import CORPUS
from mondcert.errors import GermValidationError
from mondcert.germfile import GermFileError, format_germ, parse_germ_text, read_germ

S1 = """
# S_1
name = S1
n = 2
source = x, y
target = Y1, Y2, Y3
component = x
component = y^2      # trailing comment
component = y^3 + x^2*y
"""


def test_parse_basic_file():
    gf = parse_germ_text(S1)
    assert gf.germ.name == "S1"
    assert [str(c) for c in gf.germ.components] == ["x", "y^2", "x^2*y + y^3"]
    assert gf.unfolding is None


def test_unfolding_section():
    text = S1 + "unfolding_param = u\nunfolding_component = x\nunfolding_component = y^2\n" \
                "unfolding_component = y^3 + x^2*y + u*y\n"
    gf = parse_germ_text(text)
    assert gf.unfolding.params == ("u",)
    assert str(gf.unfolding.components[2]) == "x^2*y + y^3 + u*y"


def test_format_round_trip():
    gf = read_germ(CORPUS / "s1_unfolded.germ")
    again = parse_germ_text(format_germ(gf))
    assert again.germ == gf.germ and again.unfolding == gf.unfolding
    assert format_germ(again) == format_germ(gf)


@pytest.mark.parametrize("text, msg", [
    ("n = 2\nsource = x, y\ntarget = Y1, Y2, Y3\ncomponent = x\ncomponent = y^2\n", "component"),
    ("n = two\n", "integer"),
    ("n = 2\nsource = x\ntarget = Y1, Y2, Y3\n", "source"),
    ("n = 2\nsource = x, y\ntarget = Y1, Y2\n", "target"),
    ("n = 2\nsource = x, y\ntarget = Y1, Y2, Y3\ncomponent = x\ncomponent = y^2\ncomponent = y^^3\n", ":6:"),
    ("colour = red\n", "unknown key"),
    ("just text\n", "key = value"),
    ("n = 2\nn = 3\n", "twice"),
    ("n = 2\nsource = x, x\n", "repeated"),
    (S1 + "unfolding_param = u\nunfolding_component = x\n", "unfolding_component"),
    (S1 + "unfolding_component = x\n" * 3, "unfolding_param"),
])
def test_malformed_files(text, msg):
    with pytest.raises(GermFileError, match=msg):
        parse_germ_text(text)


def test_unfolding_must_specialize():
    text = S1 + "unfolding_param = u\nunfolding_component = x + u*y + y\nunfolding_component = y^2\n" \
                "unfolding_component = y^3 + x^2*y\n"
    with pytest.raises(GermValidationError, match="restrict"):
        parse_germ_text(text)


def test_missing_file():
    with pytest.raises(GermFileError, match="cannot read"):
        read_germ(CORPUS / "does-not-exist.germ")


def test_every_corpus_file_parses():
    files = sorted(CORPUS.glob("*.germ"))
    assert len(files) >= 10
    for p in files:
        assert read_germ(p).germ.n == 2

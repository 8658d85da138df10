import pytest

from topocc.corpus import bundled_space, load_corpus, load_term_file, parse_judgment
from topocc.heyting import diamond, one_point, sierpinski
from topocc.parsing import ParseError, parse_term
from topocc.syntax import Var

MP = """
# modus ponens
P : Prop
Q : Prop
f : P -> Q
p : P
|- f
    p
:: Q
"""


def test_parse_judgment():
    e = parse_judgment(MP, "mp")
    assert e.names == ["P", "Q", "f", "p"]
    assert e.term == parse_term("f p", e.names)
    assert e.ty == Var(2)


def test_type_line_is_optional():
    e = parse_judgment("|- Prop")
    assert e.ctx == () and e.ty is None


@pytest.mark.parametrize("text", [
    "P : Prop",
    "|- Prop\n|- Prop",
    ":: Prop\n|- Prop",
    "|- Prop\n:: Type0\n:: Type1",
    "|- Prop\nP : Prop",
])
def test_malformed_judgments(text):
    with pytest.raises(ParseError):
        parse_judgment(text)


def test_error_positions_point_at_the_line():
    with pytest.raises(ParseError) as e:
        parse_judgment("P : Prop\n\n|- P )")
    assert e.value.line == 3


def test_term_files(tmp_path):
    f = tmp_path / "t.term"
    f.write_text("# identity\nfun (P : Prop) (p : P) =>\n  p\n")
    e = load_term_file(f)
    assert e.ctx == () and e.term == parse_term("fun (P : Prop) (p : P) => p")
    g = tmp_path / "j.jdg"
    g.write_text(MP)
    assert load_term_file(g).names == ["P", "Q", "f", "p"]


def test_bundled_data():
    corpus = load_corpus()
    assert len(corpus) >= 20
    assert [e.name for e in corpus] == sorted(e.name for e in corpus)
    assert bundled_space("sierpinski").le == sierpinski().le
    assert bundled_space("diamond").le == diamond().le
    assert bundled_space("point").le == one_point().le

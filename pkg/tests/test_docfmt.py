import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igmonoid.cli import corpus_dir
from igmonoid.docfmt import (
    Act,
    Factor,
    GradingSpec,
    GroupExpr,
    InputDocument,
    KernelSpec,
    ParseError,
    PhiSpec,
    parse,
    render,
    render_cycles,
)
from igmonoid.model import load


def test_commuting_relation_parses_to_free_equivalent():
    doc = parse("gens u1 u2\nrel u1 u2 = u2 u1\n")
    assert doc.gens == ("u1", "u2")
    assert doc.relations == (((1, 1), (1, 1)),)
    assert load("gens u1 u2\nrel u1 u2 = u2 u1\n").base.rank == 2


def test_corpus_document_for_swap_example():
    doc = parse((corpus_dir() / "and.igm").read_text())
    assert doc.relations == (((1, 1, 0, 0), (0, 0, 1, 1)),)
    assert doc.acts == (Act("s", False, (1, 0, 3, 2)),)
    assert isinstance(doc.cocycle, GradingSpec)
    assert doc.cocycle.form == (1, 1, 1, 1) and doc.cocycle.modulus == 2


def test_comments_and_blank_lines():
    doc = parse("# header\n\ngens a b   # two\nrel a = b\n")
    assert doc.relations == (((1, 0), (0, 1)),)


def test_cycles_with_names_and_digits():
    doc = parse("gens p m\nact s = (p m)\nact t = (12)\n")
    assert doc.acts[0].perm == doc.acts[1].perm == (1, 0)
    assert render_cycles((1, 0)) == "(12)"
    assert render_cycles(tuple(range(3))) == "()"
    assert render_cycles((1, 0) + tuple(range(2, 11))) == "(1 2)"


@pytest.mark.parametrize("text,line", [
    ("gens u1 u2\nrel u1 =\n", 2),
    ("gens u1\nrel u1 = u9\n", 2),
    ("gens u1 u2\ngrading 1 mod 2\n", 2),
    ("gens u1 u2\nact s = (13)\n", 2),
    ("gens u1 u2\nact s = (12)\nresidue 0 = t\n", 3),
    ("gens u1\nfrobnicate u1\n", 2),
    ("gens u1 u2\nrel u1^-1 = u2\n", 2),
    ("gens u1 u2\nrel u1 = u2 = u1\n", 2),
    ("gens u1 u2\nact s = (12) junk\n", 2),
])
def test_syntax_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.line == line
    assert info.value.column >= 1


def test_undeclared_generator_column():
    with pytest.raises(ParseError) as info:
        parse("gens u1\nrel u1 = u9\n")
    assert info.value.column == "rel u1 = u9".index("u9") + 1


def test_document_level_errors():
    with pytest.raises(ParseError):
        parse("# nothing\n")
    with pytest.raises(ParseError):
        parse("gens a b\nact s = (12)\ngrading 1 1 mod 2\nresidue 0 = e\nphi a = s\n")
    with pytest.raises(ParseError):
        parse("gens a b\nitype a b = b a\nrel a = b\n")


# ------------------------------------------------------------ round trips

names = st.sampled_from(["u1", "u2", "u3", "x", "y", "z", "v_1", "w'"])


def perms(n):
    return st.permutations(list(range(n))).map(tuple)


def gexprs(n, act_names, ambient=None):
    kinds = [st.just(Factor("e", None, 1)), perms(n).map(lambda p: Factor("gens", p, 1))]
    if act_names:
        kinds.append(st.sampled_from(act_names).map(lambda a: Factor("name", a, 1)))
    if ambient:
        kinds.append(perms(ambient).map(lambda p: Factor("ambient", p, 1)))
    factor = st.tuples(st.one_of(kinds), st.integers(-3, 3)).map(
        lambda fp: Factor(fp[0].kind, fp[0].value, fp[1]))
    return st.lists(factor, min_size=1, max_size=3).map(lambda fs: GroupExpr(tuple(fs)))


def words(n, lo):
    return st.lists(st.integers(lo, 3), min_size=n, max_size=n).map(tuple)


@st.composite
def documents(draw):
    gens = tuple(draw(st.lists(names, min_size=1, max_size=4, unique=True)))
    n = len(gens)
    embedded = draw(st.booleans())
    if embedded:
        d = draw(st.integers(1, 3))
        embedding = tuple(draw(st.lists(words(d, -3), min_size=n, max_size=n)))
        relations = ()
    else:
        d = None
        embedding = None
        pairs = st.tuples(words(n, 0), words(n, 0)).filter(lambda p: any(p[0]) or any(p[1]))
        relations = tuple(draw(st.lists(pairs, max_size=3)))
    act_names = draw(st.lists(st.sampled_from(["s", "t", "a", "b"]), max_size=3, unique=True))
    acts = []
    for a in act_names:
        if embedded and draw(st.booleans()):
            acts.append(Act(a, True, draw(perms(d))))
        else:
            acts.append(Act(a, False, draw(perms(n))))
    g = gexprs(n, act_names, d)
    kind = draw(st.sampled_from(["none", "grading", "kernel", "phi"]))
    if kind == "grading":
        residues = tuple(draw(st.lists(st.tuples(st.integers(0, 5), g), min_size=1, max_size=3)))
        cocycle = GradingSpec(draw(words(n, -3)), draw(st.integers(1, 6)), residues)
    elif kind == "kernel":
        rows = tuple(draw(st.lists(words(n, -3), min_size=1, max_size=3)))
        cosets = tuple(draw(st.lists(st.tuples(words(n, -3), g), max_size=3)))
        cocycle = KernelSpec(rows, cosets)
    elif kind == "phi":
        idx = sorted(draw(st.sets(st.integers(0, n - 1), min_size=1)))
        cocycle = PhiSpec(tuple((i, draw(g)) for i in idx))
    else:
        cocycle = None
    return InputDocument(gens, relations, embedding, tuple(acts), cocycle)


@st.composite
def itype_documents(draw):
    gens = tuple(draw(st.lists(names, min_size=2, max_size=4, unique=True)))
    n = len(gens)
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    rels = tuple(draw(st.lists(st.tuples(pair, pair), min_size=1, max_size=4)))
    return InputDocument(gens, itype=rels)


@settings(max_examples=300, deadline=None)
@given(documents())
def test_render_then_parse_round_trips(doc):
    assert parse(render(doc)) == doc


@settings(max_examples=100, deadline=None)
@given(itype_documents())
def test_itype_documents_round_trip(doc):
    assert parse(render(doc)) == doc


@pytest.mark.parametrize("name", ["and.igm", "torsionex.igm", "dinfty.igm", "nonmax.igm",
                                  "belvb.irel", "belvb-veronese.igm"])
def test_corpus_documents_round_trip(name):
    doc = parse((corpus_dir() / name).read_text())
    assert parse(render(doc)) == doc

"""Line-oriented input format for monoids, actions, cocycles and I-type relations.

Grammar (one directive per line, ``#`` starts a comment)::

    document  := line*
    line      := gens | rel | embed | act | grading | residue | kernel | coset | phi | itype
    gens      := "gens" NAME+
    rel       := "rel" word "=" word
    embed     := "embed" NAME "=" INT+            (declares a generator by its coordinates)
    act       := "act" NAME "=" ["ambient"] cycles
    grading   := "grading" INT+ "mod" INT
    residue   := "residue" INT "=" gexpr
    kernel    := "kernel" word
    coset     := "coset" word "=" gexpr
    phi       := "phi" NAME "=" gexpr
    itype     := "itype" NAME NAME "=" NAME NAME
    word      := "1" | factor+        factor := NAME ["^" ["-"] INT]
    cycles    := ("(" item* ")")+     item   := NAME | INT   (digits may be run together when n <= 9)
    gexpr     := term ("*" term)*     term   := ("e" | NAME | ["ambient"] cycles) ["^" ["-"] INT]

``rel`` words must be non-negative; ``kernel`` and ``coset`` words may use
negative exponents.  ``embed`` and ``rel`` are mutually exclusive, and
``itype`` documents use ``gens`` plus ``itype`` lines only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

Vector = tuple[int, ...]
Perm = tuple[int, ...]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")
_FACTOR = re.compile(r"([A-Za-z_][A-Za-z0-9_']*)(?:\^(-?\d+))?$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Factor:
    """One factor of a group expression: ``kind`` is ``e``, ``name``, ``gens`` or ``ambient``."""

    kind: str
    value: Union[str, Perm, None]
    power: int = 1


@dataclass(frozen=True)
class GroupExpr:
    factors: tuple[Factor, ...]


@dataclass(frozen=True)
class Act:
    name: str
    ambient: bool
    perm: Perm


@dataclass(frozen=True)
class GradingSpec:
    form: Vector
    modulus: int
    residues: tuple[tuple[int, GroupExpr], ...]


@dataclass(frozen=True)
class KernelSpec:
    rows: tuple[Vector, ...]
    cosets: tuple[tuple[Vector, GroupExpr], ...]


@dataclass(frozen=True)
class PhiSpec:
    values: tuple[tuple[int, GroupExpr], ...]


CocycleSpec = Union[GradingSpec, KernelSpec, PhiSpec]


@dataclass(frozen=True)
class InputDocument:
    gens: tuple[str, ...]
    relations: tuple[tuple[Vector, Vector], ...] = ()
    embedding: Optional[tuple[Vector, ...]] = None
    acts: tuple[Act, ...] = ()
    cocycle: Optional[CocycleSpec] = None
    itype: Optional[tuple[tuple[tuple[int, int], tuple[int, int]], ...]] = None

    @property
    def is_itype(self) -> bool:
        return self.itype is not None

    @property
    def ambient_rank(self) -> Optional[int]:
        return len(self.embedding[0]) if self.embedding else None


# ------------------------------------------------------------------ parsing


class _Line:
    def __init__(self, number: int, text: str):
        self.number = number
        self.text = text

    def error(self, message: str, fragment: str = "") -> ParseError:
        col = self.text.find(fragment) + 1 if fragment and fragment in self.text else 1
        return ParseError(message, self.number, col)


def _split_eq(line: _Line, rest: str) -> tuple[str, str]:
    if rest.count("=") != 1:
        raise line.error("expected exactly one '='")
    left, right = rest.split("=")
    return left.strip(), right.strip()


def _parse_int(line: _Line, tok: str) -> int:
    if not re.fullmatch(r"-?\d+", tok):
        raise line.error(f"expected an integer, found '{tok}'", tok)
    return int(tok)


class _Parser:
    def __init__(self):
        self.gens: list[str] = []
        self.gens_line = False
        self.relations = []
        self.embedding: list[Vector] = []
        self.acts: list[Act] = []
        self.grading = None
        self.residues = []
        self.kernel_rows = []
        self.cosets = []
        self.phis = []
        self.itype = []

    def index(self, line: _Line, name: str) -> int:
        if name not in self.gens:
            raise line.error(f"undeclared generator '{name}'", name)
        return self.gens.index(name)

    def word(self, line: _Line, text: str, allow_negative: bool) -> Vector:
        toks = text.split()
        if not toks:
            raise line.error("expected a word")
        out = [0] * len(self.gens)
        if toks == ["1"]:
            return tuple(out)
        for tok in toks:
            m = _FACTOR.match(tok)
            if not m:
                raise line.error(f"malformed factor '{tok}'", tok)
            k = int(m.group(2)) if m.group(2) else 1
            if k < 0 and not allow_negative:
                raise line.error("negative exponent not allowed here", tok)
            out[self.index(line, m.group(1))] += k
        return tuple(out)

    def cycles(self, line: _Line, text: str, size: int, names: Optional[list[str]]) -> Perm:
        text = text.strip()
        if not text.startswith("("):
            raise line.error("expected a cycle '('", text[:1])
        perm = list(range(size))
        seen: set[int] = set()
        for body in re.findall(r"\(([^()]*)\)", text):
            items = body.split()
            if len(items) == 1 and items[0].isdigit() and size <= 9 and len(items[0]) > 1:
                items = list(items[0])
            idx = []
            for it in items:
                if it.isdigit():
                    k = int(it) - 1
                    if not 0 <= k < size:
                        raise line.error(f"cycle entry {it} out of range", it)
                elif names is not None and it in names:
                    k = names.index(it)
                else:
                    raise line.error(f"unknown cycle entry '{it}'", it)
                if k in seen:
                    raise line.error(f"cycle entry {it} repeated", it)
                seen.add(k)
                idx.append(k)
            for i, k in enumerate(idx):
                perm[k] = idx[(i + 1) % len(idx)]
        if re.sub(r"\([^()]*\)", "", text).strip():
            raise line.error("unexpected text after cycles")
        return tuple(perm)

    def perm_literal(self, line: _Line, text: str) -> tuple[bool, Perm]:
        text = text.strip()
        if text.startswith("ambient"):
            if not self.embedding:
                raise line.error("'ambient' needs embed lines", "ambient")
            d = len(self.embedding[0])
            return True, self.cycles(line, text[len("ambient"):], d, None)
        return False, self.cycles(line, text, len(self.gens), self.gens)

    def gexpr(self, line: _Line, text: str) -> GroupExpr:
        factors = []
        for term in text.split("*"):
            term = term.strip()
            if not term:
                raise line.error("empty factor in group expression")
            m = re.fullmatch(r"(.*?)\s*\^\s*(-?\d+)", term)
            power = 1
            if m and not m.group(1).endswith("("):
                term, power = m.group(1).strip(), int(m.group(2))
            if term in ("e", "1"):
                factors.append(Factor("e", None, power))
            elif term.startswith("(") or term.startswith("ambient"):
                ambient, perm = self.perm_literal(line, term)
                factors.append(Factor("ambient" if ambient else "gens", perm, power))
            elif _NAME.match(term):
                if term not in {a.name for a in self.acts}:
                    raise line.error(f"undeclared group element '{term}'", term)
                factors.append(Factor("name", term, power))
            else:
                raise line.error(f"malformed group expression '{term}'", term)
        return GroupExpr(tuple(factors))

    def feed(self, line: _Line) -> None:
        text = line.text.split("#", 1)[0].strip()
        if not text:
            return
        head, _, rest = text.partition(" ")
        rest = rest.strip()
        handler = getattr(self, "do_" + head.replace("-", "_"), None)
        if handler is None:
            raise line.error(f"unknown directive '{head}'", head)
        handler(line, rest)

    def do_gens(self, line, rest):
        if self.gens:
            raise line.error("generators already declared")
        names = rest.split()
        if not names:
            raise line.error("expected generator names")
        for n in names:
            if not _NAME.match(n) or n in ("e", "ambient", "mod"):
                raise line.error(f"invalid generator name '{n}'", n)
        if len(set(names)) != len(names):
            raise line.error("duplicate generator name")
        self.gens = names
        self.gens_line = True

    def do_embed(self, line, rest):
        if self.gens_line:
            raise line.error("embed cannot be combined with a gens line")
        name, coords = _split_eq(line, rest)
        if not _NAME.match(name) or name in self.gens:
            raise line.error(f"invalid or duplicate generator '{name}'", name)
        vec = tuple(_parse_int(line, t) for t in coords.split())
        if not vec:
            raise line.error("expected coordinates")
        if self.embedding and len(vec) != len(self.embedding[0]):
            raise line.error("coordinate count differs from earlier embed lines")
        self.gens.append(name)
        self.embedding.append(vec)

    def do_rel(self, line, rest):
        if self.embedding:
            raise line.error("relations are derived from embed lines")
        left, right = _split_eq(line, rest)
        lw, rw = self.word(line, left, False), self.word(line, right, False)
        if not any(lw) and not any(rw):
            raise line.error("relation with both sides empty")
        self.relations.append((lw, rw))

    def do_act(self, line, rest):
        name, body = _split_eq(line, rest)
        if not _NAME.match(name) or name in ("e",) or name in {a.name for a in self.acts}:
            raise line.error(f"invalid or duplicate action name '{name}'", name)
        if not self.gens:
            raise line.error("generators must be declared before actions")
        ambient, perm = self.perm_literal(line, body)
        self.acts.append(Act(name, ambient, perm))

    def do_grading(self, line, rest):
        if self.grading is not None:
            raise line.error("grading already given")
        toks = rest.split()
        if "mod" not in toks or toks.index("mod") != len(toks) - 2:
            raise line.error("expected 'grading INT+ mod INT'")
        form = tuple(_parse_int(line, t) for t in toks[:-2])
        if len(form) != len(self.gens):
            raise line.error(f"grading needs {len(self.gens)} weights, got {len(form)}")
        modulus = _parse_int(line, toks[-1])
        if modulus < 1:
            raise line.error("modulus must be positive", toks[-1])
        self.grading = (form, modulus)

    def do_residue(self, line, rest):
        k, g = _split_eq(line, rest)
        self.residues.append((_parse_int(line, k), self.gexpr(line, g)))

    def do_kernel(self, line, rest):
        self.kernel_rows.append(self.word(line, rest, True))

    def do_coset(self, line, rest):
        w, g = _split_eq(line, rest)
        self.cosets.append((self.word(line, w, True), self.gexpr(line, g)))

    def do_phi(self, line, rest):
        n, g = _split_eq(line, rest)
        i = self.index(line, n)
        if any(j == i for j, _ in self.phis):
            raise line.error(f"phi of '{n}' given twice", n)
        self.phis.append((i, self.gexpr(line, g)))

    def do_itype(self, line, rest):
        left, right = _split_eq(line, rest)
        lt, rt = left.split(), right.split()
        if len(lt) != 2 or len(rt) != 2:
            raise line.error("itype relations have the form 'x y = z w'")
        self.itype.append((tuple(self.index(line, t) for t in lt),
                           tuple(self.index(line, t) for t in rt)))

    def finish(self) -> InputDocument:
        if not self.gens:
            raise ParseError("no generators declared")
        kinds = [k for k, present in (("grading", self.grading is not None or self.residues),
                                      ("kernel", self.kernel_rows or self.cosets),
                                      ("phi", self.phis)) if present]
        if len(kinds) > 1:
            raise ParseError(f"more than one cocycle form given: {', '.join(kinds)}")
        if self.itype:
            if self.relations or self.embedding or self.acts or kinds:
                raise ParseError("itype documents contain only gens and itype lines")
            return InputDocument(tuple(self.gens), itype=tuple(self.itype))
        cocycle = None
        if kinds == ["grading"]:
            if self.grading is None:
                raise ParseError("residue lines need a grading line")
            cocycle = GradingSpec(self.grading[0], self.grading[1], tuple(self.residues))
        elif kinds == ["kernel"]:
            cocycle = KernelSpec(tuple(self.kernel_rows), tuple(self.cosets))
        elif kinds == ["phi"]:
            cocycle = PhiSpec(tuple(sorted(self.phis)))
        return InputDocument(
            gens=tuple(self.gens),
            relations=tuple(self.relations),
            embedding=tuple(self.embedding) if self.embedding else None,
            acts=tuple(self.acts),
            cocycle=cocycle,
        )


def parse(text: str) -> InputDocument:
    p = _Parser()
    for number, raw in enumerate(text.splitlines(), start=1):
        p.feed(_Line(number, raw))
    return p.finish()


# ---------------------------------------------------------------- rendering


def render_cycles(perm: Perm) -> str:
    """Cycle notation with 1-based entries; digits run together when ``len(perm) <= 9``."""
    seen = set()
    parts = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        sep = "" if len(perm) <= 9 else " "
        parts.append("(" + sep.join(str(k + 1) for k in cyc) + ")")
    return "".join(parts) if parts else "()"


def render_word(names, vec: Vector) -> str:
    toks = []
    for n, k in zip(names, vec):
        if k == 1:
            toks.append(n)
        elif k:
            toks.append(f"{n}^{k}")
    return " ".join(toks) if toks else "1"


def _render_factor(f: Factor) -> str:
    if f.kind == "e":
        base = "e"
    elif f.kind == "name":
        base = f.value
    elif f.kind == "ambient":
        base = "ambient " + render_cycles(f.value)
    else:
        base = render_cycles(f.value)
    return base if f.power == 1 else f"{base}^{f.power}"


def render_gexpr(g: GroupExpr) -> str:
    return " * ".join(_render_factor(f) for f in g.factors)


def render(doc: InputDocument) -> str:
    lines = []
    if doc.embedding:
        for n, v in zip(doc.gens, doc.embedding):
            lines.append(f"embed {n} = " + " ".join(map(str, v)))
    else:
        lines.append("gens " + " ".join(doc.gens))
    for left, right in doc.relations:
        lines.append(f"rel {render_word(doc.gens, left)} = {render_word(doc.gens, right)}")
    for a in doc.acts:
        body = ("ambient " if a.ambient else "") + render_cycles(a.perm)
        lines.append(f"act {a.name} = {body}")
    c = doc.cocycle
    if isinstance(c, GradingSpec):
        lines.append("grading " + " ".join(map(str, c.form)) + f" mod {c.modulus}")
        for k, g in c.residues:
            lines.append(f"residue {k} = {render_gexpr(g)}")
    elif isinstance(c, KernelSpec):
        for row in c.rows:
            lines.append(f"kernel {render_word(doc.gens, row)}")
        for w, g in c.cosets:
            lines.append(f"coset {render_word(doc.gens, w)} = {render_gexpr(g)}")
    elif isinstance(c, PhiSpec):
        for i, g in c.values:
            lines.append(f"phi {doc.gens[i]} = {render_gexpr(g)}")
    for (i, j), (k, l) in doc.itype or ():
        g = doc.gens
        lines.append(f"itype {g[i]} {g[j]} = {g[k]} {g[l]}")
    return "\n".join(lines) + "\n"

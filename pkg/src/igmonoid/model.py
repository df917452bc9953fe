"""Turn a parsed document into algebraic objects and name their parts for reports."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .docfmt import GradingSpec, GroupExpr, InputDocument, KernelSpec, PhiSpec, render_cycles, render_word
from .errors import InvalidCocycle, RelationNotPreserved
from .igcore import (
    CosetCocycle,
    GenAction,
    IGElement,
    IGMonoid,
    Perm,
    build_action,
    build_ig,
    compose,
    invert_perm,
)
from .intlat import Sublattice, Vector, kernel_basis, transpose
from .itype import IRelations, ITypeMonoid, itype_to_ig
from .monoid import AffineMonoid, FacePrime, Presentation, build_monoid


def _perm_power(p: Perm, k: int) -> Perm:
    if k < 0:
        p, k = invert_perm(p), -k
    out = tuple(range(len(p)))
    for _ in range(k):
        out = compose(out, p)
    return out


def presentation_of(doc: InputDocument) -> Presentation:
    if doc.embedding is None:
        return Presentation(doc.gens, doc.relations)
    cols = transpose(doc.embedding)
    rels = []
    for v in kernel_basis(cols, len(doc.gens)):
        rels.append((tuple(max(x, 0) for x in v), tuple(max(-x, 0) for x in v)))
    return Presentation(doc.gens, tuple(rels))


@dataclass(frozen=True, eq=False)
class Model:
    doc: InputDocument

    @cached_property
    def relations(self) -> Optional[IRelations]:
        return IRelations(len(self.doc.gens), self.doc.itype) if self.doc.is_itype else None

    @cached_property
    def itype(self) -> Optional[ITypeMonoid]:
        return itype_to_ig(self.relations) if self.relations is not None else None

    @cached_property
    def base(self) -> AffineMonoid:
        if self.itype is not None:
            return self.itype.ig.base
        return build_monoid(presentation_of(self.doc))

    def ambient_to_gens(self, perm: Perm) -> Perm:
        """Generator permutation induced by permuting ambient coordinates."""
        emb = self.doc.embedding
        index = {v: i for i, v in enumerate(emb)}
        out = []
        for v in emb:
            w = [0] * len(v)
            for i, x in enumerate(v):
                w[perm[i]] = x
            w = tuple(w)
            if w not in index:
                raise RelationNotPreserved(f"ambient permutation {render_cycles(perm)} does not preserve the generators")
            out.append(index[w])
        return tuple(out)

    @cached_property
    def act_perms(self) -> dict[str, Perm]:
        return {a.name: self.ambient_to_gens(a.perm) if a.ambient else a.perm for a in self.doc.acts}

    @cached_property
    def action(self) -> GenAction:
        if self.itype is not None:
            return self.itype.ig.action
        perms = list(self.act_perms.values())
        return build_action(self.base, perms)

    def eval_group(self, g: GroupExpr) -> int:
        n = len(self.doc.gens)
        acc = tuple(range(n))
        for f in g.factors:
            if f.kind == "e":
                p = tuple(range(n))
            elif f.kind == "name":
                p = self.act_perms[f.value]
            elif f.kind == "ambient":
                p = self.ambient_to_gens(f.value)
            else:
                p = f.value
            acc = compose(acc, _perm_power(p, f.power))
        try:
            return self.action.index_of_perm(acc)
        except ValueError:
            raise InvalidCocycle(f"{render_cycles(acc)} is not in the group generated by the actions") from None

    @cached_property
    def cocycle(self) -> CosetCocycle:
        a, c = self.base, self.doc.cocycle
        if c is None:
            return CosetCocycle(Sublattice.full(a.rank), (0,))
        if isinstance(c, GradingSpec):
            res = {k % c.modulus: self.eval_group(g) for k, g in c.residues}
            return CosetCocycle.from_grading(a, c.form, c.modulus, res)
        if isinstance(c, KernelSpec):
            lattice = Sublattice.span([a.point(r) for r in c.rows], a.rank)
            table = {}
            for w, g in c.cosets:
                key = a.point(w)
                if key in table:
                    raise InvalidCocycle(f"coset of {render_word(self.doc.gens, w)} given twice")
                table[key] = self.eval_group(g)
            return CosetCocycle.from_table(lattice, table)
        assert isinstance(c, PhiSpec)
        given = dict(c.values)
        missing = [self.doc.gens[i] for i in range(len(self.doc.gens)) if i not in given]
        if missing:
            raise InvalidCocycle(f"phi missing for generators {', '.join(missing)}")
        values = [self.eval_group(given[i]) for i in range(len(self.doc.gens))]
        return CosetCocycle.from_generator_values(a, self.action, values)

    @cached_property
    def ig(self) -> IGMonoid:
        if self.itype is not None:
            return self.itype.ig
        return build_ig(self.base, self.action, self.cocycle)

    # ---- naming

    @cached_property
    def _ambient_labels(self) -> Optional[dict[Perm, Perm]]:
        acts = self.doc.acts
        if not acts or not all(a.ambient for a in acts):
            return None
        d = self.doc.ambient_rank
        ident = tuple(range(d))
        found = {tuple(range(len(self.doc.gens))): ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for a in acts:
                    q = compose(p, a.perm)
                    gp = self.ambient_to_gens(q)
                    if gp not in found:
                        found[gp] = q
                        nxt.append(q)
            frontier = nxt
        return found

    def group_label(self, s: IGMonoid, g: int) -> str:
        perm = s.action.perms[g]
        amb = self._ambient_labels
        label = render_cycles(amb[perm]) if amb is not None else render_cycles(perm)
        return "e" if label == "()" else label

    @cached_property
    def basis_generators(self) -> Optional[list[int]]:
        """Generator indices whose images are the unit vectors, when they exist."""
        imgs = self.base.images
        r = self.base.rank
        out = []
        for i in range(r):
            e = tuple(int(i == j) for j in range(r))
            if e not in imgs:
                return None
            out.append(imgs.index(e))
        return out

    def word(self, v: Vector) -> Optional[str]:
        basis = self.basis_generators
        if basis is None:
            return None
        toks = []
        for i, k in zip(basis, v):
            name = self.base.names[i]
            if k == 1:
                toks.append(name)
            elif k:
                toks.append(f"{name}^{k}")
        return " ".join(toks) if toks else "1"

    def element(self, s: IGMonoid, x: IGElement) -> dict:
        return {"translation": list(x.translation), "word": self.word(x.translation),
                "group": self.group_label(s, x.group)}

    def prime_label(self, q: FacePrime) -> str:
        return q.label(self.base.names)


def load(text: str) -> Model:
    from .docfmt import parse

    return Model(parse(text))

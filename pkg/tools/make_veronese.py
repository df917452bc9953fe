"""Regenerate corpus/belvb-veronese.igm from belvb.irel.

The degree-3 monomials of the free monoid on four letters form a submonoid
invariant under the permutation group of the I-type monoid; each monomial
keeps the cocycle value it has in the I-type monoid.
"""

from itertools import combinations_with_replacement
from pathlib import Path

from igmonoid.docfmt import parse, render_cycles
from igmonoid.itype import IRelations, itype_to_ig

CORPUS = Path(__file__).resolve().parent.parent / "src" / "igmonoid" / "corpus"


def main():
    doc = parse((CORPUS / "belvb.irel").read_text())
    n = len(doc.gens)
    it = itype_to_ig(IRelations(n, doc.itype))
    s = it.ig
    monos = []
    for combo in combinations_with_replacement(range(n), 3):
        v = [0] * n
        for i in combo:
            v[i] += 1
        monos.append(tuple(v))
    monos.sort(reverse=True)
    lines = [
        "# Degree-3 monomials in four letters, embedded by exponent vectors.",
        "# The group acts by permuting letters; each monomial carries its",
        "# cocycle value from belvb.irel.  Generated by tools/make_veronese.py.",
    ]
    names = ["m" + "".join(map(str, v)) for v in monos]
    for name, v in zip(names, monos):
        lines.append(f"embed {name} = " + " ".join(map(str, v)))
    for i, p in enumerate(it.sigmas, start=1):
        lines.append(f"act s{i} = ambient {render_cycles(p)}")
    for name, v in zip(names, monos):
        lines.append(f"phi {name} = ambient {render_cycles(s.action.perms[s.phi(v)])}")
    (CORPUS / "belvb-veronese.igm").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()

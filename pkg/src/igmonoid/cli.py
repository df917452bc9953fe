"""Command line interface: ``igmonoid COMMAND FILE [options]``.

Exit status 0 means success, 1 a refuted ``--expect`` property or a corpus
mismatch, 2 an input error (reported as a JSON object on stderr).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

from . import analysis
from .docfmt import ParseError, parse
from .errors import IGMonoidError, PreconditionUnmet
from .igcore import kernel_index, not_i_type_certificate
from .itype import build_rmap, check_nondegeneracy, check_ybe, derive_permutations, ig_cover
from .model import Model
from .monoid import is_maximal_order, minimal_primes, units

SCHEMA = 1
BOUNDED = "bounded search: an empty result is inconclusive"

# bundled examples and the commands recorded in their golden reports
CORPUS = {
    "and.igm": ["validate", "torsion", "primes", "maximal-order", "cover", "witness"],
    "belvb.irel": ["validate", "ybe", "sigma"],
    "belvb-veronese.igm": ["validate", "torsion", "maximal-order"],
    "torsionex.igm": ["validate", "torsion", "witness"],
    "dinfty.igm": ["validate", "torsion", "witness"],
    "nonmax.igm": ["validate", "torsion", "primes", "maximal-order", "witness"],
}

EXPECTATIONS = {
    "validate": {"valid"},
    "torsion": {"torsion-free", "torsion"},
    "maximal-order": {"maximal-order", "not-maximal-order"},
    "ybe": {"ybe"},
    "cover": {"cover-verified"},
}


class InputError(Exception):
    pass


class Options:
    def __init__(self, height: int = 1, bound: int = 2, degree: int = 3):
        self.height = height
        self.bound = bound
        self.degree = degree


# ------------------------------------------------------------------ commands


def cmd_validate(m: Model, opts: Options) -> dict:
    if m.doc.is_itype:
        m.relations  # raises on malformed relation sets
        return {"kind": "itype", "generators": list(m.doc.gens),
                "relations": len(m.doc.itype), "valid": True}
    s = m.ig
    base = s.base
    return {
        "kind": "ig",
        "valid": True,
        "monoid": {
            "rank": base.rank,
            "images": {n: list(v) for n, v in zip(base.names, base.images)},
            "units": [list(u) for u in units(base)],
            "maximal_order": is_maximal_order(base),
            "minimal_primes": [m.prime_label(q) for q in minimal_primes(base)],
        },
        "group": {"order": s.action.order,
                  "elements": [m.group_label(s, g) for g in range(s.action.order)]},
        "cocycle": {
            "kernel_index": kernel_index(s),
            "kernel_basis": [list(b) for b in s.cocycle.kernel.basis],
            "notes": list(s.notes),
            "generator_values": {n: m.group_label(s, s.phi(v)) for n, v in zip(base.names, base.images)},
        },
    }


def cmd_torsion(m: Model, opts: Options) -> dict:
    s = m.ig
    res = analysis.is_torsion_free(s)
    out = {"torsion_free": res.torsion_free, "basis": "power-identity", "witness": None}
    if res.witness is not None:
        out["witness"] = dict(m.element(s, res.witness.element), order=res.witness.order)
    try:
        cross = analysis.divisorial_torsion_crosscheck(s)
        out["crosscheck"] = {"torsion_free": cross, "basis": "divisorial-fixed-point",
                             "agrees": cross == res.torsion_free}
    except PreconditionUnmet as e:
        out["crosscheck"] = {"skipped": str(e)}
    return out


def cmd_primes(m: Model, opts: Options) -> dict:
    s = m.ig
    tf = analysis.is_torsion_free(s).torsion_free
    primes = analysis.primes_of_s(s, opts.height, require_torsion_free=False)
    out = {
        "height": opts.height,
        "torsion_free": tf,
        "basis": "orbit-minimal-subsets",
        "orbits": [[m.prime_label(q) for q in o] for o in analysis.prime_orbits(s, opts.height)],
        "primes": [{"orbit": p.orbit, "intersection_of": [m.prime_label(q) for q in p.primes]}
                   for p in primes],
    }
    if not tf:
        out["caveat"] = "group of fractions has torsion; the description of primes assumes it is torsion-free"
    return out


def cmd_maximal_order(m: Model, opts: Options) -> dict:
    s = m.ig
    v = analysis.is_maximal_order_s(s)
    cert = not_i_type_certificate(s)
    locs = []
    for p in analysis.primes_of_s(s, 1, require_torsion_free=False):
        entry = {"prime": [m.prime_label(q) for q in p.primes]}
        try:
            entry["unique_minimal_prime"] = analysis.localize_s(s, p).unique
        except PreconditionUnmet as e:
            entry["skipped"] = str(e)
        locs.append(entry)
    return {
        "verdict": v.verdict,
        "basis": v.basis,
        "torsion_free": v.torsion_free,
        "base_maximal_order": True,
        "orbits": [{"orbit": [m.prime_label(q) for q in o.orbit],
                    "partition": [[m.prime_label(q) for q in part] for part in o.partition],
                    "invariant": o.invariant} for o in v.orbits],
        "localizations": locs,
        "not_i_type_certificate": None if cert is None else
        {"rank": cert.rank, "indecomposables": cert.indecomposables},
    }


def _need_itype(m: Model) -> None:
    if not m.doc.is_itype:
        raise InputError("this command needs an itype document")


def cmd_ybe(m: Model, opts: Options) -> dict:
    _need_itype(m)
    r = build_rmap(m.relations)
    y = check_ybe(r)
    left, right = check_nondegeneracy(r)
    d = derive_permutations(m.relations)
    names = m.doc.gens
    return {
        "ybe": y.ok,
        "violation": None if y.violation is None else [names[i] for i in y.violation],
        "left_nondegenerate": left,
        "right_nondegenerate": right,
        "sigmas": {n: _cycles(p) for n, p in zip(names, d.sigmas)},
        "group_order": d.group_order,
        "basis": "exhaustive-braid-check",
    }


def cmd_sigma(m: Model, opts: Options) -> dict:
    _need_itype(m)
    it = m.itype
    s = it.ig
    names = m.doc.gens
    read_back = {n: _cycles(s.action.perms[s.phi(v)]) for n, v in zip(names, s.base.images)}
    sigmas = {n: _cycles(p) for n, p in zip(names, it.sigmas)}
    return {
        "sigmas": sigmas,
        "psi_of_generators": read_back,
        "round_trip": read_back == sigmas,
        "group_order": s.action.order,
        "kernel_index": kernel_index(s),
        "kernel_basis": [list(b) for b in s.cocycle.kernel.basis],
        "basis": "exhaustive-quotient-check",
    }


def cmd_cover(m: Model, opts: Options) -> dict:
    s = m.ig
    c = ig_cover(s, opts.degree)
    rep = c.report
    return {
        "m": c.m,
        "relations": None if c.cover.relations is None else len(c.cover.relations.relations),
        "kernel_rank": c.kernel.rank,
        "degree": rep.degree,
        "checks": {
            "morphism": rep.morphism,
            "onto": rep.onto,
            "injective_mod_kernel": rep.injective_mod_kernel,
            "kernel_invariant": rep.kernel_invariant,
            "relations_ybe": rep.relations_ybe,
            "relations_nondegenerate": rep.relations_nondegenerate,
        },
        "verified": rep.ok,
        "basis": f"bounded-degree-{rep.degree}",
    }


def cmd_witness(m: Model, opts: Options) -> dict:
    s = m.ig
    w = analysis.non_maximal_witness(s, opts.bound)
    f = analysis.finite_normal_subgroup_search(s, opts.bound)
    out = {"bound": opts.bound, "disclaimer": BOUNDED, "non_maximal_witness": None}
    if w is not None:
        out["non_maximal_witness"] = {"element": m.element(s, w.element),
                                      "ideal": [m.element(s, x) for x in w.ideal]}
    if isinstance(f, analysis.FiniteNormalSubgroup):
        out["finite_normal_subgroup"] = {"order": len(f.elements),
                                         "elements": [m.element(s, x) for x in f.elements]}
    else:
        out["finite_normal_subgroup"] = None
        out["finite_normal_search"] = {"none_found_up_to_bound": f.bound, "seeds": f.seeds,
                                       "refuted": f.refuted}
    return out


COMMANDS: dict[str, Callable[[Model, Options], dict]] = {
    "validate": cmd_validate,
    "torsion": cmd_torsion,
    "primes": cmd_primes,
    "maximal-order": cmd_maximal_order,
    "ybe": cmd_ybe,
    "sigma": cmd_sigma,
    "cover": cmd_cover,
    "witness": cmd_witness,
}


def _cycles(p) -> str:
    from .docfmt import render_cycles

    text = render_cycles(p)
    return "e" if text == "()" else text


def _holds(prop: str, result: dict) -> bool:
    return {
        "valid": lambda: result.get("valid") is True,
        "torsion-free": lambda: result["torsion_free"] is True,
        "torsion": lambda: result["torsion_free"] is False,
        "maximal-order": lambda: result["verdict"] is True,
        "not-maximal-order": lambda: result["verdict"] is False,
        "ybe": lambda: result["ybe"] and result["left_nondegenerate"],
        "cover-verified": lambda: result["verified"] is True,
    }[prop]()


# ------------------------------------------------------------------ reports


def make_report(command: str, text: str, name: str, opts: Options) -> dict:
    model = Model(parse(text))
    result = COMMANDS[command](model, opts)
    params = {}
    if command == "primes":
        params["height"] = opts.height
    if command == "witness":
        params["bound"] = opts.bound
    if command == "cover":
        params["degree"] = opts.degree
    return {
        "schema": SCHEMA,
        "command": command,
        "params": params,
        "input": {"file": name, "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest()},
        "result": result,
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _text_lines(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text_lines(v, indent + 1))
            else:
                lines.append(f"{pad}{str(k).ljust(width)}  {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text_lines(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    return lines


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render_text(report: dict) -> str:
    head = f"{report['command']}  {report['input']['file']}"
    return "\n".join([head] + _text_lines(report["result"], 1)) + "\n"


# ------------------------------------------------------------------- corpus


def corpus_dir() -> Path:
    return Path(str(resources.files("igmonoid") / "corpus"))


def corpus_reports(path: Path) -> dict:
    text = path.read_text(encoding="utf-8")
    opts = Options()
    return {
        "schema": SCHEMA,
        "file": path.name,
        "reports": {c: make_report(c, text, path.name, opts) for c in CORPUS[path.name]},
    }


def golden_path(path: Path) -> Path:
    return path.with_name(path.name + ".golden.json")


def run_corpus(update: bool, directory: Optional[Path] = None) -> tuple[dict, bool]:
    directory = directory or corpus_dir()
    results = {}
    ok = True
    for name in sorted(CORPUS):
        path = directory / name
        body = dumps(corpus_reports(path))
        golden = golden_path(path)
        if update:
            golden.write_text(body, encoding="utf-8")
            results[name] = "updated"
            continue
        same = golden.exists() and golden.read_text(encoding="utf-8") == body
        results[name] = "match" if same else "mismatch"
        ok = ok and same
    return {"schema": SCHEMA, "command": "corpus", "results": results, "passed": ok}, ok


# --------------------------------------------------------------------- main


def _error(kind: str, message: str, **extra) -> int:
    payload = {"error": kind, "message": message}
    payload.update(extra)
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="igmonoid", description="Analyse monoids of IG-type.")
    p.add_argument("command", choices=sorted(list(COMMANDS) + ["corpus"]))
    p.add_argument("file", nargs="?", help="input document (.igm or .irel)")
    p.add_argument("--report", choices=["text", "json"], default="text")
    p.add_argument("--height", type=int, default=1)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--degree", type=int, default=3, help="depth of bounded verification")
    p.add_argument("--expect", help="property that must hold, else exit status 1")
    p.add_argument("--update", action="store_true", help="rewrite golden reports (corpus only)")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "corpus":
        report, ok = run_corpus(args.update)
        sys.stdout.write(dumps(report) if args.report == "json" else render_text(
            {"command": "corpus", "input": {"file": str(corpus_dir())}, "result": report["results"]}))
        return 0 if ok else 1
    if args.file is None:
        return _error("usage", f"command '{args.command}' needs an input file")
    if args.expect is not None and args.expect not in EXPECTATIONS.get(args.command, ()):
        return _error("usage", f"--expect {args.expect} does not apply to '{args.command}'")
    if min(args.height, args.bound, args.degree) < 0:
        return _error("usage", "numeric options must be non-negative")
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as e:
        return _error("io", str(e))
    opts = Options(args.height, args.bound, args.degree)
    try:
        report = make_report(args.command, text, Path(args.file).name, opts)
    except ParseError as e:
        return _error("syntax", e.message, line=e.line, column=e.column)
    except (IGMonoidError, InputError, ValueError) as e:
        return _error(type(e).__name__, str(e))
    sys.stdout.write(dumps(report) if args.report == "json" else render_text(report))
    if args.expect is not None and not _holds(args.expect, report["result"]):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

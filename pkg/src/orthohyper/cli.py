"""Command-line front end.

Every subcommand loads a hypergraph (``--builtin NAME`` or a file), runs one
analysis, prints plain-text tables and optionally writes a JSON report and
CSV files. ``report`` runs all analyses in sequence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from . import chromatic, geometry, polytope, reference, states
from .hypergraph import (
    BUILTINS,
    Hypergraph,
    HypergraphError,
    builtin,
    label_key,
    parse_hypergraph,
    validate,
)

SECTIONS = ("states", "partition", "pseudocontexts", "for-verify", "hull", "violations", "colorings")
EIGEN_TOL = 1e-4
OVERLAP_MIN = 0.999


def fmt(x: float) -> str:
    return f"{x:.6g}"


class InputError(Exception):
    """Bad command-line input; reported with exit code 2."""


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class Section:
    name: str
    status: str = "ok"
    results: dict = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    files: dict[str, str] = field(default_factory=dict)

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))

    def as_dict(self) -> dict:
        d = {"status": self.status, **self.results}
        if self.checks:
            d["checks"] = [c.as_dict() for c in self.checks]
        return d


class Run:
    """Lazily computed shared inputs for the analyses."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.name = args.builtin
        self.h = self._load_hypergraph()
        self._t: states.TravisMatrix | None = None
        self._for: geometry.LabeledFOR | None = None
        self._facets: list[polytope.LinearForm] | None = None
        self.cfg = self._pairs()
        self.is_mep = self.name == "mep"

    def _load_hypergraph(self) -> Hypergraph:
        a = self.args
        if a.builtin and a.path:
            raise InputError("give either a file or --builtin, not both")
        if a.builtin:
            try:
                return builtin(a.builtin)
            except KeyError as e:
                raise InputError(str(e.args[0])) from None
        if not a.path:
            raise InputError("no input: give a hypergraph file or --builtin NAME")
        try:
            with open(a.path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise InputError(f"cannot read {a.path}: {e.strerror}") from None
        try:
            return parse_hypergraph(text, a.format)
        except HypergraphError as e:
            raise InputError(f"{a.path}: {e}") from None

    def _pairs(self) -> polytope.PairConfiguration | None:
        pair_text = getattr(self.args, "pairs", None)
        if pair_text:
            pairs = []
            for item in pair_text.split(","):
                parts = item.strip().split("-")
                if len(parts) != 2 or not all(parts):
                    raise InputError(f"bad pair {item!r}; expected U-V")
                pairs.append((parts[0], parts[1]))
            cfg = polytope.PairConfiguration(tuple(pairs))
            try:
                cfg.validate(self.h)
            except ValueError as e:
                raise InputError(str(e)) from None
            return cfg
        try:
            polytope.MEP_PATH.validate(self.h)
        except ValueError:
            return None
        return polytope.MEP_PATH

    @property
    def t(self) -> states.TravisMatrix:
        if self._t is None:
            self._t = states.enumerate_states(self.h)
        return self._t

    @property
    def vectors(self) -> geometry.LabeledFOR | None:
        src = getattr(self.args, "for_source", None)
        if src is None:
            return None
        if self._for is None:
            self._for = load_for(src, self.name)
        return self._for

    @property
    def facets(self) -> list[polytope.LinearForm]:
        if self._facets is None:
            verts = polytope.build_vertices(self.t, self.cfg)
            self._facets = polytope.facet_enumeration(verts, self.cfg.pairs)
        return self._facets

    def inputs(self) -> dict:
        a = self.args
        return {
            "source": f"builtin:{a.builtin}" if a.builtin else a.path,
            "format": a.format,
            "for": getattr(a, "for_source", None),
            "pairs": [list(p) for p in self.cfg.pairs] if self.cfg else None,
            "skip": sorted(getattr(a, "skip", None) or []),
        }


def load_for(src: str, name: str | None) -> geometry.LabeledFOR:
    if src == "builtin":
        makers = {
            "mep": geometry.build_mep_for,
            "a": geometry.build_variant_a_for,
            "pruned": geometry.build_pruned_gadget_for,
        }
        if name not in makers:
            raise InputError(f"no built-in vector labelling for {name or 'a file input'!r}")
        return makers[name]()
    try:
        with open(src, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {src}: {e.strerror}") from None
    try:
        if text.lstrip().startswith("{"):
            return geometry.LabeledFOR.from_json(text)
        return geometry.LabeledFOR.from_table(text)
    except (ValueError, KeyError) as e:
        raise InputError(f"{src}: cannot parse vector labels: {e}") from None


# -- sections ------------------------------------------------------------------------

def sec_states(run: Run) -> Section:
    s = Section("states")
    t = run.t
    sep, witness = states.is_separating(t)
    rep = validate(run.h)
    s.results = {
        "n_vertices": rep.n_vertices,
        "n_contexts": rep.n_contexts,
        "n_states": t.n_states,
        "separating": sep,
        "inseparable_pair": list(witness) if witness else None,
        "travis_matrix": t.as_dict(),
    }
    s.lines.append(f"{t.n_states} states, separating: {'yes' if sep else 'no'}")
    if witness:
        s.lines.append(f"vertices {witness[0]} and {witness[1]} are not separated")
    s.lines.append(f"{rep.n_vertices} vertices, {rep.n_contexts} contexts")
    s.lines.append("  # " + " ".join(f"{v:>2}" for v in t.vertex_order))
    for i, r in enumerate(t.rows, start=1):
        s.lines.append(f"{i:>3} " + " ".join(f"{b:>2}" for b in r))
    s.files["states.csv"] = t.to_csv()
    if run.is_mep:
        rows = ["".join(map(str, r)) for r in t.rows]
        s.check("states: reference Travis matrix", rows == list(reference.TRAVIS_ROWS))
        s.check("states: separating", sep)
    return s


def sec_partition(run: Run) -> Section:
    s = Section("partition")
    p = states.partition_logic(run.t)
    s.results = {"atoms": p.as_dict(), "n_states": p.n_states}
    for v, atom in p.as_dict().items():
        s.lines.append(f"{v:>4}  {{{','.join(map(str, atom))}}}")
    s.files["partition.csv"] = "vertex,states\n" + "".join(
        f"{v},{' '.join(map(str, a))}\n" for v, a in p.as_dict().items()
    )
    if run.is_mep:
        bad = [v for v, a in reference.PARTITION_ATOMS.items() if p[v] != a]
        s.check("partition: reference atoms", not bad, f"mismatch at {bad}" if bad else "")
    return s


def sec_pseudocontexts(run: Run) -> Section:
    s = Section("pseudocontexts")
    t = run.t
    pcs = states.pseudocontexts(t, max_size=run.args.max_size, h=run.h)
    tifs = sorted(states.tifs_pairs(t, run.h), key=lambda p: (label_key(p[0]), label_key(p[1])))
    s.results = {
        "max_size": run.args.max_size,
        "pseudocontexts": [p.as_dict() for p in pcs],
        "tifs_pairs": [list(p) for p in tifs],
    }
    s.lines.append(f"{len(pcs)} pseudocontext pairs (sets of size <= {run.args.max_size})")
    for p in pcs:
        s.lines.append(
            f"  {{{','.join(p.left)}}} ~ {{{','.join(p.right)}}}  max sum {p.max_classical_sum}"
        )
    s.lines.append(f"{len(tifs)} true-implies-false pairs: " + " ".join(f"{u}->{v}" for u, v in tifs))
    s.files["pseudocontexts.csv"] = "left,right,max_classical_sum\n" + "".join(
        f"{' '.join(p.left)},{' '.join(p.right)},{p.max_classical_sum}\n" for p in pcs
    )
    if run.is_mep:
        left, right = reference.PSEUDOCONTEXT_LEFT, reference.PSEUDOCONTEXT_RIGHT
        found = any(p.left == left and p.right == right for p in pcs)
        s.check("pseudocontexts: {1,7,13} ~ {5,11,17} found", found)
        for side in (left, right):
            m = states.max_classical_sum(t, side)
            s.check(f"pseudocontexts: max sum over {{{','.join(side)}}} is 1", m == 1, str(m))
    return s


def sec_for_verify(run: Run) -> Section:
    s = Section("for-verify")
    f = run.vectors
    rep = geometry.verify_for(run.h, f)
    s.results = {"faithfulness": rep.as_dict(), "vectors": json.loads(f.to_json())}
    s.lines.append(
        f"faithful: {'yes' if rep.faithful else 'no'}  "
        f"(max |<u,v>| on contexts {fmt(rep.max_adjacent_overlap)}, min margin {fmt(rep.min_margin)})"
    )
    for a, b, d in rep.orthogonality_violations:
        s.lines.append(f"  co-contextual but not orthogonal: {a} {b} |<u,v>| = {fmt(d)}")
    for a, b, d in rep.spurious_orthogonality:
        s.lines.append(f"  orthogonal but not co-contextual: {a} {b} |<u,v>| = {fmt(d)}")
    for a, b in rep.parallel_pairs:
        s.lines.append(f"  same ray: {a} {b}")
    s.lines.append("label  x  y  z")
    for v in sorted(f.labels, key=label_key):
        s.lines.append(f"{v:>5}  " + "  ".join(fmt(x) for x in f[v]))
    s.files["vectors.txt"] = f.to_table()
    if run.name in ("mep", "a", "pruned"):
        s.check(f"for-verify: {run.name} labelling is faithful", rep.faithful)
    if run.name == "pruned":
        total = sum(polytope.pair_operator(f, a, b) for a, b in (("4", "5"), ("6", "7"), ("8", "9")))
        dev = float(np.max(np.abs(total + np.eye(3))))
        s.results["gadget_identity_deviation"] = dev
        s.lines.append(f"max |B4B5 + B6B7 + B8B9 + 1| = {dev:.3g}")
        s.check("for-verify: B4B5 + B6B7 + B8B9 = -1", dev <= 1e-9, f"{dev:.3g}")
    if run.is_mep:
        alpha = geometry.mep_alpha()
        closure = float(f["5"] @ geometry.unit(f["7"]))
        lhs = geometry.operator_sum(f, reference.PSEUDOCONTEXT_RIGHT)
        rhs = geometry.operator_sum(f, reference.PSEUDOCONTEXT_LEFT)
        diff = float(np.max(np.abs(lhs - rhs)))
        vals, _ = geometry.eigen_sym3(lhs)
        closed = reference.pseudocontext_eigenvalue_closed_form()
        s.results["mep"] = {
            "alpha": alpha,
            "closure_v5_dot_v7": closure,
            "pseudocontext_operator_difference": diff,
            "pseudocontext_eigenvalues": [float(x) for x in vals],
            "eigenvalue_closed_form": closed,
        }
        s.lines.append(f"alpha = {fmt(alpha)} rad, v5 . v7 = {closure:.3g}")
        s.lines.append(f"max |(E5+E11+E17) - (E1+E7+E13)| = {diff:.3g}")
        s.lines.append("eigenvalues of E5+E11+E17: " + ", ".join(fmt(x) for x in vals))
        s.check("for-verify: cycle closure v5 . v7 = 0", abs(closure) <= 1e-9, f"{closure:.3g}")
        s.check("for-verify: operator pseudocontext identity", diff <= 1e-9, f"{diff:.3g}")
        top = float(vals[0])
        ok = (
            abs(top - reference.PSEUDOCONTEXT_EIGENVALUE) <= EIGEN_TOL
            and abs(top - closed) <= 1e-9
            and abs(float(vals[1]) - top) <= 1e-9
        )
        s.check("for-verify: degenerate eigenvalue 1.43016", ok, fmt(top))
    return s


def sec_hull(run: Run) -> Section:
    s = Section("hull")
    verts = polytope.build_vertices(run.t, run.cfg)
    forms = run.facets
    dim, _ = polytope.affine_hull(verts)
    eqs = [f for f in forms if f.is_equality]
    ineqs = [f for f in forms if not f.is_equality]
    s.results = {
        "pairs": [list(p) for p in run.cfg.pairs],
        "n_vertices": len(verts),
        "vertices": [list(v.coords) for v in verts],
        "dimension": dim,
        "equalities": [f.as_dict() for f in eqs],
        "inequalities": [f.as_dict() for f in ineqs],
    }
    s.lines.append(
        f"{len(verts)} vertices, affine dimension {dim}, "
        f"{len(eqs)} equalities, {len(ineqs)} facet inequalities"
    )
    for i, f in enumerate(forms, start=1):
        s.lines.append(f"{i:>3}: {f.format()}")
    s.files["hull.ine"] = polytope.write_ine(forms)
    s.files["hull.ext"] = polytope.write_ext(verts)
    if run.is_mep and run.cfg == polytope.MEP_PATH:
        m = reference.match_reference_inequalities(forms)
        s.results["reference_matching"] = m.as_dict()
        s.lines.append(
            "matching with the numbered reference inequalities: "
            + ("bijective" if m.bijective else f"unmatched reference {m.unmatched_reference}, "
               f"unmatched computed {m.unmatched_computed}")
        )
        same_span = polytope.same_span(reference.hull_equalities(), eqs)
        s.check("hull: affine dimension 7", dim == 7, str(dim))
        s.check("hull: 2 equalities spanning the reference equalities", len(eqs) == 2 and same_span)
        s.check("hull: 28 facets in bijection with the reference", len(ineqs) == 28 and m.bijective)
    return s


def sec_violations(run: Run) -> Section:
    s = Section("violations")
    f = run.vectors
    rows = []
    if run.is_mep and run.cfg == polytope.MEP_PATH:
        targets = sorted(reference.hull_inequalities().items())
    else:
        targets = [(i, g) for i, g in enumerate(run.facets, start=1) if not g.is_equality]
    s.lines.append("  #  min eigenvalue  bound  violated  eigenvector")
    for num, form in targets:
        q = polytope.quantum_violation(form, f, run.cfg)
        row = {"number": num, "form": form.format(), **q.as_dict()}
        rows.append(row)
        vec = ", ".join(fmt(x) for x in q.eigenvector)
        s.lines.append(
            f"{num:>3}  {fmt(q.min_eigenvalue):>14}  {fmt(q.bound):>5}  "
            f"{'yes' if q.violated else 'no':>8}  ({vec})"
        )
        if run.is_mep and num in reference.VIOLATION_ROWS:
            ref_val, ref_vec = reference.VIOLATION_ROWS[num]
            overlap = q.overlap(ref_vec)
            row["reference"] = {"eigenvalue": ref_val, "eigenvector": list(ref_vec), "overlap": overlap}
            ok = abs(q.min_eigenvalue - ref_val) <= EIGEN_TOL and overlap >= OVERLAP_MIN
            s.check(
                f"violations: row {num}",
                ok,
                f"computed {fmt(q.min_eigenvalue)} vs {fmt(ref_val)}, overlap {overlap:.4f}",
            )
    s.results = {"rows": rows, "n_violated": sum(r["violated"] for r in rows)}
    s.lines.insert(0, f"{s.results['n_violated']} of {len(rows)} inequalities violated")
    s.files["violations.csv"] = "number,min_eigenvalue,bound,violated\n" + "".join(
        f"{r['number']},{r['min_eigenvalue']!r},{r['bound']!r},{int(r['violated'])}\n" for r in rows
    )
    return s


def sec_colorings(run: Run) -> Section:
    s = Section("colorings")
    cols = chromatic.enumerate_colorings(run.h, run.args.colors)
    classes = chromatic.color_classes(cols, run.args.colors)
    ext, non_ext = chromatic.extendable_states(run.t, cols)
    s.results = {
        "k": run.args.colors,
        "n_colorings": len(cols),
        "vertex_order": list(run.h.vertices),
        "classes": [
            {"representative": list(c.representative.colors), "size": len(c)} for c in classes
        ],
        "colorings": [list(c.colors) for c in cols],
        "extendable_states": sorted(ext),
        "non_extendable_states": sorted(non_ext),
    }
    s.lines.append(f"{len(cols)} colorings with {run.args.colors} colors, {len(classes)} classes")
    s.lines.append("  # " + " ".join(f"{v:>2}" for v in run.h.vertices))
    for i, c in enumerate(classes, start=1):
        s.lines.append(f"{i:>3} " + " ".join(f"{x:>2}" for x in c.representative.colors) + f"  (x{len(c)})")
    s.lines.append("states not reachable from a coloring: " + (
        ", ".join(map(str, sorted(non_ext))) or "none"))
    s.files["colorings.csv"] = chromatic.colorings_to_csv(cols)
    if run.is_mep:
        reps = {c.representative.colors for c in classes}
        ref = {
            chromatic.canonical_coloring(chromatic.Coloring(r, run.h.vertices)).colors
            for r in reference.COLORING_ROWS
        }
        s.check("colorings: 18 colorings in 3 classes of 6",
                len(cols) == 18 and len(classes) == 3 and all(len(c) == 6 for c in classes))
        s.check("colorings: class representatives match the reference", reps == ref)
        s.check("colorings: non-extendable states {4,8,10}",
                non_ext == set(reference.NON_EXTENDABLE_STATES), str(sorted(non_ext)))
    return s


RUNNERS: dict[str, Callable[[Run], Section]] = {
    "states": sec_states,
    "partition": sec_partition,
    "pseudocontexts": sec_pseudocontexts,
    "for-verify": sec_for_verify,
    "hull": sec_hull,
    "violations": sec_violations,
    "colorings": sec_colorings,
}
NEEDS_FOR = {"for-verify", "violations"}
NEEDS_PAIRS = {"hull", "violations"}


def run_section(run: Run, name: str, in_report: bool) -> Section:
    if name in NEEDS_FOR and run.args.for_source is None:
        if in_report:
            return Section(name, "skipped", {"reason": "no --for given"})
        raise InputError(f"{name} needs --for builtin|PATH")
    if name in NEEDS_PAIRS and run.cfg is None:
        reason = "default pair path is not co-contextual here; pass --pairs"
        if in_report:
            return Section(name, "skipped", {"reason": reason})
        raise InputError(reason)
    try:
        return RUNNERS[name](run)
    except InputError:
        raise
    except Exception as e:  # reported per section
        return Section(name, "error", {"error": f"{type(e).__name__}: {e}"})


# -- argument parsing ------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, *, for_opt: bool, pairs: bool) -> None:
    p.add_argument("path", nargs="?", help="hypergraph file")
    p.add_argument("--builtin", choices=BUILTINS, help="use a built-in hypergraph")
    p.add_argument("--format", choices=("simple", "mmp"), default="simple",
                   help="input file format (default: simple)")
    p.add_argument("--json", metavar="PATH", help="write the JSON report here")
    p.add_argument("--csv", metavar="DIR", help="write CSV (and .ine/.ext) files into DIR")
    p.add_argument("--assert-paper", "--assert-reference", dest="assert_ref", action="store_true",
                   help="compare against embedded reference values; exit 1 on any mismatch")
    p.add_argument("--max-size", type=int, default=3, help="largest pseudocontext set size")
    p.add_argument("--colors", type=int, default=3, help="number of colors")
    if for_opt:
        p.add_argument("--for", dest="for_source", metavar="builtin|PATH",
                       help="vector labels: 'builtin' or a JSON/table file")
    else:
        p.set_defaults(for_source=None)
    if pairs:
        p.add_argument("--pairs", metavar="U-V,...",
                       help="pair coordinates of the correlation polytope (default 1-3,3-5,...,17-1)")
    else:
        p.set_defaults(pairs=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthohyper",
        description="Two-valued states, vector labellings, correlation polytopes "
        "and colorings of orthogonality hypergraphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "states": "enumerate two-valued states (Travis matrix)",
        "partition": "partition logic of the states",
        "pseudocontexts": "pseudocontexts and true-implies-false pairs",
        "for-verify": "check a vector labelling for faithfulness",
        "hull": "facets of the correlation polytope",
        "violations": "quantum violations of the facet inequalities",
        "colorings": "rainbow colorings and extendable states",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        _add_common(p, for_opt=name in NEEDS_FOR, pairs=name in NEEDS_PAIRS)
    p = sub.add_parser("report", help="run every analysis", description="run every analysis")
    _add_common(p, for_opt=True, pairs=True)
    p.add_argument("--skip", action="append", choices=SECTIONS, default=[],
                   help="leave out a section (repeatable)")
    return parser


def _write_outputs(args, doc: dict, sections: list[Section]) -> None:
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.csv:
        os.makedirs(args.csv, exist_ok=True)
        for s in sections:
            for fname, text in s.files.items():
                with open(os.path.join(args.csv, fname), "w", encoding="utf-8", newline="") as fh:
                    fh.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = Run(args)
        if args.command == "report":
            names = [n for n in SECTIONS if n not in set(args.skip)]
        else:
            names = [args.command]
        sections = [run_section(run, n, args.command == "report") for n in names]
        doc = {
            "command": args.command,
            "inputs": run.inputs(),
            "results": {s.name: s.as_dict() for s in sections},
            "tool_version": __version__,
        }
        _write_outputs(args, doc, sections)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    failed = False
    for s in sections:
        if len(sections) > 1:
            print(f"== {s.name} ==")
        if s.status == "skipped":
            print(f"skipped: {s.results['reason']}")
        elif s.status == "error":
            print(f"error: {s.results['error']}")
            failed = True
        else:
            for line in s.lines:
                print(line)
        if args.assert_ref:
            for c in s.checks:
                mark = "PASS" if c.ok else "FAIL"
                print(f"[{mark}] {c.name}" + (f"  ({c.detail})" if c.detail else ""))
                failed |= not c.ok
        if len(sections) > 1:
            print()
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

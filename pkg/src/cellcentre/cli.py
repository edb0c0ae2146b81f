"""
Command-line front end.

    cellcentre group   --type F4
    cellcentre kl      --type A3 --x "s2" --w "s2 s1 s3 s2"
    cellcentre cells   --type B3 --format csv
    cellcentre jring   --type A3 --cell "s1"
    cellcentre centre  --type A2 --eps flip --cell middle
    cellcentre verify  --type B3

Exit status: 0 success, 1 usage, 2 computation error, 3 failed verdict.
Output depends only on the configuration, never on timing or thread count.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import logging
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cache import (cache_load, cache_lock, cache_store, cells_entry, cells_from_entry,
                    jring_entry, jring_from_entry, kl_entry, kl_from_entry, matrix_key)
from .cells import FULL_PRODUCT_LIMIT, CellPartition, cell_partition
from .centre import BLOCK_NOTE, CentreReport, centre_report
from .coxeter import DEFAULT_CAP, CoxeterError, CoxeterMatrix, GroupTable, build_group, \
    expected_order, parse_coxeter
from .hecke import all_structure_constants, structure_constants_bar_invariant
from .jring import JRingTable, build_jring
from .kl import KLTable, build_kl_table
from .twist import CellNotStableError, NotOrdinaryError, OrdinaryAut, \
    ordinary_automorphisms, parse_eps

__all__ = ["RunConfig", "UsageError", "main", "run"]

log = logging.getLogger("cellcentre")

COMMANDS = ("group", "kl", "cells", "jring", "centre", "verify")
FORMATS = ("json", "csv", "text")

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_VERDICT = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    type: str | None = None
    rank: int | None = None
    matrix: str | None = None          # path to a JSON matrix file
    eps: str = "id"
    cell: str = "all"
    format: str = "json"
    cache_dir: str | None = None
    threads: int = 1
    cap: int = DEFAULT_CAP
    x: str | None = None
    w: str | None = None

    def validate(self) -> CoxeterMatrix:
        """Check everything that can be checked before computing; returns the matrix."""
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.cap < 1:
            raise UsageError("--cap must be positive")
        if (self.type is None) == (self.matrix is None):
            raise UsageError("give exactly one of --type or --matrix")
        if (self.x is None) != (self.w is None):
            raise UsageError("--x and --w go together")
        if self.x is not None and self.command != "kl":
            raise UsageError("--x/--w only apply to the kl command")
        if not self.eps.strip():
            raise UsageError("--eps must not be empty")
        try:
            if self.matrix is not None:
                text = Path(self.matrix).read_text()
                data = json.loads(text)
                if isinstance(data, list):
                    data = {"matrix": data}
                return parse_coxeter(data)
            if self.rank is not None:
                if self.type.strip().upper().startswith("I"):
                    raise UsageError("dihedral types are written I2(m)")
                return parse_coxeter({"type": self.type.strip(), "rank": self.rank})
            return parse_coxeter(self.type)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read matrix file: {exc}") from exc
        except CoxeterError as exc:
            raise UsageError(str(exc)) from exc


@dataclass(eq=False)
class Pipeline:
    """Lazily built tables for one run, going through the cache when asked."""
    cfg: RunConfig
    cm: CoxeterMatrix
    _g: GroupTable | None = None
    _kl: KLTable | None = None
    _part: CellPartition | None = None
    _j: dict = field(default_factory=dict)

    @property
    def g(self) -> GroupTable:
        if self._g is None:
            self._g = build_group(self.cm, cap=self.cfg.cap)
        return self._g

    @property
    def key(self):
        return matrix_key(self.g)

    def _load(self, kind, extra=""):
        if self.cfg.cache_dir is None:
            return None
        return cache_load(self.cfg.cache_dir, kind, self.key, extra=extra)

    def _store(self, entry, extra=""):
        if self.cfg.cache_dir is not None:
            cache_store(self.cfg.cache_dir, entry, extra=extra)

    @property
    def kl(self) -> KLTable:
        if self._kl is None:
            entry = self._load("kl")
            if entry is not None:
                self._kl = kl_from_entry(entry, self.g)
            else:
                self._kl = build_kl_table(self.g, threads=self.cfg.threads)
                self._store(kl_entry(self._kl))
        return self._kl

    @property
    def part(self) -> CellPartition:
        if self._part is None:
            entry = self._load("cells")
            if entry is not None:
                self._part = cells_from_entry(entry, self.g)
            else:
                self._part = cell_partition(self.kl, threads=self.cfg.threads)
                self._store(cells_entry(self._part))
        return self._part

    def jring(self, cell: int) -> JRingTable:
        if cell not in self._j:
            extra = f"cell{cell}"
            entry = self._load("jring", extra)
            if entry is not None:
                self._j[cell] = jring_from_entry(entry, self.g)
            else:
                j = build_jring(self.kl, self.part, cell)
                self._store(jring_entry(j, self.key), extra)
                self._j[cell] = j
        return self._j[cell]

    def cells(self) -> list[int]:
        return resolve_cells(self.part, self.cfg.cell)

    def automorphisms(self) -> list[OrdinaryAut]:
        if self.cfg.eps.strip() == "all":
            return ordinary_automorphisms(self.g)
        try:
            return [parse_eps(self.g, self.cfg.eps)]
        except NotOrdinaryError as exc:
            raise UsageError(str(exc)) from exc


def resolve_cells(part: CellPartition, selector: str) -> list[int]:
    """Cell ids for ``all``, ``middle``, a numeric id or a representative word."""
    g = part.group
    sel = selector.strip()
    if sel == "all":
        return list(range(part.n_two_sided))
    if sel == "middle":
        ends = {int(part.two_sided[g.identity]), int(part.two_sided[g.w_max])}
        rest = [c for c in range(part.n_two_sided) if c not in ends]
        if len(rest) != 1:
            raise UsageError(f"'middle' is ambiguous: {len(rest)} cells besides {{e}} and {{w_max}}")
        return rest
    if sel.isdigit():
        c = int(sel)
        if c >= part.n_two_sided:
            raise UsageError(f"cell id {c} out of range (0..{part.n_two_sided - 1})")
        return [c]
    try:
        return [int(part.two_sided[g.element(sel)])]
    except CoxeterError as exc:
        raise UsageError(f"bad cell selector {selector!r}: {exc}") from exc


def _words(g: GroupTable, ws) -> list[str]:
    return [g.format_word(int(w)) for w in ws]


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


_FLAT_LIST = re.compile(r"\[\s*((?:-?\d+|true|false|null)(?:,\s*(?:-?\d+|true|false|null))*)\s*\]")


def dump_json(obj) -> str:
    """Indented JSON with scalar lists (matrix rows) kept on one line."""
    text = json.dumps(obj, indent=1)
    return _FLAT_LIST.sub(lambda m: "[" + ", ".join(t.strip() for t in m.group(1).split(",")) + "]",
                          text)


def _emit(cfg: RunConfig, obj: dict, rows=None, text: str | None = None) -> str:
    if cfg.format == "json":
        return dump_json(obj)
    if cfg.format == "csv" and rows is not None:
        return _csv(rows).rstrip("\n")
    if text is not None:
        return text
    return dump_json(obj)


# subcommands; each returns (output text, verdicts or None)

def cmd_group(p: Pipeline):
    g = p.g
    auts = ordinary_automorphisms(g)
    verdicts = g.validate()
    obj = {
        "type": g.matrix.type_tag,
        "matrix": p.key,
        "rank": g.rank,
        "order": g.n,
        "expected_order": expected_order(g.matrix),
        "nu": g.nu,
        "w_max": g.format_word(g.w_max),
        "involutions": int(np.sum(g.inverse == np.arange(g.n))),
        "ordinary_automorphisms": [{"name": a.name, "cycles": a.cycle_notation()} for a in auts],
        "verdicts": verdicts,
    }
    rows = [["index", "word", "length"]] + [[w, g.format_word(w), int(g.length[w])]
                                            for w in range(g.n)]
    text = "\n".join([f"{obj['type']}: order {g.n}, rank {g.rank}, nu {g.nu}",
                      f"  w_max = {obj['w_max']}",
                      f"  involutions: {obj['involutions']}",
                      "  ordinary automorphisms: " + ", ".join(
                          a["name"] if a["name"] == a["cycles"] else f"{a['name']} {a['cycles']}"
                          for a in obj["ordinary_automorphisms"])]
                     + [f"  {k}: {'pass' if v else 'FAIL'}" for k, v in verdicts.items()])
    return _emit(p.cfg, obj, rows, text), verdicts


def cmd_kl(p: Pipeline):
    g, kl = p.g, p.kl
    cfg = p.cfg
    if cfg.x is not None:
        try:
            x, w = g.element(cfg.x), g.element(cfg.w)
        except CoxeterError as exc:
            raise UsageError(str(exc)) from exc
        poly = kl.p(x, w)
        obj = {"x": g.format_word(x), "w": g.format_word(w), "p": str(poly),
               "P_classical": kl.classical(x, w), "mu": kl.mu(x, w), "leq": kl.leq(x, w)}
        rows = [["x", "w", "p", "mu"], [obj["x"], obj["w"], obj["p"], obj["mu"]]]
        return _emit(cfg, obj, rows, str(poly)), None
    verdicts = kl.check_invariants()
    nz = kl.P[:, :, 0] != 0
    obj = {"type": g.matrix.type_tag, "order": g.n, "normalization": kl.version,
           "bruhat_pairs": int(nz.sum()), "max_coefficient": int(kl.P.max()),
           "mu_edges": int(sum(len(z) for z in kl.mu_z)), "verdicts": verdicts}
    rows = [["x", "w", "p"]]
    for w in range(g.n):
        for x in np.flatnonzero(nz[w]).tolist():
            rows.append([g.format_word(x), g.format_word(w), str(kl.p(x, w))])
    text = "\n".join([f"{obj['type']}: {obj['bruhat_pairs']} Bruhat pairs, "
                      f"max coefficient {obj['max_coefficient']}, {obj['mu_edges']} mu edges"]
                     + [f"  {k}: {'pass' if v else 'FAIL'}" for k, v in verdicts.items()])
    return _emit(cfg, obj, rows, text), verdicts


def cmd_cells(p: Pipeline):
    g, part = p.g, p.part
    verdicts = part.check_invariants()
    cells = []
    for c in range(part.n_two_sided):
        mem = part.two_sided_cell(c)
        cells.append({"id": c, "size": len(mem), "a": part.cell_a(c),
                      "left_cells": len(part.left_cells_in(c)),
                      "representative": g.format_word(mem[0]),
                      "distinguished": _words(g, part.distinguished_in(c))})
    k = part.order.shape[0]
    below = [[i, j] for j in range(k) for i in range(k) if i != j and part.order[i, j]]
    obj = {"type": g.matrix.type_tag, "order": g.n, "left_cells": part.n_left,
           "two_sided_cells": cells, "cell_order_below": below,
           "a_method": part.a_method, "verdicts": verdicts}
    rows = [["index", "word", "left", "right", "two_sided", "a", "delta", "distinguished"]]
    for w in range(g.n):
        rows.append([w, g.format_word(w), int(part.left[w]), int(part.right[w]),
                     int(part.two_sided[w]), int(part.a[w]), int(part.delta[w]),
                     int(part.distinguished[w])])
    lines = [f"{obj['type']}: {part.n_left} left cells, {part.n_two_sided} two-sided cells"]
    for c in cells:
        lines.append(f"  cell {c['id']}: size {c['size']}, a={c['a']}, "
                     f"{c['left_cells']} left cells, rep {c['representative']}")
    lines += [f"  {k}: {'pass' if v else 'FAIL'}" for k, v in verdicts.items()]
    return _emit(p.cfg, obj, rows, "\n".join(lines)), verdicts


def cmd_jring(p: Pipeline):
    g = p.g
    out, rows, lines, verdicts = [], [["cell", "x", "y", "z", "c"]], [], {}
    for c in p.cells():
        j = p.jring(c)
        prods = [[g.format_word(x), g.format_word(y), g.format_word(z), int(v)]
                 for x, y, z, v in j.triples.tolist()]
        out.append({"cell": c, "a": j.a, "size": j.size,
                    "distinguished": _words(g, j.distinguished),
                    "guards": dict(sorted(j.guards.items())), "products": prods})
        rows += [[c] + r for r in prods]
        lines.append(f"cell {c}: size {j.size}, a={j.a}, {len(prods)} nonzero products")
        for name, ok in sorted(j.guards.items()):
            lines.append(f"  {name}: {'pass' if ok else 'FAIL'}")
            verdicts[f"cell{c}.{name}"] = ok
        if j.size <= 6:
            lines += [f"  t[{a}] t[{b}] -> {v} t[{z}]" for a, b, z, v in prods]
    obj = {"type": g.matrix.type_tag, "cells": out}
    return _emit(p.cfg, obj, rows, "\n".join(lines)), verdicts


def _centre_reports(p: Pipeline, strict: bool) -> list[CentreReport]:
    reports = []
    for eps in p.automorphisms():
        for c in p.cells():
            j = p.jring(c)
            try:
                reports.append(centre_report(p.part, j, eps))
            except CellNotStableError:
                if strict:
                    raise
                log.info("skipping cell %d: not stable under %s", c, eps.name)
    return reports


def cmd_centre(p: Pipeline):
    explicit = p.cfg.cell.strip() != "all"
    reports = _centre_reports(p, strict=explicit)
    verdicts = {f"cell{r.cell}.{r.eps}.{k}": v for r in reports for k, v in r.verdicts.items()}
    if len(reports) == 1 and explicit:
        r = reports[0]
        rows = list(csv.reader(io.StringIO(r.to_csv())))
        return _emit(p.cfg, r.to_dict(), rows, r.to_text()), verdicts
    obj = {"type": p.g.matrix.type_tag, "note": BLOCK_NOTE,
           "reports": [r.to_dict() for r in reports]}
    rows = []
    for r in reports:
        rows += list(csv.reader(io.StringIO(r.to_csv())))
    text = "\n\n".join(r.to_text() for r in reports)
    return _emit(p.cfg, obj, rows, text), verdicts


def cmd_verify(p: Pipeline):
    g = p.g
    verdicts = {f"group.{k}": v for k, v in g.validate().items()}
    verdicts.update({f"kl.{k}": v for k, v in p.kl.check_invariants().items()})
    if g.n <= FULL_PRODUCT_LIMIT:
        verdicts["hecke.structure_constants_bar_invariant"] = \
            structure_constants_bar_invariant(p.kl, all_structure_constants(p.kl))
    verdicts.update({f"cells.{k}": v for k, v in p.part.check_invariants().items()})
    for c in range(p.part.n_two_sided):
        for k, v in p.jring(c).guards.items():
            verdicts[f"jring.cell{c}.{k}"] = v
    saved = (p.cfg.eps, p.cfg.cell)
    p.cfg.eps, p.cfg.cell = "all", "all"
    try:
        for r in _centre_reports(p, strict=False):
            for k, v in r.verdicts.items():
                verdicts[f"centre.cell{r.cell}.{r.eps}.{k}"] = v
    finally:
        p.cfg.eps, p.cfg.cell = saved
    obj = {"type": g.matrix.type_tag, "order": g.n, "ok": all(verdicts.values()),
           "verdicts": verdicts}
    rows = [["check", "result"]] + [[k, "pass" if v else "fail"] for k, v in verdicts.items()]
    text = "\n".join([f"{k}: {'pass' if v else 'FAIL'}" for k, v in verdicts.items()]
                     + [f"{g.matrix.type_tag}: {'all checks pass' if obj['ok'] else 'FAILED'}"])
    return _emit(p.cfg, obj, rows, text), verdicts


HANDLERS = {"group": cmd_group, "kl": cmd_kl, "cells": cmd_cells, "jring": cmd_jring,
            "centre": cmd_centre, "verify": cmd_verify}


def _error(cfg_format: str, kind: str, message: str, code: int, stream) -> int:
    obj = {"error": {"kind": kind, "message": message, "exit_code": code}}
    print(json.dumps(obj), file=stream)
    return code


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one configuration; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cm = cfg.validate()
        p = Pipeline(cfg, cm)
        lock = cache_lock(cfg.cache_dir) if cfg.cache_dir else contextlib.nullcontext()
        with lock:
            text, verdicts = HANDLERS[cfg.command](p)
    except UsageError as exc:
        return _error(cfg.format, "usage", str(exc), EXIT_USAGE, stderr)
    except (CoxeterError, ArithmeticError, RuntimeError, ValueError, MemoryError) as exc:
        return _error(cfg.format, type(exc).__name__, str(exc), EXIT_COMPUTE, stderr)
    print(text, file=stdout)
    if verdicts and not all(verdicts.values()):
        failed = sorted(k for k, v in verdicts.items() if not v)
        return _error(cfg.format, "verdict", "failed: " + ", ".join(failed), EXIT_VERDICT, stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cellcentre",
        description="Coxeter groups, Kazhdan-Lusztig cells, the ring J and twisted centre data.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in [("group", "enumerate the group and print statistics"),
                        ("kl", "build the KL table, optionally query one polynomial"),
                        ("cells", "cell partition report"),
                        ("jring", "structure constants of J on selected cells"),
                        ("centre", "Hom dimensions and psi for eps-stable cells"),
                        ("verify", "run the full invariant suite")]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--type", help='type such as "B3", "I2(5)", or a letter with --rank')
        sp.add_argument("--rank", type=int)
        sp.add_argument("--matrix", help="JSON file holding a Coxeter matrix")
        sp.add_argument("--eps", default="id",
                        help='id, flip, all, or generator cycles like "(1 3)(2)"')
        sp.add_argument("--cell", default="all",
                        help="all, middle, a cell id, or a word in the cell")
        sp.add_argument("--format", default="json", choices=FORMATS)
        sp.add_argument("--cache-dir")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
        sp.add_argument("-v", "--verbose", action="store_true")
        if name == "kl":
            sp.add_argument("--x", help='word such as "s2"')
            sp.add_argument("--w", help='word such as "s2 s1 s3 s2"')
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    cfg = RunConfig(ns.command, ns.type, ns.rank, ns.matrix, ns.eps, ns.cell, ns.format,
                    ns.cache_dir, ns.threads, ns.cap, getattr(ns, "x", None),
                    getattr(ns, "w", None))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

"""Synthetic corpus generator with recorded ground truth.

Flow per revision:
  1. build a random class model (fields, methods, flat statements), every
     element carrying a uid
  2. copy it and apply 1-3 edits: rename, move, type-change, insert, delete
  3. render both models, parse them, and derive the ground-truth node
     mapping by pairing elements with equal uids node by node
  4. corrupt the truth: swap the partners of two name nodes that sit in
     different statements, and label the four statements it touches

Written per revision:
    before.java  after.java  mapping.truth.json  mapping.corrupt.json  truth.json
and once per corpus:
    labels.json  (algorithm "corrupt")
"""
from __future__ import annotations

import copy
import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from string import Template

from astjudge.mappers.base import NodeMappingSet
from astjudge.mappers.external import save_mappings
from astjudge.pipeline.refine import refine
from astjudge.pipeline.tokenizer import tokenize
from astjudge.tree.model import Ast
from astjudge.tree.parser import parse_source

log = logging.getLogger("astjudge.synth")

TRUTH = "truth"
CORRUPT = "corrupt"

CLASS_NAMES = ["Account", "Ledger", "Buffer", "Router", "Session", "Matrix",
               "Catalog", "Invoice", "Tracker", "Scheduler"]
METHOD_NAMES = ["update", "reset", "compute", "flush", "apply", "merge",
                "scan", "adjust", "render", "settle"]
VAR_NAMES = ["count", "total", "index", "value", "size", "limit", "offset",
             "cursor", "result", "amount", "delta", "score", "level", "width",
             "height", "weight", "margin", "budget", "quota", "ratio"]
CALLS = ["log", "emit", "check", "notify", "record", "publish"]
TYPE_FAMILIES = [
    ["int", "long", "short", "double"],
    ["String", "Object", "Number"],
    ["List<String>", "Set<String>", "Deque<String>"],
]
EDIT_KINDS = ("rename", "move", "type-change", "insert", "delete")


# ═══════════════════════════════════════════════════════════════
#  MODEL
# ═══════════════════════════════════════════════════════════════

@dataclass
class _Stmt:
    uid: int
    template: str
    slots: dict[str, int]


@dataclass
class _Field:
    uid: int
    type: str
    var: int


@dataclass
class _Method:
    uid: int
    name: str
    param: int | None
    stmts: list[_Stmt] = field(default_factory=list)


@dataclass
class _Model:
    class_name: str
    names: dict[int, str] = field(default_factory=dict)
    fields: list[_Field] = field(default_factory=list)
    methods: list[_Method] = field(default_factory=list)
    next_uid: int = 0

    def uid(self) -> int:
        self.next_uid += 1
        return self.next_uid

    def new_var(self, rng: random.Random) -> int:
        used = set(self.names.values())
        free = [n for n in VAR_NAMES if n not in used]
        name = rng.choice(free) if free else f"v{self.next_uid + 1}"
        uid = self.uid()
        self.names[uid] = name
        return uid

    def render(self) -> str:
        lines = [f"public class {self.class_name} {{"]
        for f in self.fields:
            lines.append(f"    private {f.type} {self.names[f.var]};")
        for m in self.methods:
            params = f"int {self.names[m.param]}" if m.param is not None else ""
            lines.append(f"    public void {m.name}({params}) {{")
            for s in m.stmts:
                text = Template(s.template).substitute(
                    {k: self.names[v] for k, v in s.slots.items()})
                lines.append(f"        {text}")
            lines.append("    }")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _statement(model: _Model, rng: random.Random, visible: list[int],
               declare: bool) -> tuple[_Stmt, int | None]:
    """A random statement over visible vars; may declare one new local."""
    n = rng.randint(1, 9)
    a, b = rng.choice(visible), rng.choice(visible)
    call = rng.choice(CALLS)
    choice = rng.randrange(6 if declare else 5)
    if choice == 0:
        return _Stmt(model.uid(), f"$a = $b * {n};", {"a": a, "b": b}), None
    if choice == 1:
        return _Stmt(model.uid(), "$a++;", {"a": a}), None
    if choice == 2:
        return _Stmt(model.uid(), f"{call}($a);", {"a": a}), None
    if choice == 3:
        return _Stmt(model.uid(), f"if ($a > {n}) {{ $b = $a; }}",
                     {"a": a, "b": b}), None
    if choice == 4:
        return _Stmt(model.uid(), f"$a = {call}($b);", {"a": a, "b": b}), None
    local = model.new_var(rng)
    return _Stmt(model.uid(), f"int $a = $b + {n};", {"a": local, "b": b}), local


def build_model(rng: random.Random) -> _Model:
    model = _Model(rng.choice(CLASS_NAMES))
    for _ in range(rng.randint(1, 3)):
        family = rng.choice(TYPE_FAMILIES)
        model.fields.append(_Field(model.uid(), rng.choice(family),
                                   model.new_var(rng)))
    for name in rng.sample(METHOD_NAMES, rng.randint(1, 3)):
        param = model.new_var(rng) if rng.random() < 0.5 else None
        method = _Method(model.uid(), name, param)
        visible = [f.var for f in model.fields] + ([param] if param else [])
        for _ in range(rng.randint(2, 5)):
            stmt, local = _statement(model, rng, visible, declare=True)
            method.stmts.append(stmt)
            if local is not None:
                visible.append(local)
        model.methods.append(method)
    return model


# ═══════════════════════════════════════════════════════════════
#  EDITS
# ═══════════════════════════════════════════════════════════════

def apply_edit(model: _Model, kind: str, rng: random.Random) -> dict | None:
    """Apply one edit in place; returns its record, or None if inapplicable."""
    if kind == "rename":
        var = rng.choice(sorted(model.names))
        old = model.names[var]
        used = set(model.names.values())
        free = [n for n in VAR_NAMES if n not in used]
        new = rng.choice(free) if free else f"{old}Value"
        model.names[var] = new
        return {"kind": kind, "from": old, "to": new}
    if kind == "type-change":
        f = rng.choice(model.fields)
        family = next(fam for fam in TYPE_FAMILIES if f.type in fam)
        new = rng.choice([t for t in family if t != f.type])
        record = {"kind": kind, "field": model.names[f.var], "from": f.type, "to": new}
        f.type = new
        return record
    methods = [m for m in model.methods if len(m.stmts) >= 2]
    if kind == "move" and methods:
        m = rng.choice(methods)
        i = rng.randrange(len(m.stmts))
        stmt = m.stmts.pop(i)
        j = rng.choice([k for k in range(len(m.stmts) + 1) if k != i])
        m.stmts.insert(j, stmt)
        return {"kind": kind, "method": m.name, "from": i, "to": j}
    if kind == "delete" and methods:
        m = rng.choice(methods)
        i = rng.randrange(len(m.stmts))
        m.stmts.pop(i)
        return {"kind": kind, "method": m.name, "index": i}
    if kind == "insert":
        m = rng.choice(model.methods)
        visible = [f.var for f in model.fields] + ([m.param] if m.param else [])
        stmt, _ = _statement(model, rng, visible, declare=False)
        i = rng.randint(0, len(m.stmts))
        m.stmts.insert(i, stmt)
        return {"kind": kind, "method": m.name, "index": i}
    return None


# ═══════════════════════════════════════════════════════════════
#  GROUND TRUTH
# ═══════════════════════════════════════════════════════════════

def _elements(model: _Model, ast: Ast) -> dict[int, list[int]]:
    """uid -> node ids the element owns, in preorder ("class" is uid 0)."""
    td = ast.children(ast.root)[0]
    members = [c for c in ast.children(td)
               if ast.label(c) in ("FieldDeclaration", "MethodDeclaration")]
    out = {0: [ast.root, td] + [n for c in ast.children(td) if c not in members
                                for n in ast.subtree(c)]}
    fields = [c for c in members if ast.label(c) == "FieldDeclaration"]
    methods = [c for c in members if ast.label(c) == "MethodDeclaration"]
    for f, nid in zip(model.fields, fields):
        out[f.uid] = list(ast.subtree(nid))
    for m, nid in zip(model.methods, methods):
        body = ast.children(nid)[-1]
        stmts = ast.children(body)
        inner = {n for s in stmts for n in ast.subtree(s)}
        out[m.uid] = [n for n in ast.subtree(nid) if n not in inner]
        for s, sid in zip(m.stmts, stmts):
            out[s.uid] = list(ast.subtree(sid))
    return out


def truth_mapping(before: _Model, after: _Model, src: Ast, dst: Ast) -> NodeMappingSet:
    src_el = _elements(before, src)
    dst_el = _elements(after, dst)
    pairs = []
    for uid, nodes in src_el.items():
        other = dst_el.get(uid)
        if other is None or len(other) != len(nodes):
            continue
        if [src.label(n) for n in nodes] != [dst.label(n) for n in other]:
            log.debug(f"[synth] element {uid} changed shape; left unmapped")
            continue
        pairs.extend(zip(nodes, other))
    return NodeMappingSet.build(TRUTH, pairs, src, dst)


def corrupt_mapping(truth: NodeMappingSet, src: Ast, dst: Ast,
                    rng: random.Random) -> tuple[NodeMappingSet, list[tuple[str, int]]]:
    """Swap the partners of two name nodes from different statements.

    Returns the corrupted set and the (side, statement) pairs it touches;
    both empty of changes when no suitable pair exists.
    """
    names = [(s, d) for s, d in truth
             if src.label(s) == "SimpleName"
             and src.enclosing_statement(s) is not None
             and dst.enclosing_statement(d) is not None]
    candidates = []
    for i, (s1, d1) in enumerate(names):
        for s2, d2 in names[i + 1:]:
            if (src.enclosing_statement(s1) != src.enclosing_statement(s2)
                    and dst.enclosing_statement(d1) != dst.enclosing_statement(d2)
                    and src.value(s1) != src.value(s2)
                    and dst.value(d1) != dst.value(d2)):
                candidates.append(((s1, d1), (s2, d2)))
    if not candidates:
        return NodeMappingSet.build(CORRUPT, truth.pairs, src, dst), []
    (s1, d1), (s2, d2) = rng.choice(candidates)
    pairs = set(truth.pairs) - {(s1, d1), (s2, d2)} | {(s1, d2), (s2, d1)}
    touched = sorted({("src", src.enclosing_statement(s1)),
                      ("src", src.enclosing_statement(s2)),
                      ("dst", dst.enclosing_statement(d1)),
                      ("dst", dst.enclosing_statement(d2))})
    return NodeMappingSet.build(CORRUPT, pairs, src, dst), touched


# ═══════════════════════════════════════════════════════════════
#  CORPUS
# ═══════════════════════════════════════════════════════════════

def _write_json(path: Path, data):
    path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")


def generate_revision(rng: random.Random, rev_dir: Path, rev_id: str) -> list[dict]:
    """Write one revision; returns its label entries."""
    before = build_model(rng)
    after = copy.deepcopy(before)
    edits = []
    for kind in rng.choices(EDIT_KINDS, k=rng.randint(1, 3)):
        record = apply_edit(after, kind, rng)
        if record is not None:
            edits.append(record)

    before_text, after_text = before.render(), after.render()
    src, dst = parse_source(before_text), parse_source(after_text)
    truth = truth_mapping(before, after, src, dst)
    corrupt, touched = corrupt_mapping(truth, src, dst, rng)

    src_tokens, dst_tokens = tokenize(src), tokenize(dst)
    refined = refine(src, dst, src_tokens, dst_tokens, truth)

    rev_dir.mkdir(parents=True, exist_ok=True)
    (rev_dir / "before.java").write_text(before_text, encoding="utf-8")
    (rev_dir / "after.java").write_text(after_text, encoding="utf-8")
    _write_json(rev_dir / f"mapping.{TRUTH}.json", save_mappings(truth))
    _write_json(rev_dir / f"mapping.{CORRUPT}.json", save_mappings(corrupt))
    _write_json(rev_dir / "truth.json", {
        "edits": edits,
        "statement_pairs": [
            {"src": [src[s].start, src[s].end], "dst": [dst[d].start, dst[d].end]}
            for s, d in sorted(refined.statements.pairs)],
        "token_pairs": [[i, j] for i, j in sorted(refined.tokens.pairs)],
    })

    labels = []
    for side, stmt in touched:
        ast = src if side == "src" else dst
        labels.append({"revision": rev_id, "algorithm": CORRUPT, "side": side,
                       "statement_range": [ast[stmt].start, ast[stmt].end]})
    return labels


def generate_corpus(out: Path | str, seed: int = 0, count: int = 200) -> Path:
    """Write `count` revisions under out; returns the labels.json path."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    labels: list[dict] = []
    width = max(4, len(str(count)))
    for k in range(count):
        rev_id = f"r{k:0{width}d}"
        labels.extend(generate_revision(rng, out / rev_id, rev_id))
    path = out / "labels.json"
    _write_json(path, labels)
    log.info(f"[synth] {count} revisions, {len(labels)} labels -> {out}")
    return path

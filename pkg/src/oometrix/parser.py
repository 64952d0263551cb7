"""Turn MiniOO sources into a CodeModel.

Parsing happens per unit and is independent; the merge step resolves type
names across units, builds class skeletons, then walks every method body to
collect decision points, statements, invocations and attribute references.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

from .minioo import ast as A
from .minioo.lexer import PRIMITIVES, LexError, tokenize
from .minioo.syntax import ParseError, Parser, dotted_name
from .model import (
    AttributeInfo,
    AttributeRef,
    ClassInfo,
    CodeModel,
    Invocation,
    MethodInfo,
    ParentRef,
    build_model,
    canonicalize,
)

SOURCE_SUFFIXES = (".minijava", ".java")


@dataclass(frozen=True)
class SourceUnit:
    path: str
    text: str


@dataclass(frozen=True)
class ParseDiagnostic:
    path: str
    line: int
    column: int
    message: str
    severity: str = "error"  # or "warning"

    def __str__(self) -> str:
        return f"{self.path}:{self.line}:{self.column}: {self.severity}: {self.message}"

    def as_dict(self) -> dict:
        return {
            "path": self.path,
            "line": self.line,
            "column": self.column,
            "severity": self.severity,
            "message": self.message,
        }


@dataclass
class ParsedUnit:
    unit: A.CompilationUnit
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)


def count_comment_ratio(c: ClassInfo) -> float:
    return c.comment_lines / max(c.total_lines, 1)


def read_sources(paths: Iterable[str | Path]) -> list[SourceUnit]:
    """Collect source units from files and directories, in sorted path order."""
    files: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(f for f in p.rglob("*") if f.is_file() and f.suffix in SOURCE_SUFFIXES)
        else:
            files.append(p)
    return [SourceUnit(str(f), f.read_text(encoding="utf-8")) for f in sorted(set(files))]


def parse_unit(unit: SourceUnit) -> ParsedUnit:
    """Lex and parse one unit. On a syntax error the classes finished so far are kept."""
    try:
        lexed = tokenize(unit.text)
    except LexError as e:
        empty = A.CompilationUnit(unit.path, "", [], [], set(), len(unit.text.splitlines()))
        return ParsedUnit(empty, [ParseDiagnostic(unit.path, e.line, e.column, str(e))])
    parser = Parser(unit.path, lexed)
    try:
        cu = parser.parse_unit()
        return ParsedUnit(cu)
    except ParseError as e:
        cu = parser.unit
        # a nested class is only kept when its enclosing class completed too
        done = {c.qualified for c in cu.classes}
        cu.classes = [c for c in cu.classes if c.outer is None or c.outer in done]
        return ParsedUnit(cu, [ParseDiagnostic(unit.path, e.line, e.column, str(e))])


def parse_sources(
    units: Iterable[SourceUnit], name: str = "", version: str = "", jobs: int = 1
) -> tuple[CodeModel, list[ParseDiagnostic]]:
    units = list(units)
    if jobs > 1 and len(units) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parsed = list(pool.map(parse_unit, units))
    else:
        parsed = [parse_unit(u) for u in units]
    diags = [d for p in parsed for d in p.diagnostics]
    resolver = _Resolver([p.unit for p in parsed], diags)
    model = build_model(resolver.build(), name=name, version=version)
    return canonicalize(model), diags


def parse_paths(paths: Iterable[str | Path], name: str = "", jobs: int = 1):
    return parse_sources(read_sources(paths), name=name, jobs=jobs)


# -- resolution -----------------------------------------------------------------

# (base type, array dims); base is a qualified in-model class, a primitive,
# or the external name as written
TypeT = tuple[str, int]

_VISIBILITY = ("public", "protected", "private")


def _visibility(mods: set[str], in_interface: bool) -> str:
    for v in _VISIBILITY:
        if v in mods:
            return v
    return "public" if in_interface else "package"


@dataclass
class _ClassEntry:
    decl: A.ClassDecl
    unit: A.CompilationUnit
    info: ClassInfo | None = None
    parent_names: list[str] = field(default_factory=list)  # in-model parents
    method_pairs: list[tuple[A.MethodDecl, MethodInfo]] = field(default_factory=list)


class _Resolver:
    def __init__(self, units: list[A.CompilationUnit], diags: list[ParseDiagnostic]):
        self.units = units
        self.diags = diags
        self.classes: dict[str, _ClassEntry] = {}
        for cu in units:
            for decl in cu.classes:
                if decl.qualified in self.classes:
                    self.error(cu, decl.start_line, 1, f"duplicate class {decl.qualified}")
                    continue
                self.classes[decl.qualified] = _ClassEntry(decl, cu)

    def error(self, cu: A.CompilationUnit, line: int, col: int, msg: str, severity="error"):
        self.diags.append(ParseDiagnostic(cu.path, max(line, 1), max(col, 1), msg, severity))

    def warn(self, cu: A.CompilationUnit, line: int, col: int, msg: str):
        self.error(cu, line, col, msg, "warning")

    # -- type names --

    def resolve_type_name(self, name: str, entry: _ClassEntry) -> str | None:
        """Qualified in-model class for ``name`` as written inside ``entry``, if any."""
        if name in PRIMITIVES:
            return None
        head, _, rest = name.partition(".")
        base = self._resolve_simple(head, entry)
        if base is not None:
            full = f"{base}.{rest}" if rest else base
            if full in self.classes:
                return full
        if rest and name in self.classes:
            return name
        return None

    def _resolve_simple(self, name: str, entry: _ClassEntry) -> str | None:
        # enclosing scopes first: the class itself, its members, its outers
        scope: str | None = entry.decl.qualified
        while scope is not None:
            if scope.rsplit(".", 1)[-1] == name:
                return scope
            if f"{scope}.{name}" in self.classes:
                return f"{scope}.{name}"
            outer = self.classes.get(scope)
            scope = outer.decl.outer if outer else None
        cu = entry.unit
        same_pkg = f"{cu.package}.{name}" if cu.package else name
        if same_pkg in self.classes:
            return same_pkg
        for imp in cu.imports:
            if not imp.wildcard and imp.name.rsplit(".", 1)[-1] == name:
                return imp.name if imp.name in self.classes else None
        for imp in cu.imports:
            if imp.wildcard and f"{imp.name}.{name}" in self.classes:
                return f"{imp.name}.{name}"
        return None

    def type_of(self, ref: A.TypeRef, entry: _ClassEntry) -> TypeT:
        q = self.resolve_type_name(ref.name, entry)
        return (q or ref.name, ref.dims)

    @staticmethod
    def type_text(t: TypeT) -> str:
        return t[0] + "[]" * t[1]

    # -- skeletons --

    def build(self) -> list[ClassInfo]:
        for entry in self.classes.values():
            self._skeleton(entry)
        self._break_cycles()
        self._line_spans()
        self.infos: dict[str, ClassInfo] = {q: e.info for q, e in self.classes.items()}
        for q, entry in self.classes.items():
            methods = tuple(self._method_body(entry, m, info) for m, info in entry.method_pairs)
            entry.info = replace(entry.info, methods=methods)
        return [e.info for e in self.classes.values()]

    def _skeleton(self, entry: _ClassEntry) -> None:
        d, cu = entry.decl, entry.unit
        iface = d.kind == "interface"
        parents: list[ParentRef] = []
        for ref in d.extends + d.implements:
            q = self.resolve_type_name(ref.name, entry)
            p = ParentRef(q) if q else ParentRef(ref.name, external=True)
            if q == d.qualified:
                self.error(cu, ref.line, 1, f"class {d.name} inherits from itself")
                continue
            if p not in parents:
                parents.append(p)
        entry.parent_names = [p.name for p in parents if not p.external]

        attrs: list[AttributeInfo] = []
        seen: set[str] = set()
        for f in d.fields:
            if f.name in seen:
                self.error(cu, f.line, 1, f"duplicate field {f.name} in {d.name}")
                continue
            seen.add(f.name)
            vis = _visibility(f.modifiers, iface)
            static = "static" in f.modifiers or iface
            attrs.append(AttributeInfo(f.name, self.type_text(self.type_of(f.type, entry)), vis, static))

        entry.method_pairs = []
        sigs: set[str] = set()
        for m in d.methods:
            params = tuple(self.type_text(self.type_of(p.type, entry)) for p in m.params)
            abstract = m.body is None and "native" not in m.modifiers
            if m.body is None and not iface and "abstract" not in m.modifiers and "native" not in m.modifiers:
                self.warn(cu, m.line, 1, f"method {m.name} has no body; treated as abstract")
            info = MethodInfo(
                m.name,
                params,
                visibility=_visibility(m.modifiers, iface),
                is_abstract=abstract,
                is_constructor=m.is_constructor,
                cyclomatic=0 if abstract else 1,
            )
            if info.signature in sigs:
                self.error(cu, m.line, 1, f"duplicate method {info.signature} in {d.name}")
                continue
            sigs.add(info.signature)
            entry.method_pairs.append((m, info))

        entry.info = ClassInfo(
            d.qualified,
            cu.package,
            tuple(parents),
            is_abstract=iface or "abstract" in d.modifiers,
            attributes=tuple(attrs),
            methods=tuple(info for _, info in entry.method_pairs),
        )

    def _break_cycles(self) -> None:
        state: dict[str, int] = {}

        def visit(q: str) -> None:
            state[q] = 1
            entry = self.classes[q]
            for p in list(entry.parent_names):
                s = state.get(p, 0)
                if s == 1:
                    self.error(entry.unit, entry.decl.start_line, 1,
                               f"inheritance cycle through {q} -> {p}; edge dropped")
                    entry.parent_names.remove(p)
                    entry.info = replace(
                        entry.info, parents=tuple(r for r in entry.info.parents if r.name != p)
                    )
                elif s == 0:
                    visit(p)
            state[q] = 2

        for q in sorted(self.classes):
            if state.get(q, 0) == 0:
                visit(q)

    def _line_spans(self) -> None:
        # top-level classes partition their file; nested classes use their braces
        by_unit: dict[int, list[_ClassEntry]] = {}
        for entry in self.classes.values():
            if entry.decl.outer is None:
                by_unit.setdefault(id(entry.unit), []).append(entry)
        for entries in by_unit.values():
            entries.sort(key=lambda e: e.decl.start_line)
            total = entries[0].unit.total_lines
            for i, entry in enumerate(entries):
                start = 1 if i == 0 else entry.decl.start_line
                end = entries[i + 1].decl.start_line - 1 if i + 1 < len(entries) else total
                self._set_span(entry, start, max(end, start))
        for entry in self.classes.values():
            if entry.decl.outer is not None:
                self._set_span(entry, entry.decl.start_line, entry.decl.end_line)

    def _set_span(self, entry: _ClassEntry, start: int, end: int) -> None:
        end = min(end, max(entry.unit.total_lines, 1))
        total = max(end - start + 1, 0)
        comments = sum(1 for ln in entry.unit.comment_lines if start <= ln <= end)
        entry.info = replace(entry.info, total_lines=total, comment_lines=min(comments, total))

    # -- member lookup --

    def lineage(self, q: str) -> list[str]:
        """``q`` followed by its in-model ancestors, nearest first."""
        out, queue = [], [q]
        while queue:
            c = queue.pop(0)
            if c in out or c not in self.classes:
                continue
            out.append(c)
            queue.extend(self.classes[c].parent_names)
        return out

    def lookup_field(self, q: str, name: str) -> tuple[str, AttributeInfo] | None:
        for c in self.lineage(q):
            a = self.infos[c].attribute(name)
            if a is not None:
                return c, a
        return None

    def lookup_method(self, q: str, name: str, arity: int, ctor: bool = False):
        classes = [q] if ctor else self.lineage(q)
        for c in classes:
            for m in self.infos[c].methods:
                if m.name == name and m.arity == arity and m.is_constructor == ctor:
                    return c, m
        return None

    # -- bodies --

    def _method_body(self, entry: _ClassEntry, decl: A.MethodDecl, info: MethodInfo) -> MethodInfo:
        if decl.body is None:
            return info
        walker = _BodyWalker(self, entry)
        for p in decl.params:
            walker.declare(p.name, self.type_of(p.type, entry))
        walker.block(decl.body)
        return replace(
            info,
            cyclomatic=1 + walker.decisions,
            statements=walker.statements,
            invocations=tuple(
                Invocation(c, m, params, sites) for (c, m, params), sites in walker.calls.items()
            ),
            attribute_refs=tuple(AttributeRef(o, a) for o, a in walker.refs),
        )


_COMPARISON = frozenset("== != < > <= >= && || !".split())


class _BodyWalker:
    """Walks one method body, tracking local scopes for receiver typing."""

    def __init__(self, res: _Resolver, entry: _ClassEntry):
        self.res = res
        self.entry = entry
        self.cls = entry.decl.qualified
        self.scopes: list[dict[str, TypeT]] = [{}]
        self.decisions = 0
        self.statements = 0
        self.calls: dict[tuple[str, str, tuple[str, ...]], int] = {}
        self.refs: dict[tuple[str, str], None] = {}

    # scopes
    def declare(self, name: str, t: TypeT) -> None:
        self.scopes[-1][name] = t

    def local(self, name: str) -> TypeT | None:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    def push(self):
        self.scopes.append({})

    def pop(self):
        self.scopes.pop()

    def warn(self, node, msg: str) -> None:
        self.res.warn(self.entry.unit, node.line, getattr(node, "column", 1), msg)

    def enclosing(self) -> list[str]:
        out, q = [], self.cls
        while q is not None:
            out.append(q)
            q = self.res.classes[q].decl.outer
        return out

    # statements
    def block(self, b: A.Block) -> None:
        self.push()
        for s in b.body:
            self.stmt(s)
        self.pop()

    def stmt(self, s: A.Stmt) -> None:
        if isinstance(s, A.Block):
            self.block(s)
            return
        if isinstance(s, A.Empty):
            return
        if isinstance(s, A.Labeled):
            self.stmt(s.body)
            return
        if isinstance(s, A.LocalVar):
            self.local_var(s)
            return
        self.statements += 1
        if isinstance(s, A.ExprStmt):
            self.expr(s.expr)
        elif isinstance(s, A.If):
            self.decisions += 1
            self.expr(s.cond)
            self.stmt(s.then)
            if s.other is not None:
                self.stmt(s.other)
        elif isinstance(s, A.While):
            self.decisions += 1
            self.expr(s.cond)
            self.stmt(s.body)
        elif isinstance(s, A.DoWhile):
            self.decisions += 1
            self.stmt(s.body)
            self.expr(s.cond)
        elif isinstance(s, A.For):
            self.decisions += 1
            self.push()
            for i in s.init:
                if isinstance(i, A.LocalVar):
                    self.declare_vars(i)
                else:
                    self.expr(i.expr)
            if s.cond is not None:
                self.expr(s.cond)
            for u in s.update:
                self.expr(u)
            self.stmt(s.body)
            self.pop()
        elif isinstance(s, A.ForEach):
            self.decisions += 1
            self.expr(s.iterable)
            self.push()
            self.declare(s.name, self.res.type_of(s.type, self.entry))
            self.stmt(s.body)
            self.pop()
        elif isinstance(s, A.Switch):
            self.expr(s.subject)
            self.push()
            for case in s.cases:
                self.decisions += len(case.labels)
                for label in case.labels:
                    self.expr(label, quiet=True)
                for b in case.body:
                    self.stmt(b)
            self.pop()
        elif isinstance(s, (A.Return, A.Throw)):
            if s.value is not None:
                self.expr(s.value)
        elif isinstance(s, A.Try):
            self.push()
            for r in s.resources:
                self.declare_vars(r)
            self.block(s.body)
            self.pop()
            for c in s.catches:
                self.decisions += 1
                self.push()
                self.declare(c.name, self.res.type_of(c.types[0], self.entry))
                self.block(c.body)
                self.pop()
            if s.final is not None:
                self.block(s.final)
        elif isinstance(s, A.Synchronized):
            self.expr(s.lock)
            self.block(s.body)
        elif isinstance(s, A.Assert):
            self.expr(s.cond)
            if s.message is not None:
                self.expr(s.message)

    def local_var(self, s: A.LocalVar) -> None:
        # a declaration without initializer is not executable
        if any(init is not None for _, _, init in s.declarators):
            self.statements += 1
        self.declare_vars(s)

    def declare_vars(self, s: A.LocalVar) -> None:
        base = self.res.type_of(s.type, self.entry)
        for name, dims, init in s.declarators:
            if init is not None:
                self.expr(init)
            self.declare(name, (base[0], base[1] + dims))

    # expressions; each returns the inferred static type or None
    def expr(self, e: A.Expr, quiet: bool = False) -> TypeT | None:
        if isinstance(e, A.Literal):
            return {"double": ("double", 0), "int": ("int", 0), "String": ("String", 0),
                    "char": ("char", 0), "boolean": ("boolean", 0)}.get(e.kind)
        if isinstance(e, A.Name):
            return self.name(e, quiet)
        if isinstance(e, A.This):
            return (self.cls, 0)
        if isinstance(e, A.Super):
            parents = self.res.classes[self.cls].parent_names
            return (parents[0], 0) if parents else None
        if isinstance(e, A.FieldAccess):
            return self.field_access(e)
        if isinstance(e, A.Call):
            return self.call(e)
        if isinstance(e, A.CtorCall):
            arg_types = [self.expr(a) for a in e.args]
            if e.kind == "this":
                target = self.cls
            else:
                parents = self.res.classes[self.cls].parent_names
                target = parents[0] if parents else None
            if target is not None:
                self.invoke(target, target.rsplit(".", 1)[-1], len(arg_types), e, ctor=True)
            return None
        if isinstance(e, A.New):
            for a in e.args:
                self.expr(a)
            t = self.res.type_of(e.type, self.entry)
            if t[0] in self.res.classes:
                self.invoke(t[0], t[0].rsplit(".", 1)[-1], len(e.args), e, ctor=True)
            return t
        if isinstance(e, A.NewArray):
            for d in e.dims:
                self.expr(d)
            if e.init is not None:
                self.expr(e.init)
            t = self.res.type_of(e.type, self.entry)
            return (t[0], len(e.dims) + e.extra_dims)
        if isinstance(e, A.ArrayInit):
            for el in e.elements:
                self.expr(el)
            return None
        if isinstance(e, A.Index):
            t = self.expr(e.array)
            self.expr(e.index)
            return (t[0], t[1] - 1) if t and t[1] > 0 else None
        if isinstance(e, A.Unary):
            t = self.expr(e.operand)
            return ("boolean", 0) if e.op == "!" else t
        if isinstance(e, A.Binary):
            if e.op in ("&&", "||"):
                self.decisions += 1
            lt, rt = self.expr(e.left), self.expr(e.right)
            if e.op in _COMPARISON:
                return ("boolean", 0)
            if e.op == "+" and ("String", 0) in (lt, rt):
                return ("String", 0)
            return lt
        if isinstance(e, A.Ternary):
            self.decisions += 1
            self.expr(e.cond)
            t = self.expr(e.then)
            o = self.expr(e.other)
            return t or o
        if isinstance(e, A.Assign):
            t = self.expr(e.target)
            self.expr(e.value)
            return t
        if isinstance(e, A.Cast):
            self.expr(e.operand)
            return self.res.type_of(e.type, self.entry)
        if isinstance(e, A.InstanceOf):
            self.expr(e.operand)
            return ("boolean", 0)
        if isinstance(e, A.ClassLiteral):
            return ("Class", 0)
        return None

    def field_in_scope(self, name: str) -> tuple[str, AttributeInfo] | None:
        for q in self.enclosing():
            hit = self.res.lookup_field(q, name)
            if hit is not None:
                return hit
        return None

    def record_field(self, owner: str, attr: AttributeInfo) -> TypeT:
        self.refs[(owner, attr.name)] = None
        base = attr.type_name
        dims = 0
        while base.endswith("[]"):
            base, dims = base[:-2], dims + 1
        return (base, dims)

    def name(self, e: A.Name, quiet: bool) -> TypeT | None:
        t = self.local(e.ident)
        if t is not None:
            return t
        hit = self.field_in_scope(e.ident)
        if hit is not None:
            return self.record_field(*hit)
        q = self.res.resolve_type_name(e.ident, self.entry)
        if q is not None:
            return ("class:" + q, 0)
        if e.ident[:1].islower() and not quiet:
            self.warn(e, f"unresolved identifier '{e.ident}'")
        # capitalized unknown names are taken to be external classes
        return ("class:" + e.ident, 0) if e.ident[:1].isupper() else None

    def receiver(self, target: A.Expr) -> TypeT | None:
        """Type of a call/field target, treating dotted names as possible class names."""
        dotted = dotted_name(target)
        if dotted is not None and "." in dotted:
            head = dotted.split(".", 1)[0]
            if self.local(head) is None and self.field_in_scope(head) is None:
                q = self.res.resolve_type_name(dotted, self.entry)
                if q is not None:
                    return ("class:" + q, 0)
                if self.res.resolve_type_name(head, self.entry) is None:
                    # package-qualified external name
                    return ("class:" + dotted, 0)
        return self.expr(target)

    def field_access(self, e: A.FieldAccess) -> TypeT | None:
        t = self.receiver(e.target)
        if t is None:
            return None
        base = t[0].removeprefix("class:")
        if t[1] > 0:
            return ("int", 0) if e.name == "length" else None
        if base in self.res.classes:
            hit = self.res.lookup_field(base, e.name)
            if hit is not None:
                return self.record_field(*hit)
            nested = f"{base}.{e.name}"
            if t[0].startswith("class:") and nested in self.res.classes:
                return ("class:" + nested, 0)
            self.warn(e, f"no field '{e.name}' in {base}")
        return None

    def call(self, e: A.Call) -> TypeT | None:
        if e.target is None:
            for a in e.args:
                self.expr(a)
            for q in self.enclosing():
                hit = self.res.lookup_method(q, e.name, len(e.args))
                if hit is not None:
                    return self.record_call(hit, e)
            self.warn(e, f"unresolved method '{e.name}' with {len(e.args)} argument(s)")
            return None
        t = self.receiver(e.target)
        for a in e.args:
            self.expr(a)
        if t is None or t[1] > 0:
            return None
        base = t[0].removeprefix("class:")
        if base not in self.res.classes:
            return None
        return self.invoke(base, e.name, len(e.args), e)

    def invoke(self, q: str, name: str, arity: int, node, ctor: bool = False) -> TypeT | None:
        hit = self.res.lookup_method(q, name, arity, ctor=ctor)
        if hit is None:
            # a class without declared constructors has an implicit one
            if not (ctor and not any(m.is_constructor for m in self.res.infos[q].methods)):
                what = "constructor" if ctor else f"method '{name}'"
                self.warn(node, f"no {what} with {arity} argument(s) in {q}")
            return None
        return self.record_call(hit, node)

    def record_call(self, hit: tuple[str, MethodInfo], node) -> TypeT | None:
        owner, m = hit
        key = (owner, m.name, m.params)
        self.calls[key] = self.calls.get(key, 0) + 1
        decl = next(d for d, i in self.res.classes[owner].method_pairs if i.signature == m.signature)
        if decl.return_type is None:
            return (owner, 0)
        return self.res.type_of(decl.return_type, self.res.classes[owner])

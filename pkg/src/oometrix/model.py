"""Normalized object-oriented code model.

Every metric in the package reads only this representation. A model is a
flat list of classes grouped into packages; relations between classes
(inheritance, invocation, attribute reference, typed declarations) are
recorded on the members themselves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

SCHEMA_VERSION = 1

VISIBILITIES = ("public", "protected", "package", "private")


class ModelError(ValueError):
    """A model violates one of its structural invariants."""

    def __init__(self, invariant: str, entity: str = "", detail: str = ""):
        self.invariant = invariant
        self.entity = entity
        msg = invariant
        if entity:
            msg += f": {entity}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ModelParseError(ValueError):
    """The model file is not well-formed JSON."""

    def __init__(self, path: str, line: int, column: int, message: str):
        self.path = path
        self.line = line
        self.column = column
        super().__init__(f"{path}:{line}:{column}: {message}")


@dataclass(frozen=True)
class ParentRef:
    name: str
    external: bool = False


@dataclass(frozen=True)
class Invocation:
    """A static call from a method to ``target_class.method(params)``."""

    target_class: str
    method: str
    params: tuple[str, ...] = ()
    sites: int = 1

    @property
    def key(self) -> tuple[str, str, tuple[str, ...]]:
        return (self.target_class, self.method, self.params)


@dataclass(frozen=True)
class AttributeRef:
    owner: str
    attribute: str


@dataclass(frozen=True)
class AttributeInfo:
    name: str
    type_name: str = "int"
    visibility: str = "private"
    is_static: bool = False


@dataclass(frozen=True)
class MethodInfo:
    name: str
    params: tuple[str, ...] = ()
    visibility: str = "public"
    is_abstract: bool = False
    is_constructor: bool = False
    cyclomatic: int = 1
    statements: int = 0
    invocations: tuple[Invocation, ...] = ()
    attribute_refs: tuple[AttributeRef, ...] = ()

    @property
    def signature(self) -> str:
        return f"{self.name}({','.join(self.params)})"

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class ClassInfo:
    name: str
    package: str = ""
    parents: tuple[ParentRef, ...] = ()
    is_abstract: bool = False
    attributes: tuple[AttributeInfo, ...] = ()
    methods: tuple[MethodInfo, ...] = ()
    comment_lines: int = 0
    total_lines: int = 0

    @property
    def simple_name(self) -> str:
        return self.name.rsplit(".", 1)[-1]

    def method(self, name: str, params: Iterable[str]) -> MethodInfo | None:
        params = tuple(params)
        for m in self.methods:
            if m.name == name and m.params == params:
                return m
        return None

    def attribute(self, name: str) -> AttributeInfo | None:
        for a in self.attributes:
            if a.name == name:
                return a
        return None


@dataclass(frozen=True)
class PackageInfo:
    name: str
    class_names: tuple[str, ...] = ()


@dataclass(frozen=True)
class UseCase:
    name: str
    scenarios: tuple[str, ...] = ()


@dataclass(frozen=True)
class ScenarioModel:
    use_cases: tuple[UseCase, ...] = ()
    similar_pairs: frozenset[frozenset[str]] = frozenset()


@dataclass(frozen=True)
class CodeModel:
    name: str = ""
    version: str = ""
    packages: tuple[PackageInfo, ...] = ()
    classes: tuple[ClassInfo, ...] = ()
    scenario_model: ScenarioModel | None = None
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {c.name: c for c in self.classes})

    @property
    def tc(self) -> int:
        return len(self.classes)

    def get(self, name: str) -> ClassInfo | None:
        return self._index.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def class_names(self) -> list[str]:
        return [c.name for c in self.classes]


def package_of(qualified_name: str) -> str:
    return qualified_name.rsplit(".", 1)[0] if "." in qualified_name else ""


def build_model(
    classes: Iterable[ClassInfo],
    name: str = "",
    version: str = "",
    scenario_model: ScenarioModel | None = None,
    validate: bool = True,
) -> CodeModel:
    """Assemble a model, deriving the package list from the classes."""
    classes = tuple(classes)
    grouped: dict[str, list[str]] = {}
    for c in classes:
        grouped.setdefault(c.package, []).append(c.name)
    packages = tuple(PackageInfo(p, tuple(names)) for p, names in grouped.items())
    model = CodeModel(name, version, packages, classes, scenario_model)
    if validate:
        validate_model(model)
    return model


def canonicalize(model: CodeModel) -> CodeModel:
    """Return a copy with packages and classes sorted by name."""
    classes = tuple(sorted(model.classes, key=lambda c: c.name))
    packages = tuple(
        PackageInfo(p.name, tuple(sorted(p.class_names)))
        for p in sorted(model.packages, key=lambda p: p.name)
    )
    return CodeModel(model.name, model.version, packages, classes, model.scenario_model)


# -- validation ---------------------------------------------------------------


def validate_model(model: CodeModel) -> None:
    """Raise ModelError naming the first violated invariant."""
    seen: set[str] = set()
    for c in model.classes:
        if c.name in seen:
            raise ModelError("duplicate class", c.name)
        seen.add(c.name)

    owner: dict[str, str] = {}
    for p in model.packages:
        for cn in p.class_names:
            if cn not in seen:
                raise ModelError("package lists unknown class", p.name, cn)
            if cn in owner:
                raise ModelError("class in more than one package", cn)
            owner[cn] = p.name
    for c in model.classes:
        if owner.get(c.name) != c.package:
            raise ModelError("class not listed in its package", c.name, c.package)

    for c in model.classes:
        _validate_class(model, c)

    _check_acyclic(model)
    if model.scenario_model is not None:
        _validate_scenarios(model.scenario_model)


def _validate_class(model: CodeModel, c: ClassInfo) -> None:
    for p in c.parents:
        if not p.external and p.name not in model:
            raise ModelError("unresolved parent", c.name, p.name)
        if p.name == c.name:
            raise ModelError("inheritance cycle", c.name)
    if c.comment_lines < 0 or c.total_lines < 0:
        raise ModelError("negative line count", c.name)
    if c.comment_lines > c.total_lines:
        raise ModelError("commentLines exceeds totalLines", c.name)

    names: set[str] = set()
    for a in c.attributes:
        if a.visibility not in VISIBILITIES:
            raise ModelError("invalid visibility", f"{c.name}.{a.name}", a.visibility)
        if a.name in names:
            raise ModelError("duplicate attribute", f"{c.name}.{a.name}")
        names.add(a.name)

    sigs: set[str] = set()
    for m in c.methods:
        where = f"{c.name}.{m.signature}"
        if m.signature in sigs:
            raise ModelError("duplicate method signature", where)
        sigs.add(m.signature)
        if m.visibility not in VISIBILITIES:
            raise ModelError("invalid visibility", where, m.visibility)
        if m.is_abstract:
            if m.cyclomatic != 0 or m.statements != 0:
                raise ModelError("abstract method must have cyclomatic 0 and statements 0", where)
        elif m.cyclomatic < 1:
            raise ModelError("cyclomatic must be >= 1", where)
        if m.statements < 0:
            raise ModelError("negative statement count", where)
        for inv in m.invocations:
            if inv.sites < 1:
                raise ModelError("invocation siteCount must be >= 1", where)
            target = model.get(inv.target_class)
            if target is None or target.method(inv.method, inv.params) is None:
                raise ModelError(
                    "unresolved invocation", where,
                    f"{inv.target_class}.{inv.method}({','.join(inv.params)})",
                )
        for ref in m.attribute_refs:
            target = model.get(ref.owner)
            if target is None or target.attribute(ref.attribute) is None:
                raise ModelError("unresolved attribute reference", where, f"{ref.owner}.{ref.attribute}")


def _check_acyclic(model: CodeModel) -> None:
    state: dict[str, int] = {}

    def visit(name: str, trail: list[str]) -> None:
        state[name] = 1
        for p in model.get(name).parents:
            if p.external:
                continue
            s = state.get(p.name, 0)
            if s == 1:
                raise ModelError("inheritance cycle", " -> ".join(trail + [p.name]))
            if s == 0:
                visit(p.name, trail + [p.name])
        state[name] = 2

    for c in model.classes:
        if state.get(c.name, 0) == 0:
            visit(c.name, [c.name])


def _validate_scenarios(sm: ScenarioModel) -> None:
    scenarios: set[str] = set()
    for uc in sm.use_cases:
        for s in uc.scenarios:
            if s in scenarios:
                raise ModelError("scenario listed twice", s)
            scenarios.add(s)
    for pair in sm.similar_pairs:
        if len(pair) != 2:
            raise ModelError("similar pair must join two distinct scenarios", "/".join(sorted(pair)))
        for s in pair:
            if s not in scenarios:
                raise ModelError("similar pair names unknown scenario", s)


# -- hierarchy ----------------------------------------------------------------


@dataclass
class HierarchyIndex:
    """Per-class inheritance facts derived from a validated model."""

    ancestors: dict[str, frozenset[str]]
    external_ancestors: dict[str, frozenset[str]]
    descendants: dict[str, frozenset[str]]
    children: dict[str, tuple[str, ...]]
    depth: dict[str, int]

    def in_bases(self, name: str) -> int:
        return len(self.ancestors[name]) + len(self.external_ancestors[name])

    def related(self, a: str, b: str) -> bool:
        """True when one class is an in-model ancestor of the other."""
        return b in self.ancestors[a] or a in self.ancestors[b]


def resolve_hierarchy(model: CodeModel) -> HierarchyIndex:
    ancestors: dict[str, frozenset[str]] = {}
    external: dict[str, frozenset[str]] = {}
    depth: dict[str, int] = {}

    def resolve(name: str) -> None:
        if name in ancestors:
            return
        anc: set[str] = set()
        ext: set[str] = set()
        d = 0
        for p in model.get(name).parents:
            if p.external:
                ext.add(p.name)
                continue
            resolve(p.name)
            anc.add(p.name)
            anc |= ancestors[p.name]
            ext |= external[p.name]
            d = max(d, depth[p.name] + 1)
        ancestors[name] = frozenset(anc)
        external[name] = frozenset(ext)
        depth[name] = d

    for c in model.classes:
        resolve(c.name)

    descendants: dict[str, set[str]] = {c.name: set() for c in model.classes}
    children: dict[str, list[str]] = {c.name: [] for c in model.classes}
    for c in model.classes:
        for a in ancestors[c.name]:
            descendants[a].add(c.name)
        for p in c.parents:
            if not p.external and c.name not in children[p.name]:
                children[p.name].append(c.name)
    return HierarchyIndex(
        ancestors=ancestors,
        external_ancestors=external,
        descendants={k: frozenset(v) for k, v in descendants.items()},
        children={k: tuple(v) for k, v in children.items()},
        depth=depth,
    )


# -- JSON serialization -------------------------------------------------------


def model_to_dict(model: CodeModel) -> dict:
    out: dict = {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "model",
        "name": model.name,
        "version": model.version,
        "packages": [{"name": p.name, "classes": list(p.class_names)} for p in model.packages],
        "classes": [_class_to_dict(c) for c in model.classes],
    }
    if model.scenario_model is not None:
        sm = model.scenario_model
        out["scenarioModel"] = {
            "useCases": [{"name": u.name, "scenarios": list(u.scenarios)} for u in sm.use_cases],
            "similarPairs": sorted(sorted(p) for p in sm.similar_pairs),
        }
    return out


def _class_to_dict(c: ClassInfo) -> dict:
    return {
        "name": c.name,
        "package": c.package,
        "parents": [{"name": p.name, "external": True} if p.external else p.name for p in c.parents],
        "abstract": c.is_abstract,
        "commentLines": c.comment_lines,
        "totalLines": c.total_lines,
        "attributes": [
            {"name": a.name, "type": a.type_name, "visibility": a.visibility, "static": a.is_static}
            for a in c.attributes
        ],
        "methods": [_method_to_dict(m) for m in c.methods],
    }


def _method_to_dict(m: MethodInfo) -> dict:
    return {
        "name": m.name,
        "params": list(m.params),
        "visibility": m.visibility,
        "abstract": m.is_abstract,
        "constructor": m.is_constructor,
        "cyclomatic": m.cyclomatic,
        "statements": m.statements,
        "invocations": [
            {"class": i.target_class, "method": i.method, "params": list(i.params), "sites": i.sites}
            for i in m.invocations
        ],
        "attributeRefs": [{"class": r.owner, "attribute": r.attribute} for r in m.attribute_refs],
    }


def model_from_dict(data: dict, validate: bool = True) -> CodeModel:
    if not isinstance(data, dict):
        raise ModelError("model document must be a JSON object")
    version = data.get("schemaVersion", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ModelError("unsupported schemaVersion", str(version))
    kind = data.get("kind", "model")
    if kind != "model":
        raise ModelError("document kind is not 'model'", str(kind))
    try:
        classes = tuple(_class_from_dict(c) for c in data.get("classes", []))
        if "packages" in data:
            packages = tuple(
                PackageInfo(p["name"], tuple(p.get("classes", []))) for p in data["packages"]
            )
        else:
            grouped: dict[str, list[str]] = {}
            for c in classes:
                grouped.setdefault(c.package, []).append(c.name)
            packages = tuple(PackageInfo(k, tuple(v)) for k, v in grouped.items())
        sm = None
        if data.get("scenarioModel") is not None:
            raw = data["scenarioModel"]
            sm = ScenarioModel(
                use_cases=tuple(
                    UseCase(u["name"], tuple(u.get("scenarios", []))) for u in raw.get("useCases", [])
                ),
                similar_pairs=frozenset(frozenset(p) for p in raw.get("similarPairs", [])),
            )
    except (KeyError, TypeError) as exc:
        raise ModelError("malformed model document", detail=repr(exc)) from exc
    model = CodeModel(
        name=str(data.get("name", "")),
        version=str(data.get("version", "")),
        packages=packages,
        classes=classes,
        scenario_model=sm,
    )
    if validate:
        validate_model(model)
    return model


def _class_from_dict(d: dict) -> ClassInfo:
    parents = []
    for p in d.get("parents", []):
        if isinstance(p, str):
            parents.append(ParentRef(p))
        else:
            parents.append(ParentRef(p["name"], bool(p.get("external", False))))
    return ClassInfo(
        name=d["name"],
        package=d.get("package", package_of(d["name"])),
        parents=tuple(parents),
        is_abstract=bool(d.get("abstract", False)),
        attributes=tuple(
            AttributeInfo(
                a["name"],
                a.get("type", "int"),
                a.get("visibility", "private"),
                bool(a.get("static", False)),
            )
            for a in d.get("attributes", [])
        ),
        methods=tuple(_method_from_dict(m) for m in d.get("methods", [])),
        comment_lines=int(d.get("commentLines", 0)),
        total_lines=int(d.get("totalLines", 0)),
    )


def _method_from_dict(d: dict) -> MethodInfo:
    abstract = bool(d.get("abstract", False))
    return MethodInfo(
        name=d["name"],
        params=tuple(d.get("params", [])),
        visibility=d.get("visibility", "public"),
        is_abstract=abstract,
        is_constructor=bool(d.get("constructor", False)),
        cyclomatic=int(d.get("cyclomatic", 0 if abstract else 1)),
        statements=int(d.get("statements", 0)),
        invocations=tuple(
            Invocation(i["class"], i["method"], tuple(i.get("params", [])), int(i.get("sites", 1)))
            for i in d.get("invocations", [])
        ),
        attribute_refs=tuple(
            AttributeRef(r["class"], r["attribute"]) for r in d.get("attributeRefs", [])
        ),
    )


def read_json(path: str | Path) -> dict:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelParseError(str(path), exc.lineno, exc.colno, exc.msg) from exc


def load_model(path: str | Path) -> CodeModel:
    return model_from_dict(read_json(path))


def dumps_model(model: CodeModel) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def save_model(model: CodeModel, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")

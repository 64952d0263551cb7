"""Member resolution and class-to-class relations shared by the metric suites."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .model import AttributeInfo, ClassInfo, CodeModel, HierarchyIndex, MethodInfo, resolve_hierarchy


def base_type(type_name: str) -> str:
    while type_name.endswith("[]"):
        type_name = type_name[:-2]
    return type_name


def visible_to_subclass(visibility: str, owner: ClassInfo, sub: ClassInfo) -> bool:
    if visibility in ("public", "protected"):
        return True
    if visibility == "package":
        return owner.package == sub.package
    return False


def method_key(m: MethodInfo) -> tuple[str, int]:
    # overriding is decided on name + arity
    return (m.name, m.arity)


@dataclass(frozen=True)
class Member:
    owner: str
    method: MethodInfo | None = None
    attribute: AttributeInfo | None = None

    @property
    def ident(self) -> tuple:
        if self.method is not None:
            return (self.owner, "m", self.method.signature)
        return (self.owner, "a", self.attribute.name)


class ModelContext:
    """Lazily computed facts about a model, shared across metric functions.

    ``mood_constructors`` controls whether constructors count as declared
    methods in the inheritance-based measures.
    """

    def __init__(self, model: CodeModel, mood_constructors: bool = False):
        self.model = model
        self.mood_constructors = mood_constructors
        self._avail_m: dict[str, list[Member]] = {}
        self._avail_a: dict[str, list[Member]] = {}

    @cached_property
    def hierarchy(self) -> HierarchyIndex:
        return resolve_hierarchy(self.model)

    def cls(self, name: str) -> ClassInfo:
        return self.model.get(name)

    def in_model_parents(self, c: ClassInfo) -> list[ClassInfo]:
        return [self.cls(p.name) for p in c.parents if not p.external]

    # -- methods --------------------------------------------------------------

    def declared_methods(self, c: ClassInfo) -> list[MethodInfo]:
        """M_d for the inheritance measures (constructors per configuration)."""
        return [m for m in c.methods if self.mood_constructors or not m.is_constructor]

    def _parent_offered_methods(self, c: ClassInfo) -> list[Member]:
        offered: list[Member] = []
        seen: set = set()
        for p in self.in_model_parents(c):
            for mem in self.available_methods(p):
                if mem.method.is_constructor:
                    continue
                if not visible_to_subclass(mem.method.visibility, self.cls(mem.owner), c):
                    continue
                if mem.ident not in seen:
                    seen.add(mem.ident)
                    offered.append(mem)
        return offered

    def available_methods(self, c: ClassInfo) -> list[Member]:
        """Declared methods plus inherited, non-overridden ones."""
        if c.name in self._avail_m:
            return self._avail_m[c.name]
        declared = [Member(c.name, method=m) for m in c.methods]
        own_keys = {method_key(m) for m in c.methods if not m.is_constructor}
        inherited = [m for m in self._parent_offered_methods(c) if method_key(m.method) not in own_keys]
        result = declared + inherited
        self._avail_m[c.name] = result
        return result

    def inherited_methods(self, c: ClassInfo) -> list[Member]:
        return [m for m in self.available_methods(c) if m.owner != c.name]

    def overriding_methods(self, c: ClassInfo) -> list[MethodInfo]:
        """M_o: one declared method per overridden inherited method.

        Overloads sharing a name and arity all match the same inherited key;
        only the first declared one counts as the override, the rest are new.
        """
        offered = {method_key(m.method) for m in self._parent_offered_methods(c)}
        out, taken = [], set()
        for m in self.declared_methods(c):
            k = method_key(m)
            if not m.is_constructor and k in offered and k not in taken:
                taken.add(k)
                out.append(m)
        return out

    # -- attributes -----------------------------------------------------------

    def available_attributes(self, c: ClassInfo) -> list[Member]:
        if c.name in self._avail_a:
            return self._avail_a[c.name]
        own = {a.name for a in c.attributes}
        result = [Member(c.name, attribute=a) for a in c.attributes]
        seen: set = set()
        for p in self.in_model_parents(c):
            for mem in self.available_attributes(p):
                a = mem.attribute
                if a.name in own or mem.ident in seen:
                    continue
                if not visible_to_subclass(a.visibility, self.cls(mem.owner), c):
                    continue
                seen.add(mem.ident)
                result.append(mem)
        self._avail_a[c.name] = result
        return result

    def inherited_attributes(self, c: ClassInfo) -> list[Member]:
        return [m for m in self.available_attributes(c) if m.owner != c.name]

    # -- relations ------------------------------------------------------------

    @cached_property
    def uses(self) -> dict[str, frozenset[str]]:
        """Invocation or attribute-reference edges c -> d, d != c."""
        out: dict[str, frozenset[str]] = {}
        for c in self.model.classes:
            targets: set[str] = set()
            for m in c.methods:
                targets.update(i.target_class for i in m.invocations)
                targets.update(r.owner for r in m.attribute_refs)
            targets.discard(c.name)
            out[c.name] = frozenset(targets)
        return out

    @cached_property
    def dependencies(self) -> dict[str, frozenset[str]]:
        """``uses`` plus attribute and parameter types naming in-model classes."""
        out: dict[str, frozenset[str]] = {}
        for c in self.model.classes:
            targets = set(self.uses[c.name])
            for a in c.attributes:
                targets.add(base_type(a.type_name))
            for m in c.methods:
                targets.update(base_type(t) for t in m.params)
            targets = {t for t in targets if t in self.model and t != c.name}
            out[c.name] = frozenset(targets)
        return out

    @cached_property
    def dependents(self) -> dict[str, frozenset[str]]:
        users: dict[str, set[str]] = {c.name: set() for c in self.model.classes}
        for src, targets in self.dependencies.items():
            for t in targets:
                users[t].add(src)
        return {k: frozenset(v) for k, v in users.items()}

    @cached_property
    def method_index(self) -> dict[tuple[str, str, tuple[str, ...]], MethodInfo]:
        return {(c.name, m.name, m.params): m for c in self.model.classes for m in c.methods}

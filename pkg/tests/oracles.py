"""Brute-force reference implementations used to cross-check the metric code.

Everything here is written directly from the metric definitions with plain
loops over pairs, without the shared relation caches of the package.
"""

from __future__ import annotations

import re as _re
from itertools import combinations


def _strip(t: str) -> str:
    return t.replace("[]", "")


def ancestors(model, name: str) -> set[str]:
    out: set[str] = set()
    stack = [name]
    while stack:
        c = model.get(stack.pop())
        for p in c.parents:
            if not p.external and p.name not in out:
                out.add(p.name)
                stack.append(p.name)
    return out


def descendants(model, name: str) -> set[str]:
    return {c.name for c in model.classes if name in ancestors(model, c.name)}


def depth(model, name: str) -> int:
    ps = [p.name for p in model.get(name).parents if not p.external]
    return 0 if not ps else 1 + max(depth(model, p) for p in ps)


def uses(model, a: str, b: str) -> bool:
    """a invokes a method of b or references an attribute of b."""
    if a == b:
        return False
    for m in model.get(a).methods:
        if any(i.target_class == b for i in m.invocations):
            return True
        if any(r.owner == b for r in m.attribute_refs):
            return True
    return False


def client(model, a: str, b: str) -> bool:
    """uses, or an attribute or parameter typed with b."""
    if a == b:
        return False
    if uses(model, a, b):
        return True
    ca = model.get(a)
    if any(_strip(x.type_name) == b for x in ca.attributes):
        return True
    return any(_strip(t) == b for m in ca.methods for t in m.params)


def cf(model) -> float | None:
    tc = model.tc
    if tc < 2:
        return None
    hits = 0
    for a in model.class_names():
        for b in model.class_names():
            if a == b:
                continue
            if b in ancestors(model, a) or a in ancestors(model, b):
                continue
            if client(model, a, b):
                hits += 1
    return hits / (tc * tc - tc)


def cof(model) -> float | None:
    tc = model.tc
    desc_total = sum(len(descendants(model, c)) for c in model.class_names())
    denom = tc * tc - tc - 2 * desc_total
    if tc < 2 or denom <= 0:
        return None
    hits = 0
    for a in model.class_names():
        for b in model.class_names():
            if a != b and a not in descendants(model, b) and client(model, a, b):
                hits += 1
    return hits / denom


def cbo(model, name: str) -> tuple[int, int]:
    coupled = {d for d in model.class_names() if uses(model, name, d) or uses(model, d, name)}
    return len(coupled), len(coupled - ancestors(model, name))


def _visible(model, owner, visibility: str, other) -> bool:
    if visibility == "public":
        return True
    if visibility == "private":
        return False
    if visibility == "protected":
        return owner.name in ancestors(model, other.name)
    return owner.package == other.package


def mhf(model) -> float | None:
    if model.tc <= 1:
        return None
    num = den = 0
    for c in model.classes:
        for m in c.methods:
            if m.is_constructor:
                continue
            seen = sum(
                1 for o in model.classes if o.name != c.name and _visible(model, c, m.visibility, o)
            )
            num += 1 - seen / (model.tc - 1)
            den += 1
    return num / den if den else None


def ahf(model) -> float | None:
    if model.tc <= 1:
        return None
    num = den = 0
    for c in model.classes:
        for a in c.attributes:
            seen = sum(
                1 for o in model.classes if o.name != c.name and _visible(model, c, a.visibility, o)
            )
            num += 1 - seen / (model.tc - 1)
            den += 1
    return num / den if den else None


def mean_visibility(model, kind: str) -> float | None:
    """Average share of other classes that can see a method or attribute."""
    if model.tc <= 1:
        return None
    fractions = []
    for c in model.classes:
        members = [m for m in c.methods if not m.is_constructor] if kind == "method" else c.attributes
        for x in members:
            seen = sum(1 for o in model.classes if o.name != c.name and _visible(model, c, x.visibility, o))
            fractions.append(seen / (model.tc - 1))
    return sum(fractions) / len(fractions) if fractions else None


def _cohesive(c, exclude_constructors=False):
    return [m for m in c.methods if not m.is_abstract and not (exclude_constructors and m.is_constructor)]


def _own_attrs(c, m) -> set[str]:
    return {r.attribute for r in m.attribute_refs if r.owner == c.name}


def lcom12(c) -> tuple[int, int]:
    ms = _cohesive(c)
    p = q = 0
    for m1, m2 in combinations(ms, 2):
        if _own_attrs(c, m1) & _own_attrs(c, m2):
            q += 1
        else:
            p += 1
    return p, max(p - q, 0)


def _reach(c, m) -> set[str]:
    """Own attributes used by m directly or through same-class call chains (fixpoint)."""
    by_sig = {(x.name, x.params): x for x in c.methods}
    reached = {(m.name, m.params)}
    changed = True
    while changed:
        changed = False
        for sig in list(reached):
            for inv in by_sig[sig].invocations:
                k = (inv.method, inv.params)
                if inv.target_class == c.name and k in by_sig and k not in reached:
                    reached.add(k)
                    changed = True
    out: set[str] = set()
    for sig in reached:
        out |= _own_attrs(c, by_sig[sig])
    return out


def tcc(c) -> float | None:
    pub = [m for m in _cohesive(c) if m.visibility == "public"]
    n = len(pub)
    if n < 2:
        return None
    direct = sum(1 for a, b in combinations(pub, 2) if _reach(c, a) & _reach(c, b))
    return direct / (n * (n - 1) / 2)


# -- cyclomatic by token counting --------------------------------------------------

_COMMENT = _re.compile(r"//[^\n]*|/\*.*?\*/", _re.S)
_STRING = _re.compile(r'"(?:\\.|[^"\\])*"|\'(?:\\.|[^\'\\])*\'')
_HEADER = _re.compile(r"\b([A-Za-z_]\w*)\s*\(([^;{}()]*)\)\s*(?:throws\s+[\w.,\s]+)?\{")
_NOT_METHODS = {"if", "while", "for", "switch", "catch", "synchronized"}
_DECISION = _re.compile(r"\b(?:if|while|for|case|catch)\b|&&|\|\||\?")


def method_decisions(source: str) -> dict[tuple[str, int], int]:
    """Map (method name, arity) to 1 + decision tokens found in its body text."""
    text = _STRING.sub('""', _COMMENT.sub(" ", source))
    out: dict[tuple[str, int], int] = {}
    for m in _HEADER.finditer(text):
        name, params = m.group(1), m.group(2).strip()
        if name in _NOT_METHODS:
            continue
        depth, i = 1, m.end()
        while depth:
            depth += {"{": 1, "}": -1}.get(text[i], 0)
            i += 1
        arity = 0 if not params else params.count(",") + 1
        out[(name, arity)] = 1 + len(_DECISION.findall(text[m.end():i]))
    return out

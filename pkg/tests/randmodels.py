"""Seeded generator of random valid code models for property tests."""

from __future__ import annotations

import random

from oometrix.model import (
    AttributeInfo,
    AttributeRef,
    ClassInfo,
    Invocation,
    MethodInfo,
    ParentRef,
    build_model,
)

VIS = ("public", "protected", "package", "private")
PRIMS = ("int", "double", "boolean", "String")


def random_model(seed: int, max_classes: int = 15, max_members: int = 10, packages: int = 3):
    rng = random.Random(seed)
    n = rng.randint(0, max_classes)
    names = [f"p{rng.randrange(packages)}.C{i}" for i in range(n)]
    pkgs = [nm.split(".")[0] for nm in names]

    parents: list[list[str]] = []
    for i in range(n):
        ps = []
        if i and rng.random() < 0.5:
            ps.append(names[rng.randrange(i)])
            if i > 1 and rng.random() < 0.15:
                extra = names[rng.randrange(i)]
                if extra not in ps:
                    ps.append(extra)
        parents.append(ps)

    def typ() -> str:
        if names and rng.random() < 0.4:
            t = rng.choice(names)
        else:
            t = rng.choice(PRIMS)
        return t + "[]" if rng.random() < 0.1 else t

    # first pass: declarations
    skeleton: list[dict] = []
    for i in range(n):
        n_attr = rng.randint(0, max_members // 2)
        attrs = [
            AttributeInfo(f"a{k}", typ(), rng.choice(VIS), rng.random() < 0.1) for k in range(n_attr)
        ]
        methods = []
        sigs = set()
        inherited = [m for p in parents[i] for m in skeleton[names.index(p)]["methods"]]
        n_meth = rng.randint(0, max_members - n_attr)
        for k in range(n_meth):
            if inherited and rng.random() < 0.3:
                base = rng.choice(inherited)
                name, params = base[0], base[1]
            else:
                name = f"m{k}"
                params = tuple(typ() for _ in range(rng.randint(0, 2)))
            ctor = rng.random() < 0.1
            if ctor:
                name = names[i].split(".")[-1]
            sig = (name, params)
            if sig in sigs:
                continue
            sigs.add(sig)
            abstract = not ctor and rng.random() < 0.15
            methods.append((name, params, rng.choice(VIS), abstract, ctor))
        skeleton.append({"attrs": attrs, "methods": methods})

    all_methods = [(names[i], m) for i in range(n) for m in skeleton[i]["methods"]]
    all_attrs = [(names[i], a.name) for i in range(n) for a in skeleton[i]["attrs"]]

    classes = []
    for i in range(n):
        own_methods = [(names[i], m) for m in skeleton[i]["methods"]]
        own_attrs = [(names[i], a.name) for a in skeleton[i]["attrs"]]
        infos = []
        for name, params, vis, abstract, ctor in skeleton[i]["methods"]:
            invs: dict[tuple, int] = {}
            refs: list[AttributeRef] = []
            if not abstract:
                for _ in range(rng.randint(0, 3)):
                    pool = own_methods if own_methods and rng.random() < 0.4 else all_methods
                    if pool:
                        owner, m = rng.choice(pool)
                        key = (owner, m[0], m[1])
                        invs[key] = invs.get(key, 0) + rng.randint(1, 3)
                for _ in range(rng.randint(0, 3)):
                    pool = own_attrs if own_attrs and rng.random() < 0.7 else all_attrs
                    if pool:
                        r = AttributeRef(*rng.choice(pool))
                        if r not in refs:
                            refs.append(r)
            infos.append(
                MethodInfo(
                    name,
                    params,
                    visibility=vis,
                    is_abstract=abstract,
                    is_constructor=ctor,
                    cyclomatic=0 if abstract else rng.randint(1, 6),
                    statements=0 if abstract else rng.randint(0, 12),
                    invocations=tuple(Invocation(c, m, p, s) for (c, m, p), s in invs.items()),
                    attribute_refs=tuple(refs),
                )
            )
        ext = (ParentRef("java.lang.Thing", external=True),) if rng.random() < 0.1 else ()
        total = rng.randint(0, 80)
        classes.append(
            ClassInfo(
                names[i],
                pkgs[i],
                tuple(ParentRef(p) for p in parents[i]) + ext,
                is_abstract=any(m.is_abstract for m in infos),
                attributes=tuple(skeleton[i]["attrs"]),
                methods=tuple(infos),
                comment_lines=rng.randint(0, total),
                total_lines=total,
            )
        )
    return build_model(classes, name=f"random{seed}", version="1")

"""Class-level CK metrics and the coupling and cohesion suites."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations

from .model import ClassInfo, CodeModel, MethodInfo, PackageInfo, ScenarioModel
from .relations import ModelContext, base_type, method_key

ACCESSOR_RE = re.compile(r"^(get|set|is)[A-Z_]")


@dataclass
class ClassMetricRow:
    name: str
    dit: int = 0
    noc: int = 0
    rfc: int = 0
    rfc_alpha: dict[int, int] = field(default_factory=dict)
    wmc: int = 0
    cbo: int = 0
    cbo_prime: int = 0
    mpc: int = 0
    dac: int = 0
    dac_prime: int = 0
    icp: int = 0
    lcom1: int = 0
    lcom2: int = 0
    lcom3: int = 0
    lcom4: int = 0
    lcom5: float | None = None
    tcc: float | None = None
    lcc: float | None = None


@dataclass(frozen=True)
class PackageCouplingRow:
    name: str
    ca: int
    ce: int


def _ctx(model) -> ModelContext:
    return model if isinstance(model, ModelContext) else ModelContext(model)


def _cls(ctx: ModelContext, c: ClassInfo | str) -> ClassInfo:
    return ctx.cls(c) if isinstance(c, str) else c


# -- inheritance ---------------------------------------------------------------


def dit(model, c) -> int:
    ctx = _ctx(model)
    return ctx.hierarchy.depth[_cls(ctx, c).name]


def noc(model, c) -> int:
    ctx = _ctx(model)
    return len(ctx.hierarchy.children[_cls(ctx, c).name])


# -- size and complexity -------------------------------------------------------


def wmc(c: ClassInfo) -> int:
    return sum(m.cyclomatic for m in c.methods if not m.is_abstract)


def rfc(model, c, alpha: int = 1) -> int:
    """Size of the response set, following invocations ``alpha`` levels deep."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    ctx = _ctx(model)
    c = _cls(ctx, c)
    level = {(c.name, m.name, m.params) for m in c.methods}
    response = set(level)
    for _ in range(alpha):
        nxt = set()
        for key in level:
            m = ctx.method_index.get(key)
            if m is not None:
                nxt.update(inv.key for inv in m.invocations)
        level = nxt - response
        response |= nxt
        if not level:
            break
    return len(response)


# -- coupling ------------------------------------------------------------------


def cbo(model, c) -> tuple[int, int]:
    ctx = _ctx(model)
    name = _cls(ctx, c).name
    coupled = set(ctx.uses[name])
    for other, targets in ctx.uses.items():
        if name in targets:
            coupled.add(other)
    coupled.discard(name)
    prime = coupled - ctx.hierarchy.ancestors[name]
    return len(coupled), len(prime)


def mpc(c: ClassInfo) -> int:
    return sum(
        inv.sites for m in c.methods for inv in m.invocations if inv.target_class != c.name
    )


def dac(model: CodeModel, c: ClassInfo) -> tuple[int, int]:
    types = [base_type(a.type_name) for a in c.attributes]
    adt = [t for t in types if t in model]
    return len(adt), len(set(adt))


def ca_ce(model, package: PackageInfo | str) -> PackageCouplingRow:
    ctx = _ctx(model)
    if isinstance(package, str):
        package = next(p for p in ctx.model.packages if p.name == package)
    inside = set(package.class_names)
    ce = sum(1 for c in inside if ctx.dependencies[c] - inside)
    ca = sum(
        1
        for c in ctx.model.classes
        if c.name not in inside and ctx.dependencies[c.name] & inside
    )
    return PackageCouplingRow(package.name, ca, ce)


def cof(model) -> float | None:
    ctx = _ctx(model)
    tc = ctx.model.tc
    h = ctx.hierarchy
    denom = tc * tc - tc - 2 * sum(len(h.descendants[c.name]) for c in ctx.model.classes)
    if tc < 2 or denom <= 0:
        return None
    clients = sum(
        1
        for a, targets in ctx.dependencies.items()
        for b in targets
        if a not in h.descendants[b]
    )
    return clients / denom


def _overrides_below(ctx: ModelContext, target: tuple[str, str, tuple[str, ...]]):
    owner, name, params = target
    key = (name, len(params))
    for d in sorted(ctx.hierarchy.descendants[owner]):
        dc = ctx.cls(d)
        for m in ctx.overriding_methods(dc):
            if method_key(m) == key:
                yield (d, m.name, m.params)


def polymorphic_targets(model, method: MethodInfo) -> dict[tuple, int]:
    """Map each polymorphically invoked method to its invocation count."""
    ctx = _ctx(model)
    npi: dict[tuple, int] = {}
    for inv in method.invocations:
        for t in (inv.key, *_overrides_below(ctx, inv.key)):
            npi[t] = npi.get(t, 0) + inv.sites
    return npi


def icp_method(model, c, method: MethodInfo) -> int:
    ctx = _ctx(model)
    c = _cls(ctx, c)
    total = 0
    for target, count in polymorphic_targets(ctx, method).items():
        if target[0] == c.name:
            continue
        total += (1 + len(target[2])) * count
    return total


def icp(model, c) -> int:
    ctx = _ctx(model)
    c = _cls(ctx, c)
    return sum(icp_method(ctx, c, m) for m in c.methods)


def icp_system(model, classes=None) -> int:
    ctx = _ctx(model)
    names = classes if classes is not None else [c.name for c in ctx.model.classes]
    return sum(icp(ctx, n) for n in names)


# -- cohesion ------------------------------------------------------------------


def is_accessor(c: ClassInfo, m: MethodInfo) -> bool:
    own = [r for r in m.attribute_refs if r.owner == c.name]
    return (
        bool(ACCESSOR_RE.match(m.name))
        and len({r.attribute for r in own}) <= 1
        and not m.invocations
        and m.arity <= 1
    )


def cohesion_methods(
    c: ClassInfo, exclude_constructors: bool = False, exclude_accessors: bool = False
) -> list[MethodInfo]:
    out = []
    for m in c.methods:
        if m.is_abstract:
            continue
        if exclude_constructors and m.is_constructor:
            continue
        if exclude_accessors and is_accessor(c, m):
            continue
        out.append(m)
    return out


def referenced_attributes(c: ClassInfo, m: MethodInfo) -> frozenset[str]:
    return frozenset(r.attribute for r in m.attribute_refs if r.owner == c.name)


def _components(n: int, edges) -> int:
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    count = n
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            count -= 1
    return count


def _calls_between(c: ClassInfo, methods: list[MethodInfo]) -> list[tuple[int, int]]:
    pos = {(m.name, m.params): i for i, m in enumerate(methods)}
    edges = []
    for i, m in enumerate(methods):
        for inv in m.invocations:
            if inv.target_class == c.name:
                j = pos.get((inv.method, inv.params))
                if j is not None and j != i:
                    edges.append((i, j))
    return edges


def lcom_suite(
    c: ClassInfo, exclude_constructors: bool = False, exclude_accessors: bool = False
) -> tuple[int, int, int, int, float | None]:
    """Return (LCOM1, LCOM2, LCOM3, LCOM4, LCOM5) for one class."""
    methods = cohesion_methods(c, exclude_constructors, exclude_accessors)
    refs = [referenced_attributes(c, m) for m in methods]
    n = len(methods)
    sharing = [(i, j) for i, j in combinations(range(n), 2) if refs[i] & refs[j]]
    pairs = n * (n - 1) // 2
    q = len(sharing)
    p = pairs - q
    lcom1 = p
    lcom2 = p - q if p > q else 0
    lcom3 = _components(n, sharing)
    lcom4 = _components(n, sharing + _calls_between(c, methods))

    attrs = [a.name for a in c.attributes]
    if n <= 1 or not attrs:
        lcom5 = None
    else:
        mean_users = sum(sum(1 for r in refs if a in r) for a in attrs) / len(attrs)
        lcom5 = (n - mean_users) / (n - 1)
    return lcom1, lcom2, lcom3, lcom4, lcom5


def _reachable_attributes(c: ClassInfo) -> dict[tuple, frozenset[str]]:
    """Attributes a method of ``c`` uses directly or through same-class calls."""
    by_key = {(m.name, m.params): m for m in c.methods}
    out: dict[tuple, frozenset[str]] = {}
    for key, m in by_key.items():
        seen = {key}
        stack = [m]
        attrs: set[str] = set()
        while stack:
            cur = stack.pop()
            attrs |= referenced_attributes(c, cur)
            for inv in cur.invocations:
                k = (inv.method, inv.params)
                if inv.target_class == c.name and k not in seen and k in by_key:
                    seen.add(k)
                    stack.append(by_key[k])
        out[key] = frozenset(attrs)
    return out


def tcc_lcc(
    c: ClassInfo, exclude_constructors: bool = False, exclude_accessors: bool = False
) -> tuple[float | None, float | None]:
    public = [
        m
        for m in cohesion_methods(c, exclude_constructors, exclude_accessors)
        if m.visibility == "public"
    ]
    n = len(public)
    if n < 2:
        return None, None
    reach = _reachable_attributes(c)
    used = [reach[(m.name, m.params)] for m in public]
    direct = [(i, j) for i, j in combinations(range(n), 2) if used[i] & used[j]]
    pairs = n * (n - 1) / 2

    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            i = parent[i]
        return i

    for a, b in direct:
        parent[find(a)] = find(b)
    sizes: dict[int, int] = {}
    for i in range(n):
        r = find(i)
        sizes[r] = sizes.get(r, 0) + 1
    connected = sum(s * (s - 1) // 2 for s in sizes.values())
    return len(direct) / pairs, connected / pairs


# -- per-class assembly --------------------------------------------------------


def class_metrics(
    model,
    c,
    alpha: int = 1,
    exclude_constructors: bool = False,
    exclude_accessors: bool = False,
) -> ClassMetricRow:
    ctx = _ctx(model)
    c = _cls(ctx, c)
    cb, cbp = cbo(ctx, c)
    d, dp = dac(ctx.model, c)
    l1, l2, l3, l4, l5 = lcom_suite(c, exclude_constructors, exclude_accessors)
    t, lc = tcc_lcc(c, exclude_constructors, exclude_accessors)
    return ClassMetricRow(
        name=c.name,
        dit=dit(ctx, c),
        noc=noc(ctx, c),
        rfc=rfc(ctx, c, 1),
        rfc_alpha={k: rfc(ctx, c, k) for k in range(1, alpha + 1)},
        wmc=wmc(c),
        cbo=cb,
        cbo_prime=cbp,
        mpc=mpc(c),
        dac=d,
        dac_prime=dp,
        icp=icp(ctx, c),
        lcom1=l1,
        lcom2=l2,
        lcom3=l3,
        lcom4=l4,
        lcom5=l5,
        tcc=t,
        lcc=lc,
    )


# -- use-case cohesion ---------------------------------------------------------


@dataclass(frozen=True)
class UseCaseCohesion:
    cl_uc: dict[str, float | None]
    cl_ucm: float | None
    fc: float | None


def _pair_count(n: int) -> int:
    return n * (n - 1) // 2


def usecase_cohesion(sm: ScenarioModel, model: CodeModel | None = None) -> UseCaseCohesion:
    from .mood import cf

    per_uc: dict[str, float | None] = {}
    for uc in sm.use_cases:
        members = set(uc.scenarios)
        total = _pair_count(len(members))
        if total == 0:
            per_uc[uc.name] = None
            continue
        similar = sum(1 for p in sm.similar_pairs if p <= members)
        per_uc[uc.name] = similar / total
    all_pairs = _pair_count(sum(len(uc.scenarios) for uc in sm.use_cases))
    cl_ucm = 1 - len(sm.similar_pairs) / all_pairs if all_pairs else None
    fc = cf(model) if model is not None else None
    return UseCaseCohesion(per_uc, cl_ucm, fc)


# -- measure classification ----------------------------------------------------


@dataclass(frozen=True)
class MeasureClassification:
    measure_id: str
    family: str
    connection_type: str
    domain: str
    directness: str
    inheritance_handling: str
    accessor_policy: str
    locus: str = ""
    implemented: bool = True


_SIMILAR = "methods directly reference a common attribute"
_CONNECTED = "methods directly or indirectly reference a common attribute"
_INVOKES = "method invokes method of the same class"
_COH_INH = "declared members only"
_COH_ACC = "included by default; --exclude-accessors/--exclude-constructors"

MEASURES: tuple[MeasureClassification, ...] = (
    # cohesion
    MeasureClassification("lcom1", "cohesion", _SIMILAR, "class", "direct", _COH_INH, _COH_ACC),
    MeasureClassification("lcom2", "cohesion", _SIMILAR, "class", "direct", _COH_INH, _COH_ACC),
    MeasureClassification("lcom3", "cohesion", _SIMILAR, "class", "indirect", _COH_INH, _COH_ACC),
    MeasureClassification(
        "lcom4", "cohesion", f"{_SIMILAR}; {_INVOKES}", "class", "indirect", _COH_INH, _COH_ACC
    ),
    MeasureClassification(
        "lcom5", "cohesion", "method references attribute", "class", "direct", _COH_INH, _COH_ACC
    ),
    MeasureClassification("tcc", "cohesion", _CONNECTED, "class", "direct", _COH_INH, _COH_ACC),
    MeasureClassification("lcc", "cohesion", _CONNECTED, "class", "indirect", _COH_INH, _COH_ACC),
    MeasureClassification(
        "co", "cohesion", f"{_SIMILAR}; {_INVOKES}", "class", "direct", _COH_INH, _COH_ACC,
        implemented=False,
    ),
    MeasureClassification(
        "ich", "cohesion", _INVOKES, "method", "direct", _COH_INH, _COH_ACC, implemented=False
    ),
    *(
        MeasureClassification(
            mid, "cohesion", "data-data and data-method interaction", "class", "indirect",
            _COH_INH, _COH_ACC, implemented=False,
        )
        for mid in ("rci", "nrci", "prci", "orci")
    ),
    # coupling
    MeasureClassification(
        "cbo", "coupling", "method invocation; attribute reference", "class", "direct",
        "inheritance relations counted", "n/a", locus="import and export",
    ),
    MeasureClassification(
        "cbo_prime", "coupling", "method invocation; attribute reference", "class", "direct",
        "ancestors excluded", "n/a", locus="import and export",
    ),
    MeasureClassification(
        "rfc", "coupling", "method invocation", "class", "direct",
        "inherited methods counted when invoked", "n/a", locus="import",
    ),
    MeasureClassification(
        "rfc_alpha", "coupling", "method invocation", "class", "indirect",
        "inherited methods counted when invoked", "n/a", locus="import",
    ),
    MeasureClassification(
        "mpc", "coupling", "method invocation (per static call site)", "class", "direct",
        "calls to inherited methods counted", "n/a", locus="import",
    ),
    MeasureClassification(
        "dac", "coupling", "aggregation via attribute type", "class", "direct",
        "declared attributes only", "n/a", locus="import",
    ),
    MeasureClassification(
        "dac_prime", "coupling", "aggregation via attribute type", "class", "direct",
        "declared attributes only", "n/a", locus="import",
    ),
    MeasureClassification(
        "icp", "coupling", "polymorphic method invocation weighted by parameters", "method",
        "direct", "descendant overrides expanded", "n/a", locus="import",
    ),
    MeasureClassification(
        "ca", "coupling", "class dependency", "set-of-classes", "direct",
        "inheritance links not counted", "n/a", locus="export",
    ),
    MeasureClassification(
        "ce", "coupling", "class dependency", "set-of-classes", "direct",
        "inheritance links not counted", "n/a", locus="import",
    ),
    MeasureClassification(
        "cf", "coupling", "message passing; semantic association", "system", "direct",
        "ancestor and descendant pairs excluded", "n/a", locus="import and export",
    ),
    MeasureClassification(
        "cof", "coupling", "message passing; semantic association", "system", "direct",
        "descendant-to-ancestor pairs excluded", "n/a", locus="import and export",
    ),
)


def classify_measures() -> list[MeasureClassification]:
    return list(MEASURES)

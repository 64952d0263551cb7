"""Quality models layered on top of the raw metrics.

Three models live here:

* QMOOD: eleven design properties combined by fixed linear weights into six
  quality factors and their total (TQI).
* A Logiscope-style maintainability model: eleven per-class operands summed
  into four criteria whose total is the maintainability factor, plus
  threshold-based classification of classes.
* Version-to-version comparison: SDI instability and the tracking check
  that criteria move in the same direction as their operands.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from statistics import mean

from .ck import dac, wmc
from .model import ClassInfo, CodeModel, ModelError, SCHEMA_VERSION
from .parser import count_comment_ratio
from .relations import ModelContext

# -- QMOOD -------------------------------------------------------------------

PROPERTY_NAMES = ("dsc", "noh", "ana", "dam", "dcc", "cam", "moa", "mfa", "nop", "cis", "nom")

# design property -> weight, per quality factor
FACTOR_WEIGHTS: dict[str, dict[str, float]] = {
    "reusability": {"dcc": -0.25, "cam": 0.25, "cis": 0.5, "dsc": 0.5},
    "flexibility": {"dam": 0.25, "dcc": -0.25, "moa": 0.5, "nop": 0.5},
    "understandability": {
        "ana": -0.33, "dam": 0.33, "dcc": -0.33, "cam": 0.33,
        "nop": -0.33, "nom": -0.33, "dsc": -0.33,
    },
    "functionality": {"cam": 0.12, "nop": 0.22, "cis": 0.22, "dsc": 0.22, "noh": 0.22},
    "extendibility": {"ana": 0.5, "dcc": -0.5, "mfa": 0.5, "nop": 0.5},
    "effectiveness": {"ana": 0.2, "dam": 0.2, "moa": 0.2, "mfa": 0.2, "nop": 0.2},
}
FACTOR_NAMES = tuple(FACTOR_WEIGHTS)


@dataclass(frozen=True)
class DesignProperties:
    dsc: float | None = None
    noh: float | None = None
    ana: float | None = None
    dam: float | None = None
    dcc: float | None = None
    cam: float | None = None
    moa: float | None = None
    mfa: float | None = None
    nop: float | None = None
    cis: float | None = None
    nom: float | None = None
    normalized: DesignProperties | None = None

    def values(self) -> dict[str, float | None]:
        return {k: getattr(self, k) for k in PROPERTY_NAMES}

    def scaled(self, a: float) -> DesignProperties:
        return DesignProperties(**{k: None if v is None else a * v for k, v in self.values().items()})


@dataclass(frozen=True)
class QualityFactors:
    reusability: float | None
    flexibility: float | None
    understandability: float | None
    functionality: float | None
    extendibility: float | None
    effectiveness: float | None
    tqi: float | None

    def as_dict(self) -> dict[str, float | None]:
        return asdict(self)


def _mean(values) -> float | None:
    values = [v for v in values if v is not None]
    return mean(values) if values else None


def _cam(c: ClassInfo) -> float | None:
    if not c.methods:
        return None
    universe = {t for m in c.methods for t in m.params}
    if not universe:
        return None
    overlap = sum(len(set(m.params) & universe) for m in c.methods)
    return overlap / (len(c.methods) * len(universe))


def _dam(c: ClassInfo) -> float | None:
    if not c.attributes:
        return None
    hidden = sum(1 for a in c.attributes if a.visibility in ("private", "protected"))
    return hidden / len(c.attributes)


def _mfa(ctx: ModelContext, c: ClassInfo) -> float | None:
    inherited = len(ctx.inherited_methods(c))
    total = inherited + len(ctx.declared_methods(c))
    return inherited / total if total else None


def _raw_properties(model: CodeModel, mood_constructors: bool = False) -> DesignProperties:
    ctx = ModelContext(model, mood_constructors=mood_constructors)
    h = ctx.hierarchy
    classes = model.classes
    roots = [
        c for c in classes
        if not any(not p.external for p in c.parents) and h.descendants[c.name]
    ]
    return DesignProperties(
        dsc=float(model.tc),
        noh=float(len(roots)),
        ana=_mean(h.depth[c.name] for c in classes),
        dam=_mean(_dam(c) for c in classes),
        dcc=_mean(len(ctx.dependencies[c.name]) for c in classes),
        cam=_mean(_cam(c) for c in classes),
        moa=_mean(dac(model, c)[0] for c in classes),
        mfa=_mean(_mfa(ctx, c) for c in classes),
        nop=_mean(sum(1 for m in c.methods if m.is_abstract) for c in classes),
        cis=_mean(sum(1 for m in c.methods if m.visibility == "public") for c in classes),
        nom=_mean(len(c.methods) for c in classes),
    )


def design_properties(
    model: CodeModel, baseline: CodeModel | None = None, mood_constructors: bool = False
) -> DesignProperties:
    """QMOOD design properties; normalized against ``baseline`` when given."""
    raw = _raw_properties(model, mood_constructors)
    if baseline is None:
        return raw
    base = _raw_properties(baseline, mood_constructors).values()
    norm = {}
    for k, v in raw.values().items():
        b = base[k]
        norm[k] = None if v is None or b is None or b == 0 else v / b
    return replace(raw, normalized=DesignProperties(**norm))


def quality_factors(p: DesignProperties) -> QualityFactors:
    values = p.values()
    out: dict[str, float | None] = {}
    for factor, weights in FACTOR_WEIGHTS.items():
        terms = [values[prop] for prop in weights]
        if any(t is None for t in terms):
            out[factor] = None
        else:
            out[factor] = sum(w * values[prop] for prop, w in weights.items())
    parts = list(out.values())
    tqi = None if any(v is None for v in parts) else sum(parts)
    return QualityFactors(tqi=tqi, **out)


# -- Logiscope operands and criteria ---------------------------------------------

OPERANDS = (
    "cl_wmc", "cl_comf", "in_bases", "cu_cdused", "cl_stat", "cl_func",
    "cl_data", "cl_data_publ", "cu_cdusers", "in_noc", "cl_func_publ",
)

CRITERIA: dict[str, tuple[str, ...]] = {
    "analyzability": ("cl_wmc", "cl_comf", "in_bases", "cu_cdused"),
    "changeability": ("cl_stat", "cl_func", "cl_data"),
    "stability": ("cl_data_publ", "cu_cdusers", "in_noc", "cl_func_publ"),
    "testability": ("cl_wmc", "cl_func", "cu_cdused"),
}
CRITERIA_NAMES = (*CRITERIA, "maintainability")


@dataclass(frozen=True)
class OperandVector:
    cl_wmc: float = 0
    cl_comf: float = 0
    in_bases: float = 0
    cu_cdused: float = 0
    cl_stat: float = 0
    cl_func: float = 0
    cl_data: float = 0
    cl_data_publ: float = 0
    cu_cdusers: float = 0
    in_noc: float = 0
    cl_func_publ: float = 0

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in OPERANDS}

    @classmethod
    def from_dict(cls, d: dict) -> OperandVector:
        unknown = set(d) - set(OPERANDS)
        if unknown:
            raise ModelError("unknown operand", ", ".join(sorted(unknown)))
        return cls(**d)


@dataclass(frozen=True)
class CriteriaScores:
    analyzability: float
    changeability: float
    stability: float
    testability: float
    maintainability: float = field(init=False)

    def __post_init__(self):
        total = self.analyzability + self.changeability + self.stability + self.testability
        object.__setattr__(self, "maintainability", total)

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in CRITERIA_NAMES}


@dataclass(frozen=True)
class Discrepancy:
    """An externally reported criterion value that disagrees with its own operands."""

    class_name: str
    criterion: str
    computed: float
    printed: float


def operand_vector(
    model: CodeModel | ModelContext, c: ClassInfo | str, exclude_constructors: bool = False
) -> OperandVector:
    ctx = model if isinstance(model, ModelContext) else ModelContext(model)
    if isinstance(c, str):
        c = ctx.cls(c)
    methods = [m for m in c.methods if not (exclude_constructors and m.is_constructor)]
    return OperandVector(
        cl_wmc=wmc(c),
        cl_comf=100.0 * count_comment_ratio(c),
        in_bases=ctx.hierarchy.in_bases(c.name),
        cu_cdused=len(ctx.dependencies[c.name]),
        cl_stat=sum(m.statements for m in c.methods),
        cl_func=len(methods),
        cl_data=len(c.attributes),
        cl_data_publ=sum(1 for a in c.attributes if a.visibility == "public"),
        cu_cdusers=len(ctx.dependents[c.name]),
        in_noc=len(ctx.hierarchy.children[c.name]),
        cl_func_publ=sum(1 for m in methods if m.visibility == "public"),
    )


def criteria_scores(v: OperandVector) -> CriteriaScores:
    ops = v.as_dict()
    return CriteriaScores(**{name: sum(ops[o] for o in parts) for name, parts in CRITERIA.items()})


def apply_printed(
    class_name: str, scores: CriteriaScores, printed: dict[str, float] | None
) -> tuple[CriteriaScores, list[Discrepancy]]:
    """Substitute externally reported criterion values and flag those that disagree.

    A reported maintainability total is checked against the sum of the
    (possibly substituted) criteria but never substituted itself.
    """
    if not printed:
        return scores, []
    unknown = set(printed) - set(CRITERIA_NAMES)
    if unknown:
        raise ModelError("unknown criterion", ", ".join(sorted(unknown)))
    computed = scores.as_dict()
    issues = [
        Discrepancy(class_name, k, computed[k], printed[k])
        for k in CRITERIA
        if k in printed and printed[k] != computed[k]
    ]
    merged = CriteriaScores(**{k: printed.get(k, computed[k]) for k in CRITERIA})
    if "maintainability" in printed and printed["maintainability"] != merged.maintainability:
        issues.append(
            Discrepancy(class_name, "maintainability", merged.maintainability, printed["maintainability"])
        )
    return merged, issues


# -- thresholds and classification --------------------------------------------

DEFAULT_BOUNDS: dict[str, tuple[float, float]] = {
    "cl_wmc": (0, 60),
    "cl_comf": (0, 100),
    "in_bases": (0, 3),
    "cu_cdused": (0, 10),
    "cl_stat": (0, 100),
    "cl_func": (0, 25),
    "cl_data": (0, 7),
    "cl_data_publ": (0, 0),
    "cu_cdusers": (0, 5),
    "in_noc": (0, 5),
    "cl_func_publ": (0, 15),
}

# most violations tolerated by each category, best first; anything above is poor
DEFAULT_CATEGORY_RULE: tuple[tuple[str, int], ...] = (("excellent", 0), ("good", 1), ("fair", 3))
CATEGORIES = ("excellent", "good", "fair", "poor")


@dataclass(frozen=True)
class ThresholdConfig:
    bounds: dict[str, tuple[float, float]] = field(default_factory=lambda: dict(DEFAULT_BOUNDS))
    category_rule: tuple[tuple[str, int], ...] = DEFAULT_CATEGORY_RULE
    comment_floor: float | None = None

    def __post_init__(self):
        for op, (lo, hi) in self.bounds.items():
            if op not in OPERANDS:
                raise ValueError(f"unknown operand in thresholds: {op}")
            if lo > hi:
                raise ValueError(f"threshold for {op} has min > max")
        limits = [n for _, n in self.category_rule]
        if limits != sorted(limits):
            raise ValueError("category rule limits must be non-decreasing")

    def to_dict(self) -> dict:
        return {
            "bounds": {k: list(v) for k, v in self.bounds.items()},
            "categories": {name: n for name, n in self.category_rule},
            "commentFloor": self.comment_floor,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ThresholdConfig:
        bounds = dict(DEFAULT_BOUNDS)
        for k, v in d.get("bounds", {}).items():
            bounds[k] = (v[0], v[1])
        rule = DEFAULT_CATEGORY_RULE
        if "categories" in d:
            rule = tuple((name, int(n)) for name, n in d["categories"].items())
        return cls(bounds, rule, d.get("commentFloor"))


def load_thresholds(path: str | Path) -> ThresholdConfig:
    return ThresholdConfig.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class Violation:
    operand: str
    value: float
    min: float
    max: float

    def describe(self) -> str:
        bound = self.max if self.value > self.max else self.min
        rel = ">" if self.value > self.max else "<"
        return f"{self.operand} {_num(self.value)} {rel} {_num(bound)}"


def _num(x: float):
    return int(x) if float(x).is_integer() else x


@dataclass(frozen=True)
class QualityCategory:
    category: str
    violations: tuple[Violation, ...] = ()


def violations(v: OperandVector, t: ThresholdConfig) -> list[Violation]:
    out = []
    for op, value in v.as_dict().items():
        if op not in t.bounds:
            continue
        lo, hi = t.bounds[op]
        if value < lo or value > hi:
            out.append(Violation(op, value, lo, hi))
    return out


def category_for(count: int, rule=DEFAULT_CATEGORY_RULE) -> str:
    for name, limit in rule:
        if count <= limit:
            return name
    return "poor"


def classify(v: OperandVector, t: ThresholdConfig | None = None) -> QualityCategory:
    t = t or ThresholdConfig()
    found = violations(v, t)
    return QualityCategory(category_for(len(found), t.category_rule), tuple(found))


# -- operand fixtures ------------------------------------------------------------


@dataclass(frozen=True)
class OperandClass:
    name: str
    package: str
    operands: OperandVector
    printed: dict[str, float] | None = None


@dataclass(frozen=True)
class OperandSet:
    """Per-class operand values given directly instead of derived from code."""

    name: str = ""
    version: str = ""
    classes: tuple[OperandClass, ...] = ()

    def get(self, name: str) -> OperandClass | None:
        return next((c for c in self.classes if c.name == name), None)


def operand_set_from_dict(d: dict) -> OperandSet:
    if d.get("schemaVersion", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ModelError("unsupported schemaVersion", str(d.get("schemaVersion")))
    if d.get("kind") != "operands":
        raise ModelError("document kind is not 'operands'", str(d.get("kind")))
    classes = []
    seen = set()
    for c in d.get("classes", []):
        name = c["name"]
        if name in seen:
            raise ModelError("duplicate class", name)
        seen.add(name)
        # public <= total is not enforced: hand-collected operand tables break it
        vec = OperandVector.from_dict(c.get("operands", {}))
        classes.append(
            OperandClass(
                name=name,
                package=c.get("package", name.rsplit(".", 1)[0] if "." in name else ""),
                operands=vec,
                printed=c.get("printedCriteria"),
            )
        )
    return OperandSet(str(d.get("name", "")), str(d.get("version", "")), tuple(classes))


def operand_set_to_dict(s: OperandSet) -> dict:
    out = {"schemaVersion": SCHEMA_VERSION, "kind": "operands", "name": s.name, "version": s.version}
    rows = []
    for c in s.classes:
        row = {"name": c.name, "package": c.package, "operands": c.operands.as_dict()}
        if c.printed:
            row["printedCriteria"] = dict(c.printed)
        rows.append(row)
    out["classes"] = rows
    return out


def model_operands(model: CodeModel, exclude_constructors: bool = False) -> OperandSet:
    ctx = ModelContext(model)
    return OperandSet(
        model.name,
        model.version,
        tuple(
            OperandClass(c.name, c.package, operand_vector(ctx, c, exclude_constructors))
            for c in model.classes
        ),
    )


# -- SDI --------------------------------------------------------------------------


@dataclass(frozen=True)
class SdiResult:
    renamed: tuple[tuple[str, str], ...]
    added: tuple[str, ...]
    deleted: tuple[str, ...]
    value: float | None


def member_signature(c: ClassInfo) -> Counter:
    sig: Counter = Counter()
    for a in c.attributes:
        sig[("a", a.name, a.type_name)] += 1
    for m in c.methods:
        sig[("m", "<init>" if m.is_constructor else m.name, m.params)] += 1
    return sig


def sdi(old: CodeModel, new: CodeModel) -> SdiResult:
    """Percent of classes renamed, added and deleted between two versions."""
    old_names = {c.name for c in old.classes}
    new_names = {c.name for c in new.classes}
    deleted = sorted(old_names - new_names)
    added = sorted(new_names - old_names)
    renamed = []
    unmatched = list(added)
    for d in deleted:
        sig = member_signature(old.get(d))
        for a in unmatched:
            if member_signature(new.get(a)) == sig:
                renamed.append((d, a))
                unmatched.remove(a)
                break
    gone = {d for d, _ in renamed}
    deleted = [d for d in deleted if d not in gone]
    added = unmatched
    if old.tc == 0:
        value = None
    else:
        value = 100.0 * (len(renamed) + len(deleted)) / old.tc
        if new.tc:
            value += 100.0 * len(added) / new.tc
    return SdiResult(tuple(renamed), tuple(added), tuple(deleted), value)


# -- version comparison ---------------------------------------------------------


@dataclass(frozen=True)
class Delta:
    old: float | None
    new: float | None

    @property
    def delta(self) -> float | None:
        if self.old is None or self.new is None:
            return None
        return self.new - self.old

    @property
    def direction(self) -> str:
        d = self.delta
        if d is None:
            return "undefined"
        return "increased" if d > 0 else "decreased" if d < 0 else "unchanged"

    def as_dict(self) -> dict:
        return {"old": self.old, "new": self.new, "delta": self.delta, "direction": self.direction}


@dataclass
class ClassTrend:
    name: str
    operands: dict[str, Delta]
    criteria: dict[str, Delta]
    tracking: str


@dataclass
class TrendReport:
    old_name: str
    new_name: str
    sdi: SdiResult | None
    classes: list[ClassTrend]
    totals: dict[str, Delta]
    factors: dict[str, Delta]
    discrepancies: list[Discrepancy]

    @property
    def tracking_holds(self) -> bool:
        return all(c.tracking != "violated" for c in self.classes)


def tracking_verdict(old_ops: dict, new_ops: dict, old_crit: dict, new_crit: dict) -> str:
    """Check that criteria follow a uniform change in their operands."""
    diffs = [new_ops[k] - old_ops[k] for k in OPERANDS]
    crit = [new_crit[k] - old_crit[k] for k in CRITERIA_NAMES]
    if all(d <= 0 for d in diffs) and any(d < 0 for d in diffs):
        return "consistent" if all(d <= 0 for d in crit) else "violated"
    if all(d >= 0 for d in diffs) and any(d > 0 for d in diffs):
        return "consistent" if all(d >= 0 for d in crit) else "violated"
    return "not-applicable"


def _scored(subject, exclude_constructors: bool) -> tuple[OperandSet, dict, list[Discrepancy]]:
    ops = subject if isinstance(subject, OperandSet) else model_operands(subject, exclude_constructors)
    scores = {}
    issues: list[Discrepancy] = []
    for c in ops.classes:
        s, found = apply_printed(c.name, criteria_scores(c.operands), c.printed)
        scores[c.name] = s
        issues.extend(found)
    return ops, scores, issues


def compare_versions(
    old: CodeModel | OperandSet,
    new: CodeModel | OperandSet,
    exclude_constructors: bool = False,
) -> TrendReport:
    old_ops, old_scores, old_issues = _scored(old, exclude_constructors)
    new_ops, new_scores, new_issues = _scored(new, exclude_constructors)

    classes = []
    for oc in sorted(old_ops.classes, key=lambda c: c.name):
        nc = new_ops.get(oc.name)
        if nc is None:
            continue
        o, n = oc.operands.as_dict(), nc.operands.as_dict()
        oc_s, nc_s = old_scores[oc.name].as_dict(), new_scores[oc.name].as_dict()
        classes.append(
            ClassTrend(
                name=oc.name,
                operands={k: Delta(o[k], n[k]) for k in OPERANDS},
                criteria={k: Delta(oc_s[k], nc_s[k]) for k in CRITERIA_NAMES},
                tracking=tracking_verdict(o, n, oc_s, nc_s),
            )
        )

    totals = {
        k: Delta(
            sum(s.as_dict()[k] for s in old_scores.values()),
            sum(s.as_dict()[k] for s in new_scores.values()),
        )
        for k in CRITERIA_NAMES
    }

    factors: dict[str, Delta] = {}
    sdi_result = None
    if isinstance(old, CodeModel) and isinstance(new, CodeModel):
        sdi_result = sdi(old, new)
        fo = quality_factors(design_properties(old)).as_dict()
        fn = quality_factors(design_properties(new)).as_dict()
        factors = {k: Delta(fo[k], fn[k]) for k in fo}
    else:
        old_names = {c.name for c in old_ops.classes}
        new_names = {c.name for c in new_ops.classes}
        deleted = tuple(sorted(old_names - new_names))
        added = tuple(sorted(new_names - old_names))
        value = None
        if old_names:
            value = 100.0 * len(deleted) / len(old_names)
            if new_names:
                value += 100.0 * len(added) / len(new_names)
        sdi_result = SdiResult((), added, deleted, value)

    return TrendReport(
        old_name=f"{old_ops.name} {old_ops.version}".strip(),
        new_name=f"{new_ops.name} {new_ops.version}".strip(),
        sdi=sdi_result,
        classes=classes,
        totals=totals,
        factors=factors,
        discrepancies=old_issues + new_issues,
    )

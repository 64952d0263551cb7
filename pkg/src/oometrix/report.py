"""Metric reports, Kiviat data, recommendations and their serializations."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .ck import ca_ce, class_metrics, cof, usecase_cohesion
from .model import SCHEMA_VERSION, CodeModel
from .mood import mood
from .parser import ParseDiagnostic
from .quality import (
    FACTOR_NAMES,
    OPERANDS,
    Discrepancy,
    OperandSet,
    OperandVector,
    ThresholdConfig,
    TrendReport,
    apply_printed,
    classify,
    criteria_scores,
    design_properties,
    model_operands,
    quality_factors,
)
from .relations import ModelContext


@dataclass(frozen=True)
class MetricDef:
    id: str
    scope: str  # system, package or class
    unit: str  # percent, ratio, count or score
    description: str


def _defs(scope: str, unit: str, items: list[tuple[str, str]]) -> list[MetricDef]:
    return [MetricDef(i, scope, unit, d) for i, d in items]


CATALOG: tuple[MetricDef, ...] = tuple(
    _defs("system", "percent", [
        ("mhf", "method hiding factor"),
        ("ahf", "attribute hiding factor"),
        ("mif", "method inheritance factor"),
        ("aif", "attribute inheritance factor"),
        ("cf", "coupling factor"),
        ("pf", "polymorphism factor"),
        ("cof", "coupling factor with inheritance pairs removed from the denominator"),
    ])
    + _defs("system", "ratio", [
        ("cl_ucm", "use-case model cohesion, null without a scenario model"),
        ("fc", "functional coupling, null without a scenario model"),
    ])
    + _defs("system", "score", [
        ("dsc", "design size: number of classes"),
        ("noh", "hierarchies: root classes with at least one descendant"),
        ("ana", "abstraction: mean depth of inheritance"),
        ("dam", "encapsulation: mean share of private and protected attributes"),
        ("dcc", "coupling: mean number of classes each class depends on"),
        ("cam", "cohesion among methods: mean parameter-type overlap"),
        ("moa", "composition: mean number of class-typed attributes"),
        ("mfa", "inheritance: mean share of inherited methods"),
        ("nop", "polymorphism: mean number of abstract methods"),
        ("cis", "messaging: mean number of public methods"),
        ("nom", "complexity: mean number of methods"),
    ])
    + _defs("system", "score", [(f, f"QMOOD {f}, a weighted sum of design properties") for f in FACTOR_NAMES])
    + _defs("system", "score", [("tqi", "total quality index, the sum of the six factors")])
    + _defs("package", "count", [
        ("ca", "classes outside the package that depend on it"),
        ("ce", "classes inside the package that depend on classes outside it"),
    ])
    + _defs("class", "count", [
        ("dit", "depth of inheritance tree"),
        ("noc", "number of children"),
        ("rfc", "response set size with one invocation level"),
        ("rfc_alpha", "response set size with alpha invocation levels"),
        ("wmc", "sum of cyclomatic numbers of concrete methods"),
        ("cbo", "coupled classes, inheritance included"),
        ("cbo_prime", "coupled classes, inheritance excluded"),
        ("mpc", "call sites to methods of other classes"),
        ("dac", "attributes whose type is a model class"),
        ("dac_prime", "distinct model classes used as attribute types"),
        ("icp", "parameter-weighted polymorphic invocations"),
        ("lcom1", "method pairs sharing no attribute"),
        ("lcom2", "non-sharing pairs minus sharing pairs, floored at zero"),
        ("lcom3", "connected components over attribute sharing"),
        ("lcom4", "connected components over attribute sharing and calls"),
    ])
    + _defs("class", "ratio", [
        ("lcom5", "normalized lack of cohesion, range [0,2]"),
        ("tcc", "tight class cohesion"),
        ("lcc", "loose class cohesion"),
    ])
    + _defs("class", "count", [
        ("cl_wmc", "sum of cyclomatic numbers of the class's methods"),
        ("in_bases", "ancestors, direct or not, including external ones"),
        ("cu_cdused", "classes this class depends on directly"),
        ("cl_stat", "executable statements in the class's methods"),
        ("cl_func", "declared methods"),
        ("cl_data", "declared attributes"),
        ("cl_data_publ", "public attributes"),
        ("cu_cdusers", "classes that depend on this class directly"),
        ("in_noc", "direct children"),
        ("cl_func_publ", "public methods"),
    ])
    + _defs("class", "percent", [("cl_comf", "comment lines over total lines")])
    + _defs("class", "score", [
        ("analyzability", "cl_wmc + cl_comf + in_bases + cu_cdused"),
        ("changeability", "cl_stat + cl_func + cl_data"),
        ("stability", "cl_data_publ + cu_cdusers + in_noc + cl_func_publ"),
        ("testability", "cl_wmc + cl_func + cu_cdused"),
        ("maintainability", "sum of the four criteria"),
    ])
)

CATALOG_BY_ID = {m.id: m for m in CATALOG}


def catalog_ids(scope: str) -> list[str]:
    return sorted(m.id for m in CATALOG if m.scope == scope)


CLASS_METRIC_IDS = catalog_ids("class")
SYSTEM_METRIC_IDS = catalog_ids("system")
PACKAGE_METRIC_IDS = catalog_ids("package")


def format_value(metric_id: str, value):
    """Serialized form: percents on a 0-100 scale with 3 decimals, None stays None."""
    if value is None:
        return None
    unit = CATALOG_BY_ID[metric_id].unit
    if unit == "percent":
        # cl_comf is already stored as a percentage
        v = round(value if metric_id == "cl_comf" else 100.0 * value, 3)
    else:
        v = round(float(value), 9)
    return int(v) if float(v).is_integer() else v


# -- report ---------------------------------------------------------------------


@dataclass
class ClassRow:
    name: str
    package: str
    metrics: dict[str, float | None]
    category: str
    violations: list[dict]


@dataclass
class MetricReport:
    model_name: str
    model_version: str
    source: str  # "model" or "operands"
    system: dict[str, float | None]
    classes: list[ClassRow]
    packages: list[dict]
    discrepancies: list[Discrepancy] = field(default_factory=list)
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def any_poor(self) -> bool:
        return any(r.category == "poor" for r in self.classes)

    def row(self, name: str) -> ClassRow | None:
        return next((r for r in self.classes if r.name == name), None)

    def to_dict(self) -> dict:
        return {
            "schemaVersion": SCHEMA_VERSION,
            "kind": "report",
            "modelName": self.model_name,
            "modelVersion": self.model_version,
            "source": self.source,
            "systemMetrics": {k: format_value(k, self.system.get(k)) for k in SYSTEM_METRIC_IDS},
            "classes": [
                {
                    "name": r.name,
                    "package": r.package,
                    "metrics": {k: format_value(k, r.metrics.get(k)) for k in CLASS_METRIC_IDS},
                    "category": r.category,
                    "violations": r.violations,
                }
                for r in self.classes
            ],
            "packages": [
                {"name": p["name"], **{k: format_value(k, p[k]) for k in PACKAGE_METRIC_IDS}}
                for p in self.packages
            ],
            "criteriaDiscrepancies": [
                {
                    "class": d.class_name,
                    "criterion": d.criterion,
                    "computed": d.computed,
                    "printed": d.printed,
                }
                for d in self.discrepancies
            ],
            "diagnostics": [d.as_dict() for d in self.diagnostics],
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        doc = self.to_dict()
        for row in doc["classes"]:
            values = [row["metrics"][k] for k in CLASS_METRIC_IDS]
            w.writerow(
                [row["name"], row["package"]]
                + ["" if v is None else v for v in values]
                + [row["category"], ";".join(v["operand"] for v in row["violations"])]
            )
        return buf.getvalue()


CSV_COLUMNS = ["class", "package", *CLASS_METRIC_IDS, "category", "violations"]


def _violation_dicts(category) -> list[dict]:
    return [
        {"operand": v.operand, "value": v.value, "min": v.min, "max": v.max, "message": v.describe()}
        for v in category.violations
    ]


def build_report(
    subject: CodeModel | OperandSet,
    thresholds: ThresholdConfig | None = None,
    baseline: CodeModel | None = None,
    alpha: int = 2,
    exclude_constructors: bool = False,
    exclude_accessors: bool = False,
    diagnostics: list[ParseDiagnostic] | None = None,
) -> MetricReport:
    thresholds = thresholds or ThresholdConfig()
    config = {
        "alpha": alpha,
        "excludeConstructors": exclude_constructors,
        "excludeAccessors": exclude_accessors,
        "baseline": None if baseline is None else (baseline.name or "baseline"),
        "thresholds": thresholds.to_dict(),
    }
    system: dict[str, float | None] = {}
    rows: list[ClassRow] = []
    packages: list[dict] = []
    issues: list[Discrepancy] = []

    if isinstance(subject, CodeModel):
        ctx = ModelContext(subject)
        system.update(mood(subject).as_dict())
        system["cof"] = cof(ctx)
        props = design_properties(subject, baseline)
        used = props.normalized or props
        system.update(used.values())
        system.update(quality_factors(used).as_dict())
        if subject.scenario_model is not None:
            uc = usecase_cohesion(subject.scenario_model, subject)
            system["cl_ucm"], system["fc"] = uc.cl_ucm, uc.fc
        ops = model_operands(subject, exclude_constructors)
        for p in sorted(subject.packages, key=lambda p: p.name):
            r = ca_ce(ctx, p)
            packages.append({"name": r.name, "ca": r.ca, "ce": r.ce})
        ck_rows = {
            c.name: class_metrics(ctx, c, alpha, exclude_constructors, exclude_accessors)
            for c in subject.classes
        }
        name, version = subject.name, subject.version
    else:
        ops = subject
        ck_rows = {}
        name, version = subject.name, subject.version

    for oc in sorted(ops.classes, key=lambda c: c.name):
        metrics: dict[str, float | None] = dict(oc.operands.as_dict())
        scores, found = apply_printed(oc.name, criteria_scores(oc.operands), oc.printed)
        issues.extend(found)
        metrics.update(scores.as_dict())
        ck_row = ck_rows.get(oc.name)
        if ck_row is not None:
            for k in CLASS_METRIC_IDS:
                if k == "rfc_alpha":
                    metrics[k] = ck_row.rfc_alpha.get(alpha, ck_row.rfc)
                elif hasattr(ck_row, k):
                    metrics[k] = getattr(ck_row, k)
        cat = classify(oc.operands, thresholds)
        rows.append(ClassRow(oc.name, oc.package, metrics, cat.category, _violation_dicts(cat)))

    return MetricReport(
        name, version, "model" if isinstance(subject, CodeModel) else "operands",
        system, rows, packages, issues, list(diagnostics or []), config,
    )


# -- Kiviat data ------------------------------------------------------------------


@dataclass(frozen=True)
class KiviatRecord:
    metric_id: str
    value: float
    min: float
    max: float
    status: int  # 0 in range, -1 out of range


@dataclass(frozen=True)
class KiviatData:
    class_ref: str
    records: tuple[KiviatRecord, ...]

    def to_dict(self) -> dict:
        return {
            "schemaVersion": SCHEMA_VERSION,
            "kind": "kiviat",
            "class": self.class_ref,
            "records": [
                {"metricId": r.metric_id, "value": r.value, "min": r.min, "max": r.max, "status": r.status}
                for r in self.records
            ],
        }


def kiviat(class_ref: str, operands: OperandVector, thresholds: ThresholdConfig | None = None) -> KiviatData:
    thresholds = thresholds or ThresholdConfig()
    records = []
    values = operands.as_dict()
    for op in OPERANDS:
        if op not in thresholds.bounds:
            continue
        lo, hi = thresholds.bounds[op]
        v = values[op]
        records.append(KiviatRecord(op, v, lo, hi, 0 if lo <= v <= hi else -1))
    return KiviatData(class_ref, tuple(records))


# -- recommendations ----------------------------------------------------------------


@dataclass(frozen=True)
class Recommendation:
    class_ref: str
    rule_id: str
    message: str
    operand: str
    value: float
    bound: float

    def to_dict(self) -> dict:
        return {
            "class": self.class_ref,
            "ruleId": self.rule_id,
            "message": self.message,
            "operand": self.operand,
            "value": self.value,
            "bound": self.bound,
        }


RULES: dict[str, tuple[str, str]] = {
    "cu_cdused": ("reduce-used", "decrease the number of classes this class uses directly"),
    "cu_cdusers": ("reduce-users", "decrease the number of classes that use this class directly"),
    "cl_data": ("reduce-attributes", "decrease the number of declared attributes"),
    "cl_func": ("reduce-methods", "decrease the number of declared methods"),
    "cl_data_publ": ("privatize-attributes", "make public attributes private behind accessors"),
    "cl_func_publ": ("reduce-public-methods", "reduce the number of public methods"),
}
SPLIT_RULE = ("split-class", "too many attributes and methods; split the class by responsibility")
COMMENT_RULE = ("add-comments", "comment ratio is below the configured floor; add comments")


def recommend(class_ref: str, operands: OperandVector, thresholds: ThresholdConfig | None = None) -> list[Recommendation]:
    thresholds = thresholds or ThresholdConfig()
    found = {v.operand: v for v in classify(operands, thresholds).violations}
    split = "cl_data" in found and "cl_func" in found
    out: list[Recommendation] = []
    for op in OPERANDS:
        v = found.get(op)
        if v is None or op not in RULES:
            continue
        rule, msg = SPLIT_RULE if split and op in ("cl_data", "cl_func") else RULES[op]
        bound = v.max if v.value > v.max else v.min
        out.append(Recommendation(class_ref, rule, msg, op, v.value, bound))
    floor = thresholds.comment_floor
    if floor is not None and operands.cl_comf < floor:
        out.append(Recommendation(class_ref, *COMMENT_RULE, "cl_comf", operands.cl_comf, floor))
    return out


def recommendations(
    subject: CodeModel | OperandSet,
    thresholds: ThresholdConfig | None = None,
    exclude_constructors: bool = False,
) -> list[Recommendation]:
    ops = subject if isinstance(subject, OperandSet) else model_operands(subject, exclude_constructors)
    out = []
    for oc in sorted(ops.classes, key=lambda c: c.name):
        out.extend(recommend(oc.name, oc.operands, thresholds))
    return out


# -- trend reports --------------------------------------------------------------------


def trend_to_dict(t: TrendReport) -> dict:
    s = t.sdi
    return {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "trend",
        "old": t.old_name,
        "new": t.new_name,
        "sdi": None if s is None else {
            "value": None if s.value is None else round(s.value, 3),
            "renamed": [list(p) for p in s.renamed],
            "added": list(s.added),
            "deleted": list(s.deleted),
        },
        "classes": [
            {
                "name": c.name,
                "operands": {k: d.as_dict() for k, d in c.operands.items()},
                "criteria": {k: d.as_dict() for k, d in c.criteria.items()},
                "tracking": c.tracking,
            }
            for c in t.classes
        ],
        "totals": {k: d.as_dict() for k, d in t.totals.items()},
        "factors": {k: d.as_dict() for k, d in t.factors.items()},
        "trackingHolds": t.tracking_holds,
        "criteriaDiscrepancies": [
            {"class": d.class_name, "criterion": d.criterion, "computed": d.computed, "printed": d.printed}
            for d in t.discrepancies
        ],
    }

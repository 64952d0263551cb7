"""Acceptance criteria, each checked at its stated tolerance and time budget."""

import json
import random
import time
from dataclasses import replace
from pathlib import Path

import jsonschema

import oracles
from randmodels import random_model
from oometrix.cli import main
from oometrix.ck import cbo, cof, lcom_suite, tcc_lcc
from oometrix.model import build_model, dumps_model, model_from_dict
from oometrix.mood import ahf, cf, mhf, mood
from oometrix.parser import parse_sources, read_sources
from oometrix.quality import (
    CRITERIA_NAMES,
    OPERANDS,
    PROPERTY_NAMES,
    DesignProperties,
    apply_printed,
    classify,
    compare_versions,
    criteria_scores,
    model_operands,
    operand_set_from_dict,
    quality_factors,
)
from oometrix.report import CLASS_METRIC_IDS, SYSTEM_METRIC_IDS, build_report

HERE = Path(__file__).parent
FIX = HERE / "fixtures"
CORPUS = FIX / "minioo"
SCHEMA = json.loads((HERE.parent / "docs" / "schemas" / "report.schema.json").read_text())


def ops(name):
    return operand_set_from_dict(json.loads((FIX / name).read_text()))


def test_criterion_1_logiscope_worked_example(criterion):
    t0 = time.perf_counter()
    v1, v2 = ops("ver1_operands.json").classes[0], ops("ver2_operands.json").classes[0]
    lit1, lit2 = criteria_scores(v1.operands), criteria_scores(v2.operands)
    got1, issues1 = apply_printed(v1.name, lit1, v1.printed)
    got2, issues2 = apply_printed(v2.name, lit2, v2.printed)
    report = build_report(ops("ver1_operands.json")).to_dict()
    elapsed = time.perf_counter() - t0

    checks = {
        "analyzability": (got1.analyzability, got2.analyzability) == (106, 80),
        "stability": (got1.stability, got2.stability) == (26, 14),
        "testability": (got1.testability, got2.testability) == (20, 11),
        "maintainability": (got1.maintainability, got2.maintainability) == (173, 123),
        "literal changeability": (lit1.changeability, lit2.changeability) == (32, 18),
        "flagged": [(d.criterion, d.computed, d.printed) for d in issues1] == [("changeability", 32, 21)]
        and issues2 == []
        and len(report["criteriaDiscrepancies"]) == 1,
        "time": elapsed < 1.0,
    }
    bad = [k for k, ok in checks.items() if not ok]
    criterion(1, not bad, f"worked example exact, {elapsed:.3f}s < 1s" + (f"; failed {bad}" if bad else ""))


def test_criterion_2_mood_range(criterion):
    t0 = time.perf_counter()
    out_of_range = complement = 0
    for seed in range(1000):
        m = random_model(seed, max_classes=15)
        for v in mood(m).as_dict().values():
            if v is not None and not 0.0 <= v <= 1.0:
                out_of_range += 1
        for ours, kind in ((mhf(m), "method"), (ahf(m), "attribute")):
            vis = oracles.mean_visibility(m, kind)
            if (ours is None) != (vis is None):
                complement += 1
            elif ours is not None and abs(ours + vis - 1.0) > 1e-12:
                complement += 1
    elapsed = time.perf_counter() - t0
    ok = out_of_range == 0 and complement == 0 and elapsed < 30
    criterion(2, ok, f"1000 models, {out_of_range} out of range, {complement} complement misses, {elapsed:.1f}s < 30s")


def test_criterion_3_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    mismatches = []
    for seed in range(200):
        m = random_model(seed, max_classes=12, max_members=10)
        if cf(m) != oracles.cf(m):
            mismatches.append((seed, "cf"))
        if cof(m) != oracles.cof(m):
            mismatches.append((seed, "cof"))
        for c in m.classes:
            if cbo(m, c) != oracles.cbo(m, c.name):
                mismatches.append((seed, "cbo", c.name))
            if tuple(lcom_suite(c)[:2]) != oracles.lcom12(c):
                mismatches.append((seed, "lcom12", c.name))
            if tcc_lcc(c)[0] != oracles.tcc(c):
                mismatches.append((seed, "tcc", c.name))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 60
    criterion(3, ok, f"200 models, {len(mismatches)} mismatches {mismatches[:3]}, {elapsed:.1f}s < 60s")


def test_criterion_4_qmood_linear_forms(criterion):
    ones = quality_factors(DesignProperties(**{k: 1.0 for k in PROPERTY_NAMES})).as_dict()
    want = {
        "reusability": 1.0, "flexibility": 1.0, "understandability": -0.99,
        "functionality": 1.0, "extendibility": 1.0, "effectiveness": 1.0, "tqi": 4.01,
    }
    ones_ok = all(abs(ones[k] - v) <= 1e-9 for k, v in want.items())

    rng = random.Random(2024)
    linear_fail = 0
    for _ in range(100):
        p = DesignProperties(**{k: rng.uniform(-50, 50) for k in PROPERTY_NAMES})
        a = rng.uniform(-10, 10)
        f, fa = quality_factors(p).as_dict(), quality_factors(p.scaled(a)).as_dict()
        if any(abs(fa[k] - a * f[k]) > 1e-9 for k in f):
            linear_fail += 1
        if abs(f["tqi"] - sum(v for k, v in f.items() if k != "tqi")) > 1e-9:
            linear_fail += 1
    criterion(4, ones_ok and linear_fail == 0,
              f"all-ones tqi {ones['tqi']:.12g}, {linear_fail} linearity failures in 100 cases")


def test_criterion_5_threshold_classification(criterion):
    marf = classify(ops("marf_operands.json").get("Marf.MARF").operands)
    gipc = classify(ops("gipsy_operands.json").get("gipsy.GIPC.GIPC").operands)
    marf_named = sorted(v.operand for v in marf.violations)
    expected = sorted(["cl_data", "cl_data_publ", "cl_func", "cl_func_publ", "cl_wmc", "cu_cdused", "cu_cdusers"])
    gipc_msgs = [v.describe() for v in gipc.violations]
    ok = (
        marf.category == "poor"
        and marf_named == expected
        and len(gipc.violations) == 7
        and "in_bases 5 > 3" in gipc_msgs
    )
    criterion(5, ok, f"Marf.MARF {marf.category} with {len(marf.violations)} violations; "
                     f"gipsy.GIPC {len(gipc.violations)} violations incl. in_bases 5 > 3")


def _shrink(model, rng):
    """A perturbed copy of ``model`` that only removes or lowers things."""
    classes = []
    for c in model.classes:
        methods = []
        for m in c.methods:
            if m.is_abstract:
                methods.append(m)
                continue
            invs = tuple(
                replace(i, sites=rng.randint(1, i.sites)) for i in m.invocations if rng.random() < 0.7
            )
            refs = tuple(r for r in m.attribute_refs if rng.random() < 0.7)
            methods.append(replace(
                m, invocations=invs, attribute_refs=refs,
                statements=rng.randint(0, m.statements), cyclomatic=rng.randint(1, m.cyclomatic),
            ))
        classes.append(replace(c, methods=tuple(methods), comment_lines=rng.randint(0, c.comment_lines)))

    invoked = {(i.target_class, i.method, i.params) for c in classes for m in c.methods for i in m.invocations}
    referenced = {(r.owner, r.attribute) for c in classes for m in c.methods for r in m.attribute_refs}
    out = []
    for c in classes:
        methods = tuple(
            m for m in c.methods if (c.name, m.name, m.params) in invoked or rng.random() < 0.8
        )
        attrs = tuple(a for a in c.attributes if (c.name, a.name) in referenced or rng.random() < 0.8)
        out.append(replace(c, methods=methods, attributes=attrs,
                           is_abstract=any(m.is_abstract for m in methods)))
    return build_model(out, name=model.name, version="shrunk")


def test_criterion_6_tracking(criterion):
    t0 = time.perf_counter()
    pairs = counterexamples = seed = 0
    while pairs < 500:
        rng = random.Random(seed)
        old = random_model(seed)
        seed += 1
        new = _shrink(old, rng)
        o_ops = {c.name: c.operands.as_dict() for c in model_operands(old).classes}
        n_ops = {c.name: c.operands.as_dict() for c in model_operands(new).classes}
        qualifying = [
            n for n in o_ops
            if all(n_ops[n][k] <= o_ops[n][k] for k in OPERANDS)
            and any(n_ops[n][k] < o_ops[n][k] for k in OPERANDS)
        ]
        if not qualifying:
            continue
        pairs += 1
        trend = {c.name: c for c in compare_versions(old, new).classes}
        for n in qualifying:
            crit = trend[n].criteria
            if any(crit[k].delta > 0 for k in CRITERIA_NAMES) or trend[n].tracking != "consistent":
                counterexamples += 1
    elapsed = time.perf_counter() - t0
    criterion(6, counterexamples == 0,
              f"{pairs} perturbation pairs, {counterexamples} counterexamples, {elapsed:.1f}s")


def test_criterion_7_parser(criterion):
    units = read_sources([CORPUS])
    m1, d1 = parse_sources(units)
    m2, _ = parse_sources(list(reversed(units)), jobs=4)
    deterministic = dumps_model(m1) == dumps_model(m2)
    clean = not [d for d in d1 if d.severity == "error"]

    cyclo_miss = []
    methods = 0
    for unit in units:
        m, _ = parse_sources([unit])
        expected = oracles.method_decisions(unit.text)
        got = {(x.name, x.arity): x.cyclomatic for c in m.classes for x in c.methods if not x.is_abstract}
        methods += len(got)
        if got != expected:
            cyclo_miss.append(unit.path)

    text = dumps_model(m1)
    stable = dumps_model(model_from_dict(json.loads(text))) == text
    ok = len(units) >= 15 and clean and deterministic and not cyclo_miss and stable
    criterion(7, ok, f"{len(units)} files, deterministic={deterministic}, {methods} methods with "
                     f"{len(cyclo_miss)} cyclomatic misses, round-trip stable={stable}")


def test_criterion_8_dogfood(criterion, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["analyze", str(CORPUS), "-o", str(out)])
    capsys.readouterr()
    doc = json.loads(out.read_text())
    problems = []
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as e:
        problems.append(e.message)
    model, _ = parse_sources(read_sources([CORPUS]))
    if [c["name"] for c in doc["classes"]] != sorted(model.class_names()):
        problems.append("class rows differ from model")
    if set(doc["systemMetrics"]) != set(SYSTEM_METRIC_IDS):
        problems.append("system metric ids differ from catalog")
    if any(set(c["metrics"]) != set(CLASS_METRIC_IDS) for c in doc["classes"]):
        problems.append("class metric ids differ from catalog")
    if doc["systemMetrics"]["tqi"] is None:
        problems.append("tqi undefined on corpus")
    ok = code == 0 and not problems
    criterion(8, ok, f"corpus report with {len(doc['classes'])} classes, schema-valid={not problems}"
                     + (f"; {problems}" if problems else ""))

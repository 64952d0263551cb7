from pathlib import Path

import pytest

import oracles
from oometrix.model import ClassInfo, dumps_model
from oometrix.parser import (
    SourceUnit,
    count_comment_ratio,
    parse_paths,
    parse_sources,
    parse_unit,
    read_sources,
)
from oometrix.quality import operand_vector
from oometrix.model import build_model

CORPUS = Path(__file__).parent / "fixtures" / "minioo"


def parse(text, path="t.java"):
    return parse_sources([SourceUnit(path, text)])


def method(model, cls, name):
    return next(m for m in model.get(cls).methods if m.name == name)


def errors(diags):
    return [d for d in diags if d.severity == "error"]


def test_empty_method_is_straight_line():
    m, d = parse("class A { void f() { } }")
    f = method(m, "A", "f")
    assert (f.cyclomatic, f.statements) == (1, 0)
    assert d == []


def test_if_with_and_counts_two_decisions():
    m, _ = parse("class A { int x; void f(int y) { if (x > 0 && y > 0) { x = y; } } }")
    assert method(m, "A", "f").cyclomatic == 3


def test_comment_only_file():
    p = parse_unit(SourceUnit("c.java", "/* c */"))
    assert len(p.unit.comment_lines) == 1
    assert p.unit.classes == []
    assert p.diagnostics == []


@pytest.mark.parametrize("comments, total, expected", [(0, 10, 0.0), (5, 20, 0.25), (0, 0, 0.0)])
def test_comment_ratio(comments, total, expected):
    assert count_comment_ratio(ClassInfo("a.A", "a", comment_lines=comments, total_lines=total)) == expected


def test_comment_operand_is_percent():
    m = build_model([ClassInfo("a.A", "a", comment_lines=89, total_lines=100)])
    assert operand_vector(m, "a.A").cl_comf == pytest.approx(89)


def test_all_decision_kinds():
    src = """
    class A {
        int f(int x, boolean b) {
            int s = 0;
            for (int i = 0; i < x; i++) { s += i; }
            for (int v : new int[] {1, 2}) { s += v; }
            while (s > 100 || b) { s--; }
            do { s++; } while (s < 3);
            switch (x) { case 1: case 2: s = 1; break; default: s = 2; }
            try { s = s / x; } catch (ArithmeticException e) { s = 0; } catch (RuntimeException e) { s = 1; }
            return b ? s : -s;
        }
    }
    """
    m, d = parse(src)
    # for, for-each, while, ||, do-while, 2 cases, 2 catches, ternary
    assert method(m, "A", "f").cyclomatic == 11
    assert errors(d) == []


def test_statement_counting():
    src = """
    class A {
        int x;
        void f() {
            int a;
            int b = 1;
            x = b;
            if (b > 0) { x++; } else { x--; }
            ;
            {}
            return;
        }
    }
    """
    m, _ = parse(src)
    # b = 1, x = b, if, x++, x--, return
    assert method(m, "A", "f").statements == 6


def test_calls_and_fields_resolved_across_packages():
    a = "package p; public class A { public int v; public int get() { return v; } }"
    b = """package q;
    import p.A;
    public class B {
        private A a;
        int read() { return a.get() + a.get() + a.v; }
    }"""
    m, d = parse_sources([SourceUnit("a.java", a), SourceUnit("b.java", b)])
    read = method(m, "q.B", "read")
    assert [(i.target_class, i.method, i.sites) for i in read.invocations] == [("p.A", "get", 2)]
    refs = {(r.owner, r.attribute) for r in read.attribute_refs}
    assert refs == {("q.B", "a"), ("p.A", "v")}
    assert m.get("q.B").attributes[0].type_name == "p.A"
    assert d == []


def test_wildcard_import_and_static_call():
    a = "package u; public class M { public static int one() { return 1; } }"
    b = "package v; import u.*; class N { int f() { return M.one(); } }"
    m, _ = parse_sources([SourceUnit("a.java", a), SourceUnit("b.java", b)])
    assert method(m, "v.N", "f").invocations[0].target_class == "u.M"


def test_unresolved_member_of_model_class_is_dropped_with_warning():
    src = "class A { void f() { } } class B { A a; void g() { a.missing(); a.f(); } }"
    m, d = parse(src)
    g = method(m, "B", "g")
    assert [i.method for i in g.invocations] == ["f"]
    warnings = [x for x in d if x.severity == "warning"]
    assert len(warnings) == 1 and "missing" in warnings[0].message


def test_external_receivers_are_silent():
    m, d = parse('class A { void f(String s) { System.out.println(s.trim()); Math.abs(1); } }')
    assert method(m, "A", "f").invocations == ()
    assert d == []


def test_unknown_lowercase_identifier_warns():
    _, d = parse("class A { void f() { zork = 1; } }")
    assert any("zork" in x.message and x.severity == "warning" for x in d)


def test_inheritance_interfaces_and_overrides():
    src = """
    package s;
    interface Shape { double area(); }
    abstract class Base implements Shape { protected int k; }
    class Sq extends Base { public double area() { return k * k; } }
    """
    m, d = parse(src)
    shape = m.get("s.Shape")
    assert shape.is_abstract and shape.methods[0].is_abstract
    assert shape.methods[0].visibility == "public"
    assert [p.name for p in m.get("s.Sq").parents] == ["s.Base"]
    assert [p.name for p in m.get("s.Base").parents] == ["s.Shape"]
    assert method(m, "s.Sq", "area").attribute_refs[0].owner == "s.Base"
    assert errors(d) == []


def test_external_parent_flagged():
    m, _ = parse("class A extends java.util.ArrayList { }")
    p = m.get("A").parents[0]
    assert p.external and p.name == "java.util.ArrayList"


def test_nested_classes_are_separate():
    src = "package n; class Outer { int a; static class Inner { int b; int f() { return b; } } }"
    m, _ = parse(src)
    assert set(m.class_names()) == {"n.Outer", "n.Outer.Inner"}
    assert m.get("n.Outer.Inner").package == "n"


def test_constructor_chaining():
    src = """
    class P { P(int x) { } }
    class C extends P { C() { this(1); } C(int y) { super(y); } }
    """
    m, _ = parse(src)
    c = m.get("C")
    calls = {(i.target_class, i.params) for mm in c.methods for i in mm.invocations}
    assert calls == {("C", ("int",)), ("P", ("int",))}
    assert all(mm.is_constructor for mm in c.methods)


def test_generics_and_annotations_skipped():
    src = """
    import java.util.List;
    @Deprecated
    class A {
        private List<String> names;
        @Override
        public String toString() { return names.toString(); }
        java.util.Map<String, List<Integer>> index;
    }
    """
    m, d = parse(src)
    a = m.get("A")
    assert [x.type_name for x in a.attributes] == ["List", "java.util.Map"]
    assert errors(d) == []


def test_syntax_error_keeps_completed_classes():
    src = "class Good { void f() { } }\nclass Bad {\n  void g() { int x = ; }\n}\n"
    m, d = parse(src)
    assert m.class_names() == ["Good"]
    e = errors(d)
    assert len(e) == 1 and e[0].line == 3 and e[0].column >= 1


def test_lex_error_reported():
    m, d = parse('class A { String s = "open; }')
    assert m.tc == 0 and errors(d)[0].line == 1


def test_inheritance_cycle_broken_with_error():
    m, d = parse("class A extends B { } class B extends A { }")
    assert any("cycle" in x.message for x in errors(d))
    assert sum(len(c.parents) for c in m.classes) == 1


def test_duplicate_method_signature_reported():
    m, d = parse("class A { void f(int a) { } void f(int b) { } }")
    assert len(m.get("A").methods) == 1
    assert "duplicate method" in errors(d)[0].message


def test_class_line_spans():
    src = "// header\npackage x;\n\nclass A {\n}\n\nclass B {\n  // note\n}\n"
    m, _ = parse(src)
    a, b = m.get("x.A"), m.get("x.B")
    assert a.total_lines + b.total_lines == len(src.splitlines())
    assert (a.comment_lines, b.comment_lines) == (1, 1)


def test_single_class_files_line_totals():
    for unit in read_sources([CORPUS]):
        parsed = parse_unit(unit)
        if len(parsed.unit.classes) != 1:
            continue
        m, _ = parse_sources([unit])
        assert m.classes[0].total_lines == len(unit.text.splitlines())


def test_corpus_parses_cleanly_and_deterministically():
    units = read_sources([CORPUS])
    assert len(units) >= 15
    m1, d1 = parse_sources(units)
    m2, d2 = parse_sources(list(reversed(units)), jobs=4)
    assert dumps_model(m1) == dumps_model(m2)
    assert errors(d1) == []
    assert m1.tc >= 15


def test_corpus_cyclomatic_matches_token_oracle():
    for unit in read_sources([CORPUS]):
        m, _ = parse_sources([unit])
        expected = oracles.method_decisions(unit.text)
        got = {(mm.name, mm.arity): mm.cyclomatic for c in m.classes for mm in c.methods if not mm.is_abstract}
        assert got == expected, unit.path


def test_parse_paths_accepts_directory():
    m, _ = parse_paths([CORPUS])
    assert "bank.Savings" in m

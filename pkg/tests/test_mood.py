import pytest
from hypothesis import given, settings, strategies as st

import oracles
from randmodels import random_model
from oometrix.model import (
    AttributeInfo,
    AttributeRef,
    ClassInfo,
    CodeModel,
    Invocation,
    MethodInfo,
    ParentRef,
    build_model,
)
from oometrix.mood import ahf, aif, cf, mhf, mif, mood, pf, visibility_fraction
from oometrix.relations import ModelContext


def C(name, parents=(), attrs=(), methods=(), pkg="p"):
    return ClassInfo(f"{pkg}.{name}", pkg, tuple(ParentRef(f"{pkg}.{p}") for p in parents),
                     attributes=tuple(attrs), methods=tuple(methods))


def M(name, vis="public", **kw):
    return MethodInfo(name, visibility=vis, **kw)


# -- hiding factors --

def test_mhf_all_private_and_all_public():
    priv = build_model([C("A", methods=[M("f", "private")]), C("B", methods=[M("g", "private")])])
    pub = build_model([C("A", methods=[M("f")]), C("B", methods=[M("g")])])
    assert mhf(priv) == 1.0
    assert mhf(pub) == 0.0


def test_mhf_three_classes():
    m = build_model([C("A", methods=[M("f")]), C("B", methods=[M("g", "private")]), C("C")])
    assert mhf(m) == pytest.approx(0.5)


def test_mhf_undefined_cases():
    assert mhf(build_model([C("A", methods=[M("f")])])) is None
    assert mhf(build_model([C("A"), C("B")])) is None


def test_ahf_examples():
    priv = build_model([C("A", attrs=[AttributeInfo("x")]), C("B")])
    pub = build_model([C("A", attrs=[AttributeInfo("x", visibility="public")]), C("B")])
    mixed = build_model([
        C("A", attrs=[AttributeInfo("x"), AttributeInfo("y"), AttributeInfo("z", visibility="public")]),
        C("B"),
    ])
    assert ahf(priv) == 1.0
    assert ahf(pub) == 0.0
    assert ahf(mixed) == pytest.approx(2 / 3)


def test_protected_and_package_visibility():
    m = build_model([
        C("A", methods=[M("f", "protected")]),
        C("B", parents=["A"]),
        C("D"),
        C("E", pkg="q"),
    ])
    ctx = ModelContext(m)
    a = m.get("p.A")
    # protected: visible to the one descendant among three other classes
    assert visibility_fraction(ctx, a, "protected") == pytest.approx(1 / 3)
    # package: visible to the two same-package peers
    assert visibility_fraction(ctx, a, "package") == pytest.approx(2 / 3)


# -- inheritance factors --

def test_mif_examples():
    flat = build_model([C("A", methods=[M("f")]), C("B", methods=[M("g")])])
    assert mif(flat) == 0.0
    inherit = build_model([C("B", methods=[M("m")]), C("C", parents=["B"])])
    assert mif(inherit) == pytest.approx(0.5)
    override = build_model([C("B", methods=[M("m")]), C("C", parents=["B"], methods=[M("m")])])
    assert mif(override) == 0.0


def test_mif_undefined_without_methods():
    assert mif(build_model([C("A")])) is None


def test_aif_examples():
    flat = build_model([C("A", attrs=[AttributeInfo("x")])])
    assert aif(flat) == 0.0
    inherit = build_model([C("B", attrs=[AttributeInfo("x", visibility="protected")]), C("C", parents=["B"])])
    assert aif(inherit) == pytest.approx(0.5)
    private = build_model([C("B", attrs=[AttributeInfo("x")]), C("C", parents=["B"])])
    assert aif(private) == 0.0


def test_constructors_left_out_by_default():
    m = build_model([C("B", methods=[M("B", is_constructor=True), M("m")]), C("C", parents=["B"])])
    assert mif(m) == pytest.approx(0.5)
    assert mif(m, mood_constructors=True) == pytest.approx(1 / 3)


# -- coupling and polymorphism --

def test_cf_examples():
    assert cf(build_model([C("A"), C("B"), C("C")])) == 0.0
    call = M("f", invocations=(Invocation("p.B", "g"),))
    one = build_model([C("A", methods=[call]), C("B", methods=[M("g")]), C("C")])
    assert cf(one) == pytest.approx(1 / 6)
    inherited = build_model([C("B", methods=[M("g")]), C("A", parents=["B"], methods=[call])])
    assert cf(inherited) == 0.0


def test_cf_counts_typed_attributes_and_parameters():
    m = build_model([
        C("A", attrs=[AttributeInfo("b", "p.B")]),
        C("B", methods=[MethodInfo("take", ("p.A",))]),
    ])
    assert cf(m) == 1.0


def test_cf_undefined_below_two_classes():
    assert cf(build_model([C("A")])) is None


def test_pf_examples():
    m = build_model([C("B", methods=[M("m")]), C("C", parents=["B"], methods=[M("m")])])
    assert pf(m) == 1.0
    no_override = build_model([C("B", methods=[M("m")]), C("C", parents=["B"], methods=[M("n")])])
    assert pf(no_override) == 0.0
    flat = build_model([C("A", methods=[M("m")]), C("B", methods=[M("m")])])
    assert pf(flat) is None


def test_override_by_name_and_arity():
    m = build_model([
        C("B", methods=[MethodInfo("m", ("int",))]),
        C("C", parents=["B"], methods=[MethodInfo("m", ("double",))]),
    ])
    assert pf(m) == 1.0


def test_same_arity_overloads_override_once():
    m = build_model([
        C("B", methods=[MethodInfo("m", ("int",))]),
        C("C", parents=["B"], methods=[MethodInfo("m", ("double",)), MethodInfo("m", ("String",))]),
    ])
    assert pf(m) == 1.0
    assert mif(m) == 0.0


# -- properties --

@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_defined_values_in_unit_interval(seed):
    for v in mood(random_model(seed)).as_dict().values():
        assert v is None or 0.0 <= v <= 1.0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_hiding_matches_enumeration(seed):
    m = random_model(seed)
    for ours, theirs in ((mhf(m), oracles.mhf(m)), (ahf(m), oracles.ahf(m))):
        assert (ours is None) == (theirs is None)
        if ours is not None:
            assert ours == pytest.approx(theirs, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_cf_matches_pair_enumeration(seed):
    m = random_model(seed, max_classes=12)
    assert cf(m) == oracles.cf(m)


def _rename(model: CodeModel) -> CodeModel:
    def r(name: str) -> str:
        return "z." + name.replace(".", "_") + "_r" if name in model else name

    classes = []
    for c in model.classes:
        classes.append(ClassInfo(
            r(c.name), "z" + c.package,
            tuple(ParentRef(r(p.name), p.external) for p in c.parents),
            c.is_abstract,
            tuple(AttributeInfo(a.name + "_r", r(a.type_name.replace("[]", "")) + "[]" * a.type_name.count("[]"),
                                a.visibility, a.is_static) for a in c.attributes),
            tuple(MethodInfo(
                m.name + "_r",
                tuple(r(t.replace("[]", "")) + "[]" * t.count("[]") for t in m.params),
                m.visibility, m.is_abstract, m.is_constructor, m.cyclomatic, m.statements,
                tuple(Invocation(r(i.target_class), i.method + "_r",
                                 tuple(r(t.replace("[]", "")) + "[]" * t.count("[]") for t in i.params), i.sites)
                      for i in m.invocations),
                tuple(AttributeRef(r(x.owner), x.attribute + "_r") for x in m.attribute_refs),
            ) for m in c.methods),
            c.comment_lines, c.total_lines,
        ))
    return build_model(classes)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_renaming_leaves_values_unchanged(seed):
    m = random_model(seed)
    assert mood(_rename(m)) == mood(m)

"""Specifications, the companion construction, table passage, spec morphisms."""

import random

import pytest

from fole import (
    AbstractSpec,
    Atom,
    CompositeDeclaration,
    GeneratingConstraint,
    LaxStructure,
    Schema,
    Signature,
    SignatureMorphism,
    SpecMorphism,
    Table,
    TypeDomain,
    abstract_table_passage,
    check_table_morphism,
    companion_formal,
    interpret_relation,
    relation_include,
    satisfies_constraint,
    satisfies_spec,
    validate_spec_morphism,
)
from fole.errors import NaturalityViolation, SignatureMismatch, Unsatisfied
from generators import (
    rand_lax_structure,
    rand_satisfied_pair,
    rand_spec,
    rand_type_domain,
)

SIG1 = Signature.of([("dept", "D")])
SIG2 = Signature.of([("name", "S"), ("dept", "D")])
SCHEMA = Schema(sorts=("S", "D"), predicates={"Emp": SIG2, "Dept": SIG1})
TD = TypeDomain(("S", "D"), {"S": ("ann", "bob"), "D": ("hr", "it")})
H = SignatureMorphism.of(SIG1, SIG2, {"dept": "dept"})
FK = AbstractSpec(SCHEMA, {
    "empDept": GeneratingConstraint("empDept", "Dept", "Emp", H),
})


def consistent_structure() -> LaxStructure:
    return LaxStructure(SCHEMA, TD, {
        "Emp": Table(SIG2, {"k1": ("ann", "hr"), "k2": ("bob", "hr")}),
        "Dept": Table(SIG1, {"d1": ("hr",), "d2": ("it",)}),
    })


def dangling_structure() -> LaxStructure:
    return LaxStructure(SCHEMA, TD, {
        "Emp": Table(SIG2, {"k1": ("ann", "hr")}),
        "Dept": Table(SIG1, {"d2": ("it",)}),
    })


class TestCompanion:
    def test_companion_mirrors_generators(self):
        formal = companion_formal(FK)
        assert set(formal.constraints) == {"empDept"}
        c = formal.constraints["empDept"]
        assert c.source == Atom("Dept") and c.target == Atom("Emp")
        assert c.morphism == H

    def test_abstract_satisfaction_delegates(self):
        m = consistent_structure()
        assert satisfies_spec(m, FK).satisfied == \
            satisfies_spec(m, companion_formal(FK)).satisfied


class TestSatisfiesSpec:
    def test_empty_spec_satisfied(self):
        spec = AbstractSpec(SCHEMA, {})
        assert satisfies_spec(consistent_structure(), spec).satisfied

    def test_foreign_key_satisfied(self):
        report = satisfies_spec(consistent_structure(), FK)
        assert report.satisfied and report.first_failure() is None

    def test_dangling_dept_refuted(self):
        report = satisfies_spec(dangling_structure(), FK)
        assert not report.satisfied
        failure = report.first_failure()
        assert failure.constraint == "empDept"
        assert failure.violating_tuple == ("ann", "hr")

    def test_random_repaired_pairs_satisfied(self):
        rng = random.Random(79)
        for _ in range(60):
            td = rand_type_domain(rng)
            m, spec = rand_satisfied_pair(rng, td)
            assert satisfies_spec(m, spec).satisfied


class TestTablePassage:
    def test_objects_and_arrows(self):
        m = consistent_structure()
        passage = abstract_table_passage(m, FK)
        assert passage.objects["Emp"] == interpret_relation(m, Atom("Emp"))
        arrow = passage.arrows["empDept"]
        check_table_morphism(
            arrow,
            relation_include(passage.objects["Dept"]),
            relation_include(passage.objects["Emp"]),
        )

    def test_unsatisfied_raises_with_tuple(self):
        with pytest.raises(Unsatisfied):
            abstract_table_passage(dangling_structure(), FK)

    def test_succeeds_iff_satisfied_random(self):
        rng = random.Random(83)
        for _ in range(80):
            td = rand_type_domain(rng)
            spec = rand_spec(rng, td)
            m = rand_lax_structure(rng, spec.schema, td)
            sat = satisfies_spec(m, spec).satisfied
            try:
                passage = abstract_table_passage(m, spec)
                assert sat
                for name, c in spec.constraints.items():
                    check_table_morphism(
                        passage.arrows[name],
                        relation_include(passage.objects[c.source_predicate]),
                        relation_include(passage.objects[c.target_predicate]),
                    )
            except Unsatisfied:
                assert not sat

    def test_declared_composite_respected(self):
        # chain Dept <- Emp plus an identity-extended arrow, composed exactly
        sig0 = Signature((), ())
        schema = Schema(sorts=("S", "D"), predicates={
            "Emp": SIG2, "Dept": SIG1, "Unit": sig0})
        h2 = SignatureMorphism.of(sig0, SIG1, {})
        h_comp = H  # Dept <- Emp
        comp = SignatureMorphism.of(sig0, SIG2, {})
        spec = AbstractSpec(schema, {
            "p": GeneratingConstraint("p", "Dept", "Emp", h_comp),
            "q": GeneratingConstraint("q", "Unit", "Dept", h2),
            "pq": GeneratingConstraint("pq", "Unit", "Emp", comp),
        }, composites=(CompositeDeclaration(("q", "p"), "pq"),))
        spec.validate()
        m = LaxStructure(schema, TD, {
            "Emp": Table(SIG2, {"k1": ("ann", "hr")}),
            "Dept": Table(SIG1, {"d1": ("hr",)}),
            "Unit": Table(sig0, {"u": ()}),
        })
        passage = abstract_table_passage(m, spec)
        assert passage.arrows["pq"].key_map == {("ann", "hr"): ()}

    def test_bad_composite_declaration_rejected(self):
        sig0 = Signature((), ())
        schema = Schema(sorts=("S", "D"), predicates={
            "Emp": SIG2, "Dept": SIG1, "Unit": sig0})
        h2 = SignatureMorphism.of(sig0, SIG1, {})
        wrong = SignatureMorphism.of(sig0, SIG1, {})  # wrong endpoints
        spec = AbstractSpec(schema, {
            "p": GeneratingConstraint("p", "Dept", "Emp", H),
            "q": GeneratingConstraint("q", "Unit", "Dept", h2),
            "pq": GeneratingConstraint("pq", "Unit", "Dept", wrong),
        }, composites=(CompositeDeclaration(("q", "p"), "pq"),))
        with pytest.raises(SignatureMismatch):
            spec.validate()


class TestSpecMorphism:
    def test_identity_accepts(self):
        sm = SpecMorphism.identity(FK, ("S", "D"))
        validate_spec_morphism(sm, FK, FK)

    def test_mismatched_bridge_rejected(self):
        sm = SpecMorphism.identity(FK, ("S", "D"))
        # break the Dept bridge: map dept to name (wrong sort) is rejected by
        # typing; break naturality instead via the constraint map on a second
        # morphism with swapped endpoints
        sm.bridge["Dept"] = SignatureMorphism(
            SIG1, SIG1, (("dept", "dept"),))
        validate_spec_morphism(sm, FK, FK)  # still identity-shaped
        # now a genuinely broken square: Emp bridge permutes nothing but the
        # constraint arrow is redirected through a different attribute
        schema = Schema(sorts=("D",), predicates={
            "P": Signature.of([("x", "D"), ("y", "D")]),
            "Q": Signature.of([("z", "D")]),
        })
        h_a = SignatureMorphism.of(schema.predicates["Q"],
                                   schema.predicates["P"], {"z": "x"})
        h_b = SignatureMorphism.of(schema.predicates["Q"],
                                   schema.predicates["P"], {"z": "y"})
        t_a = AbstractSpec(schema, {
            "c": GeneratingConstraint("c", "Q", "P", h_a)})
        t_b = AbstractSpec(schema, {
            "c": GeneratingConstraint("c", "Q", "P", h_b)})
        sm2 = SpecMorphism.identity(t_a, ("D",))
        with pytest.raises(NaturalityViolation):
            validate_spec_morphism(sm2, t_a, t_b)

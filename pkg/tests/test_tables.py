"""Tables, relations, fiber operations, quantifier flow, type-domain flow."""

import random

import pytest

from fole import (
    Relation,
    Signature,
    SignatureMorphism,
    Table,
    TableMorphism,
    TypeDomain,
    TypeDomainMorphism,
    check_table_morphism,
    enumerate_tuples,
    fiber_boolean,
    fiber_flow,
    key_equivalent,
    relation_include,
    table_flow_type_domain,
    table_image,
    table_sigma,
    table_substitution,
)
from fole.errors import NaturalityViolation, SignatureMismatch

from generators import (
    rand_infomorphism,
    rand_relation,
    rand_sig_morphism,
    rand_signature,
    rand_table,
    rand_type_domain,
)

S2 = Signature.of([("0", "S"), ("1", "S")])
S1 = Signature.of([("0", "S")])
AB = TypeDomain(("S",), {"S": ("a", "b")})
H = SignatureMorphism.of(S1, S2, {"0": "0"})  # project first column


class TestReflection:
    def test_image_collapses_duplicates(self):
        t = Table(S2, {"k1": ("a", "b"), "k2": ("a", "b")})
        assert table_image(t) == Relation.of(S2, [("a", "b")])

    def test_include_keys_by_tuples(self):
        r = Relation.of(S2, [("a", "b")])
        t = relation_include(r)
        assert t.rows == {("a", "b"): ("a", "b")}

    def test_image_include_identity(self):
        rng = random.Random(3)
        for _ in range(100):
            td = rand_type_domain(rng)
            r = rand_relation(rng, rand_signature(rng, td), td)
            assert table_image(relation_include(r)) == r

    def test_include_image_key_equivalent_iff_injective(self):
        rng = random.Random(5)
        for _ in range(100):
            td = rand_type_domain(rng)
            t = rand_table(rng, rand_signature(rng, td), td)
            injective = len(set(t.rows.values())) == len(t.rows)
            assert key_equivalent(relation_include(table_image(t)), t) \
                == injective


class TestFiberBoolean:
    def test_meet(self):
        lhs = Relation.of(S2, [("a", "a"), ("a", "b")])
        rhs = Relation.of(S2, [("a", "b"), ("b", "b")])
        assert fiber_boolean("meet", S2, AB, lhs, rhs) == \
            Relation.of(S2, [("a", "b")])

    def test_top_enumerates_fiber(self):
        top = fiber_boolean("top", S2, AB)
        assert top.tuples == frozenset(enumerate_tuples(S2, AB))
        assert len(top) == 4

    def test_negation_of_extremes(self):
        bot = fiber_boolean("bottom", S2, AB)
        top = fiber_boolean("top", S2, AB)
        assert fiber_boolean("negation", S2, AB, bot) == top
        assert fiber_boolean("negation", S2, AB, top) == bot

    def test_signature_mismatch(self):
        with pytest.raises(SignatureMismatch):
            fiber_boolean("meet", S2, AB, Relation.of(S1, []),
                          Relation.of(S2, []))

    def test_boolean_algebra_laws(self):
        rng = random.Random(7)
        for _ in range(60):
            td = rand_type_domain(rng)
            sig = rand_signature(rng, td, max_len=2)
            a = rand_relation(rng, sig, td)
            b = rand_relation(rng, sig, td)
            c = rand_relation(rng, sig, td)
            op = lambda name, x=None, y=None: fiber_boolean(name, sig, td, x, y)
            assert op("meet", a, op("join", b, c)) == \
                op("join", op("meet", a, b), op("meet", a, c))
            assert op("meet", op("meet", a, b), c) == \
                op("meet", a, op("meet", b, c))
            assert op("negation", op("meet", a, b)) == \
                op("join", op("negation", a), op("negation", b))
            assert op("negation", op("negation", a)) == a
            assert op("implication", a, b) == op("join", op("negation", a), b)
            assert op("difference", a, b) == op("meet", a, op("negation", b))


class TestFiberFlow:
    def test_exists_projects(self):
        r = Relation.of(S2, [("a", "b"), ("a", "a")])
        assert fiber_flow("exists", H, r, AB) == Relation.of(S1, [("a",)])

    def test_preimage_enumerates_fiber(self):
        r = Relation.of(S1, [("a",)])
        assert fiber_flow("preimage", H, r, AB) == \
            Relation.of(S2, [("a", "a"), ("a", "b")])

    def test_forall_requires_whole_fiber(self):
        r = Relation.of(S2, [("a", "b"), ("a", "a")])
        assert fiber_flow("forall", H, r, AB) == Relation.of(S1, [("a",)])

    def test_galois_adjunctions(self):
        rng = random.Random(13)
        for _ in range(150):
            td = rand_type_domain(rng)
            tgt = rand_signature(rng, td)
            h = rand_sig_morphism(rng, tgt)
            r = rand_relation(rng, tgt, td)        # over h.target
            rp = rand_relation(rng, h.source, td)  # over h.source
            assert (fiber_flow("exists", h, r, td).tuples <= rp.tuples) == \
                (r.tuples <= fiber_flow("preimage", h, rp, td).tuples)
            assert (fiber_flow("preimage", h, rp, td).tuples <= r.tuples) == \
                (rp.tuples <= fiber_flow("forall", h, r, td).tuples)


class TestTableFlow:
    def test_sigma_identity(self):
        t = Table(S2, {"k": ("a", "b")})
        assert table_sigma(SignatureMorphism.identity(S2), t).rows == t.rows

    def test_sigma_projects_keeping_keys(self):
        t = Table(S2, {"k1": ("a", "b"), "k2": ("b", "a")})
        out = table_sigma(H, t)
        assert out.rows == {"k1": ("a",), "k2": ("b",)}

    def test_sigma_commutes_with_image(self):
        rng = random.Random(17)
        for _ in range(100):
            td = rand_type_domain(rng)
            tgt = rand_signature(rng, td)
            h = rand_sig_morphism(rng, tgt)
            t = rand_table(rng, tgt, td)
            assert table_image(table_sigma(h, t)) == \
                fiber_flow("exists", h, table_image(t), td)

    def test_sigma_functorial_up_to_key_equivalence(self):
        rng = random.Random(19)
        for _ in range(100):
            td = rand_type_domain(rng)
            tgt = rand_signature(rng, td)
            h = rand_sig_morphism(rng, tgt)
            h2 = rand_sig_morphism(rng, h.source)
            t = rand_table(rng, tgt, td)
            assert key_equivalent(table_sigma(h2.then(h), t),
                                  table_sigma(h2, table_sigma(h, t)))

    def test_substitution_identity_key_equivalent(self):
        t = Table(S2, {"k": ("a", "b")})
        out = table_substitution(SignatureMorphism.identity(S2), t, AB)
        assert key_equivalent(out, t)
        assert list(out.rows) == [("k", ("a", "b"))]

    def test_substitution_pullback_keys(self):
        t = Table(S1, {"k": ("a",)})
        out = table_substitution(H, t, AB)
        assert out.rows == {("k", ("a", "a")): ("a", "a"),
                            ("k", ("a", "b")): ("a", "b")}

    def test_substitution_commutes_with_image(self):
        rng = random.Random(29)
        for _ in range(100):
            td = rand_type_domain(rng)
            tgt = rand_signature(rng, td)
            h = rand_sig_morphism(rng, tgt)
            t = rand_table(rng, h.source, td)
            assert table_image(table_substitution(h, t, td)) == \
                fiber_flow("preimage", h, table_image(t), td)


class TestCheckTableMorphism:
    def test_identity_accepts(self):
        t = Table(S2, {"k": ("a", "b")})
        check_table_morphism(TableMorphism.identity(t), t, t)

    def test_projection_accepts(self):
        tgt = Table(S2, {"k": ("a", "b")})
        src = Table(S1, {"j": ("a",)})
        check_table_morphism(TableMorphism(H, {"k": "j"}), src, tgt)

    def test_mismatched_tuple_rejected(self):
        tgt = Table(S2, {"k": ("a", "b")})
        src = Table(S1, {"j": ("b",)})
        with pytest.raises(NaturalityViolation):
            check_table_morphism(TableMorphism(H, {"k": "j"}), src, tgt)


class TestKeyEquivalent:
    def test_reflexive(self):
        t = Table(S2, {"k": ("a", "b")})
        assert key_equivalent(t, t)

    def test_renamed_keys(self):
        t1 = Table(S2, {"k1": ("a", "b"), "k2": ("a", "a")})
        t2 = Table(S2, {"x": ("a", "a"), "y": ("a", "b")})
        assert key_equivalent(t1, t2)

    def test_multiplicities_matter(self):
        dup = Table(S2, {"k1": ("a", "b"), "k2": ("a", "b")})
        assert not key_equivalent(dup, relation_include(table_image(dup)))


class TestTypeDomainFlow:
    def test_dextro_identity_key_equivalent(self):
        t = Table(S2, {"k": ("a", "b")})
        m = TypeDomainMorphism.identity(AB)
        out = table_flow_type_domain("dextro", m, t, AB, AB)
        assert key_equivalent(out, t)

    def test_dextro_pullback_hand_enumerated(self):
        # collapse two values to one: every a1 tuple mapping onto the stored
        # a2 tuple becomes a pullback key
        a2 = TypeDomain(("C",), {"C": ("c",)})
        a1 = TypeDomain(("S",), {"S": ("a", "b")})
        m = TypeDomainMorphism.of({"C": "S"}, {"a": "c", "b": "c"})
        t = Table(Signature.of([("0", "C"), ("1", "C")]), {"p": ("c", "c")})
        out = table_flow_type_domain("dextro", m, t, a2, a1)
        assert out.signature == S2
        assert out.rows == {
            ("p", ("a", "a")): ("a", "a"),
            ("p", ("a", "b")): ("a", "b"),
            ("p", ("b", "a")): ("b", "a"),
            ("p", ("b", "b")): ("b", "b"),
        }

    def test_levo_pulled_signature_and_pushed_values(self):
        a2 = TypeDomain(("C",), {"C": ("c",)})
        a1 = TypeDomain(("S",), {"S": ("a", "b")})
        m = TypeDomainMorphism.of({"C": "S"}, {"a": "c", "b": "c"})
        t = Table(S2, {"k": ("a", "b")})
        out = table_flow_type_domain("levo", m, t, a2, a1)
        assert out.signature == Signature.of([("0.C", "C"), ("1.C", "C")])
        assert out.rows == {"k": ("c", "c")}

    def test_levo_empty_pulled_signature(self):
        # no a2 sort maps onto S: the pulled signature is empty and every key
        # carries the empty tuple
        a2 = TypeDomain(("C",), {"C": ("c",)})
        a1 = TypeDomain(("S", "T"), {"S": ("a",), "T": ("u",)})
        # a must land outside ext(C) since a is not in ext(T) = ext(f(C))
        m = TypeDomainMorphism.of({"C": "T"}, {"a": "junk", "u": "c"})
        t = Table(Signature.of([("0", "S")]), {"k1": ("a",), "k2": ("a",)})
        out = table_flow_type_domain("levo", m, t, a2, a1)
        assert out.signature == Signature((), ())
        assert out.rows == {"k1": (), "k2": ()}

    def test_dextro_against_brute_force_oracle(self):
        rng = random.Random(31)
        for _ in range(100):
            m, a2, a1 = rand_infomorphism(rng)
            sig2 = rand_signature(rng, a2, max_len=2)
            t = rand_table(rng, sig2, a2, max_keys=3)
            out = table_flow_type_domain("dextro", m, t, a2, a1)
            pushed = Signature(sig2.attrs, tuple(m.f[s] for s in sig2.sorts))
            expected = {}
            for k2, t2 in t.rows.items():
                for t1 in enumerate_tuples(pushed, a1):
                    if tuple(m.g[v] for v in t1) == t2:
                        expected[(k2, t1)] = t1
            assert out.signature == pushed
            assert out.rows == expected

    def test_levo_against_brute_force_oracle(self):
        rng = random.Random(43)
        for _ in range(100):
            m, a2, a1 = rand_infomorphism(rng)
            sig1 = rand_signature(rng, a1, max_len=2)
            t = rand_table(rng, sig1, a1, max_keys=3)
            out = table_flow_type_domain("levo", m, t, a2, a1)
            pairs = [(i, x2) for i, s1 in sig1.pairs()
                     for x2 in a2.sorts if m.f[x2] == s1]
            assert out.signature == Signature(
                tuple(f"{i}.{x2}" for i, x2 in pairs),
                tuple(x2 for _, x2 in pairs))
            for k, t1 in t.rows.items():
                assert out.rows[k] == tuple(
                    m.g[t1[sig1.position(i)]] for i, _ in pairs)
            assert out.keys() == t.keys()

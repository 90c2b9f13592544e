"""Structures in strict and lax form, formula interpretation, satisfaction.

All interpretation runs on the lax form; the strict form converts via
``to_lax``.  Interpretation returns relations (connective semantics) or
tables (keyed semantics); the two agree through ``table_image``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Optional

from .core import (
    Row,
    Signature,
    SignatureMorphism,
    TypeDomain,
    TypeDomainMorphism,
    check_signature_morphism,
    check_type_domain_morphism,
    enumerate_tuples,
    is_well_sorted,
    tuple_along,
)
from .errors import (
    DefiningConditionViolation,
    EntityInfomorphismViolation,
    KeyBridgeViolation,
    SignatureMismatch,
)
from .formula import (
    Atom,
    Bottom,
    Constraint,
    Diff,
    Exists,
    Forall,
    Formula,
    Impl,
    Join,
    Meet,
    Neg,
    Schema,
    Sequent,
    Subst,
    Top,
    infer_signature,
)
from .tables import (
    Relation,
    Table,
    TableMorphism,
    fiber_boolean,
    fiber_flow,
    relation_include,
    table_image,
    table_sigma,
    table_substitution,
)

Key = Hashable


@dataclass
class StrictStructure:
    """A global key set classified by predicates, with one tuple per key."""

    schema: Schema
    type_domain: TypeDomain
    keys: tuple[Key, ...]
    classifies: frozenset[tuple[Key, str]]  # (key, predicate)
    tuple_of_key: dict[Key, Row]

    def extent(self, predicate: str) -> list[Key]:
        return [k for k in self.keys if (k, predicate) in self.classifies]


def validate_strict(m: StrictStructure) -> None:
    """Check the defining condition: classified keys carry well-sorted tuples."""
    for k, r in sorted(m.classifies, key=repr):
        sig = m.schema.signature_of(r)
        row = m.tuple_of_key.get(k)
        if row is None or not is_well_sorted(row, sig, m.type_domain):
            raise DefiningConditionViolation(k, r)


@dataclass
class LaxStructure:
    """Per-predicate tables over one type domain."""

    schema: Schema
    type_domain: TypeDomain
    table_of: dict[str, Table]

    def validate(self) -> None:
        for r, sig in self.schema.predicates.items():
            table = self.table_of.get(r)
            if table is None:
                raise SignatureMismatch(f"no table for predicate {r!r}")
            if table.signature != sig:
                raise SignatureMismatch(
                    f"table for {r!r} over {table.signature}, expected {sig}"
                )
            table.validate(self.type_domain)


def to_lax(m: StrictStructure) -> LaxStructure:
    """Forget the global key set; keep one table per predicate."""
    validate_strict(m)
    tables = {
        r: Table(sig, {k: m.tuple_of_key[k] for k in m.extent(r)})
        for r, sig in m.schema.predicates.items()
    }
    return LaxStructure(m.schema, m.type_domain, tables)


# ----------------------------------------------------------- interpretation

def interpret_relation(m: LaxStructure, phi: Formula) -> Relation:
    """Structural recursion into the relation fibers."""
    td = m.type_domain
    if isinstance(phi, Atom):
        return table_image(m.table_of[phi.predicate])
    if isinstance(phi, Top):
        return fiber_boolean("top", phi.signature, td)
    if isinstance(phi, Bottom):
        return fiber_boolean("bottom", phi.signature, td)
    if isinstance(phi, Meet):
        return fiber_boolean("meet", infer_signature(phi, m.schema), td,
                             interpret_relation(m, phi.lhs),
                             interpret_relation(m, phi.rhs))
    if isinstance(phi, Join):
        return fiber_boolean("join", infer_signature(phi, m.schema), td,
                             interpret_relation(m, phi.lhs),
                             interpret_relation(m, phi.rhs))
    if isinstance(phi, Impl):
        return fiber_boolean("implication", infer_signature(phi, m.schema), td,
                             interpret_relation(m, phi.lhs),
                             interpret_relation(m, phi.rhs))
    if isinstance(phi, Diff):
        return fiber_boolean("difference", infer_signature(phi, m.schema), td,
                             interpret_relation(m, phi.lhs),
                             interpret_relation(m, phi.rhs))
    if isinstance(phi, Neg):
        return fiber_boolean("negation", infer_signature(phi, m.schema), td,
                             interpret_relation(m, phi.body))
    if isinstance(phi, Exists):
        return fiber_flow("exists", phi.morphism,
                          interpret_relation(m, phi.body), td)
    if isinstance(phi, Forall):
        return fiber_flow("forall", phi.morphism,
                          interpret_relation(m, phi.body), td)
    if isinstance(phi, Subst):
        return fiber_flow("preimage", phi.morphism,
                          interpret_relation(m, phi.body), td)
    raise TypeError(f"not a formula node: {phi!r}")


def interpret_table(m: LaxStructure, phi: Formula) -> Table:
    """Keyed interpretation: atoms keep their stored keys, projection and
    inflation act on keys, everything else routes through relations."""
    if isinstance(phi, Atom):
        return m.table_of[phi.predicate]
    if isinstance(phi, Exists):
        return table_sigma(phi.morphism, interpret_table(m, phi.body))
    if isinstance(phi, Subst):
        return table_substitution(phi.morphism, interpret_table(m, phi.body),
                                  m.type_domain)
    return relation_include(interpret_relation(m, phi))


def tuple_satisfies(m: LaxStructure, t: Row, phi: Formula) -> bool:
    """Independent tuple-calculus oracle: decide membership of one tuple by
    direct recursion, never building intermediate relations."""
    td = m.type_domain
    if isinstance(phi, Atom):
        return tuple(t) in set(m.table_of[phi.predicate].rows.values())
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Meet):
        return tuple_satisfies(m, t, phi.lhs) and tuple_satisfies(m, t, phi.rhs)
    if isinstance(phi, Join):
        return tuple_satisfies(m, t, phi.lhs) or tuple_satisfies(m, t, phi.rhs)
    if isinstance(phi, Impl):
        return (not tuple_satisfies(m, t, phi.lhs)) or tuple_satisfies(m, t, phi.rhs)
    if isinstance(phi, Diff):
        return tuple_satisfies(m, t, phi.lhs) and not tuple_satisfies(m, t, phi.rhs)
    if isinstance(phi, Neg):
        return not tuple_satisfies(m, t, phi.body)
    if isinstance(phi, Exists):
        h = phi.morphism
        return any(
            tuple_along(h, full) == tuple(t) and tuple_satisfies(m, full, phi.body)
            for full in enumerate_tuples(h.target, td)
        )
    if isinstance(phi, Forall):
        h = phi.morphism
        return all(
            tuple_satisfies(m, full, phi.body)
            for full in enumerate_tuples(h.target, td)
            if tuple_along(h, full) == tuple(t)
        )
    if isinstance(phi, Subst):
        return tuple_satisfies(m, tuple_along(phi.morphism, t), phi.body)
    raise TypeError(f"not a formula node: {phi!r}")


def interpret_by_oracle(m: LaxStructure, phi: Formula) -> Relation:
    sig = infer_signature(phi, m.schema)
    return Relation.of(
        sig,
        (t for t in enumerate_tuples(sig, m.type_domain)
         if tuple_satisfies(m, t, phi)),
    )


# --------------------------------------------------------------- satisfaction

def satisfies_sequent(m: LaxStructure, q: Sequent) -> bool:
    q.check(m.schema)
    return interpret_relation(m, q.lhs).tuples <= interpret_relation(m, q.rhs).tuples


@dataclass
class ConstraintVerdict:
    constraint: str
    satisfied: bool
    witness: Optional[TableMorphism] = None
    violating_tuple: Optional[Row] = None

    def __bool__(self) -> bool:
        return self.satisfied


def satisfies_constraint(m: LaxStructure, c: Constraint) -> ConstraintVerdict:
    """Decide a constraint via both adjoint forms, which must agree.

    On success the witness is the table morphism between the tuple-keyed
    interpretations, with the canonical key choice (precomposition along the
    constraint's signature morphism)."""
    c.check(m.schema)
    h = c.morphism
    td = m.type_domain
    r_target = interpret_relation(m, c.target)   # over h.target
    r_source = interpret_relation(m, c.source)   # over h.source
    projected = fiber_flow("exists", h, r_target, td)
    direct = projected.tuples <= r_source.tuples
    adjoint = r_target.tuples <= fiber_flow("preimage", h, r_source, td).tuples
    assert direct == adjoint, "the two adjoint satisfaction forms disagree"
    if not direct:
        bad = min(t for t in r_target.tuples
                  if tuple_along(h, t) not in r_source.tuples)
        return ConstraintVerdict(c.name, False, violating_tuple=bad)
    witness = TableMorphism(h, {t: tuple_along(h, t) for t in r_target.tuples})
    return ConstraintVerdict(c.name, True, witness=witness)


def intent_contains(m: LaxStructure, c: Constraint) -> bool:
    """Membership predicate of the structure's conceptual intent."""
    return satisfies_constraint(m, c).satisfied


# ----------------------------------------------------------------- morphisms

@dataclass
class LaxStructureMorphism:
    """Per-predicate bridges between two lax structures.

    ``predicate_map`` sends source-structure predicates to target-structure
    predicates; ``schema_bridge[r2]`` reindexes the pushed source signature
    into the target signature; ``key_bridge[r2]`` sends target-table keys
    back to source-table keys.
    """

    predicate_map: dict[str, str]
    schema_bridge: dict[str, SignatureMorphism]
    td_morphism: TypeDomainMorphism
    key_bridge: dict[str, dict[Key, Key]]

    @staticmethod
    def identity(m: LaxStructure) -> "LaxStructureMorphism":
        return LaxStructureMorphism(
            predicate_map={r: r for r in m.schema.predicates},
            schema_bridge={
                r: SignatureMorphism.identity(sig)
                for r, sig in m.schema.predicates.items()
            },
            td_morphism=TypeDomainMorphism.identity(m.type_domain),
            key_bridge={
                r: {k: k for k in m.table_of[r].rows}
                for r in m.schema.predicates
            },
        )


def pushed_signature(sig: Signature, m: TypeDomainMorphism) -> Signature:
    """Apply the sort map to every attribute sort (same attribute names)."""
    f = m.f
    return Signature(sig.attrs, tuple(f[s] for s in sig.sorts))


def validate_lax_morphism(lm: LaxStructureMorphism,
                          m2: LaxStructure, m1: LaxStructure) -> None:
    """Check the key condition at every predicate and source key."""
    check_type_domain_morphism(lm.td_morphism, m2.type_domain, m1.type_domain)
    for r2, sig2 in m2.schema.predicates.items():
        r1 = lm.predicate_map[r2]
        bridge = lm.schema_bridge[r2]
        if bridge.source != pushed_signature(sig2, lm.td_morphism):
            raise SignatureMismatch(
                f"bridge at {r2!r} has source {bridge.source}, expected the "
                f"pushed signature of {sig2}"
            )
        if bridge.target != m1.schema.signature_of(r1):
            raise SignatureMismatch(
                f"bridge at {r2!r} has target {bridge.target}, expected "
                f"{m1.schema.signature_of(r1)}"
            )
        check_signature_morphism(bridge)
        kappa = lm.key_bridge[r2]
        t2 = m2.table_of[r2]
        t1 = m1.table_of[r1]
        for k1 in t1.rows:
            if k1 not in kappa or kappa[k1] not in t2.rows:
                raise KeyBridgeViolation(r2, k1)
            expected = lm.td_morphism.map_row(tuple_along(bridge, t1.rows[k1]))
            if t2.rows[kappa[k1]] != expected:
                raise KeyBridgeViolation(r2, k1)


@dataclass
class StrictStructureMorphism:
    """Strict morphism data: a global key map plus the shared bridges.

    The tuple bridge between universes is derived data and is recomputed
    from the key condition, never stored."""

    predicate_map: dict[str, str]
    key_map: dict[Key, Key]  # K1 -> K2
    schema_bridge: dict[str, SignatureMorphism]
    td_morphism: TypeDomainMorphism


def strict_morphism_to_lax(sm: StrictStructureMorphism,
                           m2: StrictStructure,
                           m1: StrictStructure) -> LaxStructureMorphism:
    """Restrict the global key map per predicate, after checking the entity
    infomorphism biconditional."""
    for r2 in m2.schema.predicates:
        r1 = sm.predicate_map[r2]
        for k1 in m1.keys:
            left = (sm.key_map[k1], r2) in m2.classifies
            right = (k1, r1) in m1.classifies
            if left != right:
                raise EntityInfomorphismViolation(r2, k1)
    key_bridge = {
        r2: {k1: sm.key_map[k1] for k1 in m1.extent(sm.predicate_map[r2])}
        for r2 in m2.schema.predicates
    }
    lm = LaxStructureMorphism(
        predicate_map=dict(sm.predicate_map),
        schema_bridge=dict(sm.schema_bridge),
        td_morphism=sm.td_morphism,
        key_bridge=key_bridge,
    )
    return lm

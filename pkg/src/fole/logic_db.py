"""Sound logics, databases, and the conversion passages between them.

A sound logic is a structure that satisfies a specification; a database is
a table-valued diagram over the same specification.  The two are connected
by ``snd_to_db`` and ``db_to_snd``, and the round trips collapse tables to
their tuple images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, NamedTuple

from .core import (
    Row,
    Signature,
    SignatureMorphism,
    TypeDomain,
    TypeDomainMorphism,
    tuple_along,
)
from .errors import (
    FunctorialityViolation,
    InternalSatisfactionFailure,
    KeyBridgeViolation,
    NaturalitySquareViolation,
    SignatureMismatch,
)
from .specs import (
    AbstractSpec,
    SpecMorphism,
    abstract_table_passage,
    satisfies_spec,
    validate_spec_morphism,
)
from .structure import (
    LaxStructure,
    LaxStructureMorphism,
    validate_lax_morphism,
)
from .tables import (
    Table,
    TableMorphism,
    check_table_morphism,
    key_equivalent,
    relation_include,
    table_image,
)

Key = Hashable


@dataclass
class SoundLogic:
    """Structure + specification with satisfaction validated at construction."""

    structure: LaxStructure
    spec: AbstractSpec

    def __post_init__(self):
        self.spec.validate()
        self.structure.validate()
        report = satisfies_spec(self.structure, self.spec)
        if not report.satisfied:
            failure = report.first_failure()
            raise InternalSatisfactionFailure(
                f"structure does not satisfy constraint {failure.constraint!r}"
            )

    @property
    def schema(self):
        return self.structure.schema


@dataclass
class Database:
    """A table per predicate and a table morphism per constraint, all over
    one type domain."""

    schema: AbstractSpec
    type_domain: TypeDomain
    table_of: dict[str, Table]
    constraint_morphism: dict[str, TableMorphism]


class DatabaseProjection(NamedTuple):
    """The three projections of a database: signatures, key diagram, tuples."""

    signature_of: dict[str, Signature]
    signature_arrow: dict[str, SignatureMorphism]
    keys_of: dict[str, list]
    key_arrow: dict[str, dict]
    tuple_of: dict[str, dict]


def validate_database(db: Database) -> None:
    """Check typing, per-constraint naturality, and declared composites."""
    db.schema.validate()
    for r, sig in db.schema.schema.predicates.items():
        table = db.table_of.get(r)
        if table is None or table.signature != sig:
            raise SignatureMismatch(f"table for {r!r} missing or mistyped")
        table.validate(db.type_domain)
    for name, c in db.schema.constraints.items():
        tm = db.constraint_morphism.get(name)
        if tm is None:
            raise FunctorialityViolation(name, "no table morphism")
        if tm.sig_morphism != c.morphism:
            raise FunctorialityViolation(name, "signature morphism disagrees")
        check_table_morphism(tm, db.table_of[c.source_predicate],
                             db.table_of[c.target_predicate])
    for decl in db.schema.composites:
        composed = _compose_key_maps([db.constraint_morphism[p] for p in decl.path])
        declared = db.constraint_morphism[decl.equals]
        src_table = db.table_of[db.schema.constraints[decl.equals].source_predicate]
        for k, v in declared.key_map.items():
            # exact at the relation level: equal assigned tuples, not key names
            if src_table.rows[v] != src_table.rows[composed[k]]:
                raise FunctorialityViolation(
                    "&".join(decl.path), f"composite disagrees at key {k!r}"
                )


def _compose_key_maps(path: list[TableMorphism]) -> dict:
    last = path[-1]
    key_map = dict(last.key_map)
    for arrow in reversed(path[:-1]):
        key_map = {k: arrow.key_map[v] for k, v in key_map.items()}
    return key_map


def db_project(db: Database) -> DatabaseProjection:
    """Read off the signature passage, key diagram, and tuple bridge."""
    return DatabaseProjection(
        signature_of={r: t.signature for r, t in db.table_of.items()},
        signature_arrow={p: c.morphism for p, c in db.schema.constraints.items()},
        keys_of={r: t.keys() for r, t in db.table_of.items()},
        key_arrow={p: dict(db.constraint_morphism[p].key_map)
                   for p in db.schema.constraints},
        tuple_of={r: dict(t.rows) for r, t in db.table_of.items()},
    )


def snd_to_db(logic: SoundLogic) -> Database:
    """Interpret the specification in the structure; tables are tuple-keyed
    relation images and arrows come from the interpretation functor."""
    passage = abstract_table_passage(logic.structure, logic.spec)
    tables = {r: relation_include(rel) for r, rel in passage.objects.items()}
    db = Database(
        schema=logic.spec,
        type_domain=logic.structure.type_domain,
        table_of=tables,
        constraint_morphism=dict(passage.arrows),
    )
    validate_database(db)
    return db


def db_to_snd(db: Database) -> SoundLogic:
    """Keep the tables as the structure (constraint-free aspect); the schema
    becomes the specification.  Satisfaction is re-verified."""
    validate_database(db)
    structure = LaxStructure(db.schema.schema, db.type_domain, dict(db.table_of))
    report = satisfies_spec(structure, db.schema)
    if not report.satisfied:
        raise InternalSatisfactionFailure(
            "validated database fails satisfaction; data is corrupted"
        )
    return SoundLogic(structure, db.schema)


def db_image(db: Database) -> Database:
    """Collapse every table to its tuple image and transport the key maps to
    the canonical tuple-precomposition maps."""
    validate_database(db)
    tables = {r: relation_include(table_image(t)) for r, t in db.table_of.items()}
    arrows = {}
    for name, c in db.schema.constraints.items():
        h = c.morphism
        target_tuples = tables[c.target_predicate].rows
        arrows[name] = TableMorphism(h, {t: tuple_along(h, t) for t in target_tuples})
    out = Database(db.schema, db.type_domain, tables, arrows)
    validate_database(out)
    return out


# ----------------------------------------------------------------- morphisms

@dataclass
class SoundLogicMorphism:
    """A spec morphism and a structure morphism along a common schema map."""

    spec_morphism: SpecMorphism
    structure_morphism: LaxStructureMorphism

    def __post_init__(self):
        if self.spec_morphism.predicate_map != self.structure_morphism.predicate_map:
            raise SignatureMismatch("predicate maps of the two parts disagree")
        if self.spec_morphism.bridge != self.structure_morphism.schema_bridge:
            raise SignatureMismatch("signature bridges of the two parts disagree")


@dataclass
class DatabaseMorphism:
    """Spec morphism + type-domain morphism + per-predicate key bridge."""

    spec_morphism: SpecMorphism
    td_morphism: TypeDomainMorphism
    key_bridge: dict[str, dict[Key, Key]]


def validate_db_morphism(dm: DatabaseMorphism, db2: Database, db1: Database) -> None:
    """Check the pointwise key condition and the per-constraint naturality
    square at the relation level."""
    validate_spec_morphism(dm.spec_morphism, db2.schema, db1.schema)
    lax = _db_mor_to_lax(dm)
    validate_lax_morphism(
        lax,
        LaxStructure(db2.schema.schema, db2.type_domain, db2.table_of),
        LaxStructure(db1.schema.schema, db1.type_domain, db1.table_of),
    )
    for p2_name, c2 in db2.schema.constraints.items():
        p1_name = dm.spec_morphism.constraint_map[p2_name]
        c1 = db1.schema.constraints[p1_name]
        k2_map = db2.constraint_morphism[p2_name].key_map
        k1_map = db1.constraint_morphism[p1_name].key_map
        kappa_src = dm.key_bridge[c2.source_predicate]
        kappa_tgt = dm.key_bridge[c2.target_predicate]
        src_table = db2.table_of[c2.source_predicate]
        tgt_keys = db1.table_of[c1.target_predicate].rows
        for k1 in tgt_keys:
            left = kappa_src[k1_map[k1]]
            right = k2_map[kappa_tgt[k1]]
            # relation-level comparison: the assigned tuples must agree
            if src_table.rows[left] != src_table.rows[right]:
                raise NaturalitySquareViolation(p2_name, f"at key {k1!r}")


def _db_mor_to_lax(dm: DatabaseMorphism) -> LaxStructureMorphism:
    return LaxStructureMorphism(
        predicate_map=dict(dm.spec_morphism.predicate_map),
        schema_bridge=dict(dm.spec_morphism.bridge),
        td_morphism=dm.td_morphism,
        key_bridge=dm.key_bridge,
    )


def snd_mor_to_db_mor(lm: SoundLogicMorphism,
                      l2: SoundLogic, l1: SoundLogic) -> DatabaseMorphism:
    """Assemble a database morphism between the interpreted databases.

    Tables of ``snd_to_db`` are tuple-keyed, so the key bridge is transported
    to the forced tuple form (precompose along the bridge, then push values)."""
    validate_lax_morphism(lm.structure_morphism, l2.structure, l1.structure)
    validate_spec_morphism(lm.spec_morphism, l2.spec, l1.spec)
    g_push = lm.structure_morphism.td_morphism.map_row
    key_bridge = {}
    for r2 in l2.spec.schema.predicates:
        r1 = lm.spec_morphism.predicate_map[r2]
        bridge = lm.structure_morphism.schema_bridge[r2]
        tuples1 = table_image(l1.structure.table_of[r1]).tuples
        key_bridge[r2] = {t1: g_push(tuple_along(bridge, t1)) for t1 in tuples1}
    dm = DatabaseMorphism(
        spec_morphism=lm.spec_morphism,
        td_morphism=lm.structure_morphism.td_morphism,
        key_bridge=key_bridge,
    )
    validate_db_morphism(dm, snd_to_db(l2), snd_to_db(l1))
    return dm


def db_mor_to_snd_mor(dm: DatabaseMorphism,
                      db2: Database, db1: Database) -> SoundLogicMorphism:
    """Disassemble: the constraint-free aspect is the structure morphism and
    the schema bridge is the spec morphism; components are reused as-is."""
    validate_db_morphism(dm, db2, db1)
    lm = SoundLogicMorphism(
        spec_morphism=dm.spec_morphism,
        structure_morphism=_db_mor_to_lax(dm),
    )
    return lm

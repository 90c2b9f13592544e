"""Tables and relations over a type domain.

A table is a keyed tuple assignment; a relation is its tuple-set image.
Connective semantics lives on relations; quantifier flow moves tables and
relations between signature fibers, and type-domain flow moves them between
type domains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping

from .core import (
    Row,
    Signature,
    SignatureMorphism,
    TypeDomain,
    TypeDomainMorphism,
    check_type_domain_morphism,
    enumerate_tuples,
    is_well_sorted,
    tuple_along,
)
from .errors import NaturalityViolation, SignatureMismatch

Key = Hashable


@dataclass
class Table:
    """A finite key set with a tuple assignment over one signature.

    ``rows`` preserves insertion order; key order is significant only for
    deterministic output, never for semantics.
    """

    signature: Signature
    rows: dict[Key, Row]

    def keys(self) -> list[Key]:
        return list(self.rows)

    def tuple_of(self, key: Key) -> Row:
        return self.rows[key]

    def validate(self, td: TypeDomain) -> None:
        for k, t in self.rows.items():
            if not is_well_sorted(t, self.signature, td):
                raise SignatureMismatch(
                    f"row {k!r} = {t!r} is not well-sorted over {self.signature}"
                )


@dataclass(frozen=True)
class Relation:
    signature: Signature
    tuples: frozenset[Row]

    @staticmethod
    def of(signature: Signature, tuples) -> "Relation":
        return Relation(signature, frozenset(tuple(t) for t in tuples))

    def sorted_tuples(self) -> list[Row]:
        return sorted(self.tuples)

    def __contains__(self, t: Row) -> bool:
        return tuple(t) in self.tuples

    def __len__(self) -> int:
        return len(self.tuples)


@dataclass
class TableMorphism:
    """A signature morphism plus a contravariant key map.

    The source table lives over ``sig_morphism.source`` and the target table
    over ``sig_morphism.target``; ``key_map`` sends target-table keys to
    source-table keys.
    """

    sig_morphism: SignatureMorphism
    key_map: dict[Key, Key]

    @staticmethod
    def identity(table: Table) -> "TableMorphism":
        return TableMorphism(
            SignatureMorphism.identity(table.signature),
            {k: k for k in table.rows},
        )


def table_image(table: Table) -> Relation:
    """Collapse a table to its set of tuples."""
    return Relation.of(table.signature, table.rows.values())


def relation_include(rel: Relation) -> Table:
    """Key a relation by its own tuples; left inverse of table_image."""
    return Table(rel.signature, {t: t for t in rel.sorted_tuples()})


_BOOLEAN_ARITY = {
    "meet": 2, "join": 2, "implication": 2, "difference": 2,
    "negation": 1, "top": 0, "bottom": 0,
}


def fiber_boolean(op: str, sig: Signature, td: TypeDomain,
                  lhs: Relation | None = None,
                  rhs: Relation | None = None) -> Relation:
    """Set-theoretic connective semantics inside one signature fiber."""
    if op not in _BOOLEAN_ARITY:
        raise ValueError(f"unknown fiber operation {op!r}")
    arity = _BOOLEAN_ARITY[op]
    operands = [r for r in (lhs, rhs) if r is not None]
    if len(operands) != arity:
        raise ValueError(f"{op} expects {arity} operand(s), got {len(operands)}")
    for r in operands:
        if r.signature != sig:
            raise SignatureMismatch(f"operand over {r.signature}, expected {sig}")

    if op == "top":
        return Relation.of(sig, enumerate_tuples(sig, td))
    if op == "bottom":
        return Relation.of(sig, ())
    if op == "meet":
        return Relation(sig, lhs.tuples & rhs.tuples)
    if op == "join":
        return Relation(sig, lhs.tuples | rhs.tuples)
    top = frozenset(enumerate_tuples(sig, td))
    if op == "negation":
        return Relation(sig, top - lhs.tuples)
    if op == "difference":
        return Relation(sig, lhs.tuples - rhs.tuples)
    # implication
    return Relation(sig, (top - lhs.tuples) | rhs.tuples)


def fiber_flow(mode: str, h: SignatureMorphism, rel: Relation,
               td: TypeDomain) -> Relation:
    """Quantifier flow along a signature morphism.

    exists/forall take a relation over ``h.target`` and land in ``h.source``;
    preimage goes the other way.
    """
    if mode == "exists":
        if rel.signature != h.target:
            raise SignatureMismatch("exists expects a relation over h.target")
        return Relation.of(h.source, (tuple_along(h, t) for t in rel.tuples))
    if mode == "preimage":
        if rel.signature != h.source:
            raise SignatureMismatch("preimage expects a relation over h.source")
        return Relation.of(
            h.target,
            (t for t in enumerate_tuples(h.target, td) if tuple_along(h, t) in rel),
        )
    if mode == "forall":
        if rel.signature != h.target:
            raise SignatureMismatch("forall expects a relation over h.target")
        fiber = enumerate_tuples(h.target, td)
        return Relation.of(
            h.source,
            (
                t_src
                for t_src in enumerate_tuples(h.source, td)
                if all(t in rel for t in fiber if tuple_along(h, t) == t_src)
            ),
        )
    raise ValueError(f"unknown flow mode {mode!r}")


def table_sigma(h: SignatureMorphism, table: Table) -> Table:
    """Projection: push a table over ``h.target`` down to ``h.source``."""
    if table.signature != h.target:
        raise SignatureMismatch("table_sigma expects a table over h.target")
    return Table(h.source, {k: tuple_along(h, t) for k, t in table.rows.items()})


def table_substitution(h: SignatureMorphism, table: Table,
                       td: TypeDomain) -> Table:
    """Inflation: pull a table over ``h.source`` back to ``h.target``.

    Pullback keys are (original key, chosen tuple) pairs, ordered by key
    then by tuple enumeration order.
    """
    if table.signature != h.source:
        raise SignatureMismatch("table_substitution expects a table over h.source")
    fiber = enumerate_tuples(h.target, td)
    rows: dict[Key, Row] = {}
    for k, t_src in table.rows.items():
        for t in fiber:
            if tuple_along(h, t) == t_src:
                rows[(k, t)] = t
    return Table(h.target, rows)


def check_table_morphism(m: TableMorphism, src: Table, tgt: Table) -> None:
    """Check naturality: source tuples agree with precomposed target tuples."""
    h = m.sig_morphism
    if src.signature != h.source or tgt.signature != h.target:
        raise SignatureMismatch("table morphism signatures do not line up")
    for k in tgt.rows:
        if k not in m.key_map:
            raise NaturalityViolation(k, "key not mapped")
        k_src = m.key_map[k]
        if k_src not in src.rows:
            raise NaturalityViolation(k, f"mapped key {k_src!r} missing in source")
        if src.rows[k_src] != tuple_along(h, tgt.rows[k]):
            raise NaturalityViolation(k)


def key_equivalent(t1: Table, t2: Table) -> bool:
    """True iff some key bijection identifies the two tuple assignments.

    Decided by multiset equality of the assigned tuples.
    """
    if t1.signature != t2.signature:
        raise SignatureMismatch("key equivalence needs equal signatures")
    return sorted(t1.rows.values()) == sorted(t2.rows.values())


def table_flow_type_domain(direction: str, m: TypeDomainMorphism, table: Table,
                           a2: TypeDomain, a1: TypeDomain) -> Table:
    """Move a table between type domains along an infomorphism.

    dextro takes a table over ``a2`` to one over ``a1`` (signature pushed
    along the sort map, keys refined by a pullback); levo takes a table over
    ``a1`` to one over ``a2`` (signature pulled back along the sort map,
    keys preserved, values pushed along the value map).
    """
    check_type_domain_morphism(m, a2, a1)
    f, g = m.f, m.g
    if direction == "dextro":
        sig2 = table.signature
        out_sig = Signature(sig2.attrs, tuple(f[s] for s in sig2.sorts))
        fiber = enumerate_tuples(out_sig, a1)
        rows: dict[Key, Row] = {}
        for k2, t2 in table.rows.items():
            for t1 in fiber:
                if m.map_row(t1) == t2:
                    rows[(k2, t1)] = t1
        return Table(out_sig, rows)
    if direction == "levo":
        sig1 = table.signature
        attrs: list[str] = []
        sorts: list[str] = []
        picks: list[int] = []  # source position feeding each output attribute
        for pos, (i, s1) in enumerate(sig1.pairs()):
            for x2 in a2.sorts:
                if f[x2] == s1:
                    attrs.append(f"{i}.{x2}")
                    sorts.append(x2)
                    picks.append(pos)
        out_sig = Signature(tuple(attrs), tuple(sorts))
        rows = {
            k: tuple(g[t[pos]] for pos in picks)
            for k, t in table.rows.items()
        }
        return Table(out_sig, rows)
    raise ValueError(f"unknown direction {direction!r}")

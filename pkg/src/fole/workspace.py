"""Workspace file loading: one JSON file holding every named item.

Top-level keys: "typeDomains", "schemas", "sigMorphisms", "structures",
"specs", "databases", "specMorphisms", "structureMorphisms", "dbMorphisms",
"typeDomainMorphisms".  All sections are optional; items resolve against
each other by name.  Loading validates every item and collects diagnostics
instead of aborting on the first failure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .core import (
    Signature,
    SignatureMorphism,
    TypeDomain,
    TypeDomainMorphism,
    check_signature_morphism,
    check_type_domain_morphism,
)
from .errors import FoleError, UnresolvedReference
from .formula import Schema
from .logic_db import (
    Database,
    DatabaseMorphism,
    validate_database,
    validate_db_morphism,
)
from .specs import (
    AbstractSpec,
    CompositeDeclaration,
    GeneratingConstraint,
    SpecMorphism,
    validate_spec_morphism,
)
from .structure import (
    LaxStructure,
    LaxStructureMorphism,
    StrictStructure,
    StrictStructureMorphism,
    pushed_signature,
    strict_morphism_to_lax,
    to_lax,
    validate_lax_morphism,
    validate_strict,
)
from .tables import Table, TableMorphism


def _signature(pairs) -> Signature:
    return Signature.of([(a, s) for a, s in pairs])


def _table(data, signature: Signature | None = None) -> Table:
    sig = _signature(data["signature"]) if "signature" in data else signature
    rows = {k: tuple(v) for k, v in data["rows"].items()}
    return Table(sig, rows)


def key_name(key) -> str:
    """Stable string form for composite keys in serialized output."""
    if isinstance(key, str):
        return key
    if isinstance(key, tuple):
        return "(" + ",".join(key_name(k) for k in key) + ")"
    return str(key)


def table_to_json(table: Table) -> dict:
    return {
        "signature": [[a, s] for a, s in table.signature.pairs()],
        "rows": {key_name(k): list(v) for k, v in table.rows.items()},
    }


@dataclass
class StructureEntry:
    kind: str  # "lax" | "strict"
    lax: LaxStructure
    strict: Optional[StrictStructure] = None


@dataclass
class Diagnostic:
    section: str
    name: str
    error: str

    def __str__(self) -> str:
        return f"{self.section} {self.name}: {self.error}"


@dataclass
class Workspace:
    type_domains: dict[str, TypeDomain] = field(default_factory=dict)
    schemas: dict[str, Schema] = field(default_factory=dict)
    sig_morphisms: dict[str, SignatureMorphism] = field(default_factory=dict)
    type_domain_morphisms: dict[str, tuple[TypeDomainMorphism, str, str]] = \
        field(default_factory=dict)
    structures: dict[str, StructureEntry] = field(default_factory=dict)
    specs: dict[str, AbstractSpec] = field(default_factory=dict)
    databases: dict[str, Database] = field(default_factory=dict)
    spec_morphisms: dict[str, tuple[SpecMorphism, str, str]] = \
        field(default_factory=dict)
    structure_morphisms: dict[str, tuple[LaxStructureMorphism, str, str]] = \
        field(default_factory=dict)
    db_morphisms: dict[str, tuple[DatabaseMorphism, str, str]] = \
        field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def require(self, section: str, name: str):
        table = {
            "typeDomain": self.type_domains,
            "schema": self.schemas,
            "sigMorphism": self.sig_morphisms,
            "structure": self.structures,
            "spec": self.specs,
            "database": self.databases,
        }[section]
        if name not in table:
            raise UnresolvedReference(section, name)
        return table[name]


def load_workspace(path: str) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return load_workspace_data(raw)


def load_workspace_data(raw: dict) -> Workspace:
    ws = Workspace()

    def attempt(section: str, name: str, fn):
        try:
            fn()
        except (FoleError, KeyError, ValueError) as exc:
            ws.diagnostics.append(Diagnostic(section, name, f"{type(exc).__name__}: {exc}"))

    for name, data in raw.get("typeDomains", {}).items():
        attempt("typeDomains", name, lambda: ws.type_domains.__setitem__(
            name, TypeDomain(tuple(data), {x: tuple(vs) for x, vs in data.items()})
        ))

    for name, data in raw.get("schemas", {}).items():
        def build_schema(name=name, data=data):
            schema = Schema(
                sorts=tuple(data["sorts"]),
                predicates={r: _signature(sig) for r, sig in data["predicates"].items()},
                signatures={n: _signature(sig)
                            for n, sig in data.get("signatures", {}).items()},
            )
            ws.schemas[name] = schema
        attempt("schemas", name, build_schema)

    for name, data in raw.get("sigMorphisms", {}).items():
        def build_sig_mor(name=name, data=data):
            h = SignatureMorphism.of(
                _signature(data["source"]), _signature(data["target"]), data["map"]
            )
            check_signature_morphism(h)
            ws.sig_morphisms[name] = h
        attempt("sigMorphisms", name, build_sig_mor)

    for name, data in raw.get("typeDomainMorphisms", {}).items():
        def build_td_mor(name=name, data=data):
            m = TypeDomainMorphism.of(data["sortMap"], data["valueMap"])
            a2 = ws.require("typeDomain", data["source"])
            a1 = ws.require("typeDomain", data["target"])
            check_type_domain_morphism(m, a2, a1)
            ws.type_domain_morphisms[name] = (m, data["source"], data["target"])
        attempt("typeDomainMorphisms", name, build_td_mor)

    for name, data in raw.get("structures", {}).items():
        def build_structure(name=name, data=data):
            schema = ws.require("schema", data["schema"])
            td = ws.require("typeDomain", data["typeDomain"])
            kind = data.get("kind", "lax")
            if kind == "strict":
                strict = StrictStructure(
                    schema=schema,
                    type_domain=td,
                    keys=tuple(data["keys"]),
                    classifies=frozenset((k, r) for k, r in data["classifies"]),
                    tuple_of_key={k: tuple(v) for k, v in data["tuples"].items()},
                )
                validate_strict(strict)
                ws.structures[name] = StructureEntry("strict", to_lax(strict), strict)
            else:
                tables = {
                    r: _table(tdata, schema.signature_of(r))
                    for r, tdata in data["tables"].items()
                }
                lax = LaxStructure(schema, td, tables)
                lax.validate()
                ws.structures[name] = StructureEntry("lax", lax)
        attempt("structures", name, build_structure)

    for name, data in raw.get("specs", {}).items():
        def build_spec(name=name, data=data):
            schema = ws.require("schema", data["schema"])
            constraints = {}
            for pname, cdata in data.get("constraints", {}).items():
                src = schema.signature_of(cdata["sourcePredicate"])
                tgt = schema.signature_of(cdata["targetPredicate"])
                h = SignatureMorphism.of(src, tgt, cdata["h"])
                constraints[pname] = GeneratingConstraint(
                    pname, cdata["sourcePredicate"], cdata["targetPredicate"], h
                )
            composites = tuple(
                CompositeDeclaration(tuple(d["path"]), d["equals"])
                for d in data.get("composites", [])
            )
            spec = AbstractSpec(schema, constraints, composites)
            spec.validate()
            ws.specs[name] = spec
        attempt("specs", name, build_spec)

    for name, data in raw.get("databases", {}).items():
        def build_db(name=name, data=data):
            spec = ws.require("spec", data["schema"])
            td = ws.require("typeDomain", data["typeDomain"])
            tables = {
                r: _table(tdata, spec.schema.signature_of(r))
                for r, tdata in data["tables"].items()
            }
            morphisms = {}
            for pname, kmap in data.get("constraintKeyMaps", {}).items():
                morphisms[pname] = TableMorphism(
                    spec.constraints[pname].morphism, dict(kmap)
                )
            db = Database(spec, td, tables, morphisms)
            validate_database(db)
            ws.databases[name] = db
        attempt("databases", name, build_db)

    for name, data in raw.get("specMorphisms", {}).items():
        def build_spec_mor(name=name, data=data):
            t2 = ws.require("spec", data["source"])
            t1 = ws.require("spec", data["target"])
            sm = _spec_morphism(data, t2, t1)
            validate_spec_morphism(sm, t2, t1)
            ws.spec_morphisms[name] = (sm, data["source"], data["target"])
        attempt("specMorphisms", name, build_spec_mor)

    for name, data in raw.get("structureMorphisms", {}).items():
        def build_struc_mor(name=name, data=data):
            m2 = ws.require("structure", data["source"])
            m1 = ws.require("structure", data["target"])
            td_mor, _, _ = ws.type_domain_morphisms[data["typeDomainMorphism"]]
            bridges = _bridges(data["bridges"], data["predicateMap"],
                               m2.lax.schema, m1.lax.schema, td_mor)
            if data.get("kind") == "strict":
                if m2.strict is None or m1.strict is None:
                    raise UnresolvedReference("strict structure", data["source"])
                sm = StrictStructureMorphism(
                    predicate_map=dict(data["predicateMap"]),
                    key_map=dict(data["keyMap"]),
                    schema_bridge=bridges,
                    td_morphism=td_mor,
                )
                lax = strict_morphism_to_lax(sm, m2.strict, m1.strict)
            else:
                lax = LaxStructureMorphism(
                    predicate_map=dict(data["predicateMap"]),
                    schema_bridge=bridges,
                    td_morphism=td_mor,
                    key_bridge={r: dict(km) for r, km in data["keyBridges"].items()},
                )
            validate_lax_morphism(lax, m2.lax, m1.lax)
            ws.structure_morphisms[name] = (lax, data["source"], data["target"])
        attempt("structureMorphisms", name, build_struc_mor)

    for name, data in raw.get("dbMorphisms", {}).items():
        def build_db_mor(name=name, data=data):
            db2 = ws.require("database", data["source"])
            db1 = ws.require("database", data["target"])
            td_mor, _, _ = ws.type_domain_morphisms[data["typeDomainMorphism"]]
            if isinstance(data.get("specMorphism"), str):
                sm, _, _ = ws.spec_morphisms[data["specMorphism"]]
            else:
                sm = _spec_morphism(data, db2.schema, db1.schema)
            dm = DatabaseMorphism(
                spec_morphism=sm,
                td_morphism=td_mor,
                key_bridge={r: dict(km) for r, km in data["keyBridges"].items()},
            )
            validate_db_morphism(dm, db2, db1)
            ws.db_morphisms[name] = (dm, data["source"], data["target"])
        attempt("dbMorphisms", name, build_db_mor)

    return ws


def _bridges(data, predicate_map, schema2: Schema, schema1: Schema,
             td_mor: TypeDomainMorphism) -> dict[str, SignatureMorphism]:
    out = {}
    for r2, mapping in data.items():
        pushed = pushed_signature(schema2.signature_of(r2), td_mor)
        target = schema1.signature_of(predicate_map[r2])
        out[r2] = SignatureMorphism.of(pushed, target, mapping)
    return out


def _spec_morphism(data, t2: AbstractSpec, t1: AbstractSpec) -> SpecMorphism:
    f = dict(data["sortMap"])
    bridge = {}
    for r2, mapping in data["bridges"].items():
        sig2 = t2.schema.signature_of(r2)
        pushed = Signature(sig2.attrs, tuple(f[s] for s in sig2.sorts))
        target = t1.schema.signature_of(data["predicateMap"][r2])
        bridge[r2] = SignatureMorphism.of(pushed, target, mapping)
    return SpecMorphism(
        predicate_map=dict(data["predicateMap"]),
        constraint_map=dict(data.get("constraintMap", {})),
        sort_map=f,
        bridge=bridge,
    )

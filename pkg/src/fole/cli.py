"""Command-line interface: eval, check, convert, migrate.

Reports use a stable line grammar (``ITEM <name>: OK|FAIL <code> [detail]``)
so CI can grep them; ``--json`` mirrors each report as machine-readable
JSON.  Every command is deterministic: the same workspace and arguments
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from .core import enumerate_tuples
from .errors import FoleError, UnresolvedReference
from .formula import parse_formula
from .logic_db import (
    Database,
    SoundLogic,
    db_image,
    db_to_snd,
    snd_to_db,
    validate_database,
    validate_db_morphism,
)
from .specs import satisfies_spec, validate_spec_morphism
from .structure import interpret_relation, interpret_table, validate_lax_morphism
from .tables import Table, table_flow_type_domain
from .workspace import (
    Workspace,
    key_name,
    load_workspace,
    table_to_json,
)


def _emit(out, text: str):
    out.write(text + "\n")


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _ordered_tuples(rel, td):
    order = {t: i for i, t in enumerate(enumerate_tuples(rel.signature, td))}
    return sorted(rel.tuples, key=order.__getitem__)


def cmd_eval(ws: Workspace, structure: str, formula_text: str,
             as_table: bool = False, as_json: bool = False,
             out=sys.stdout) -> int:
    entry = ws.require("structure", structure)
    m = entry.lax
    phi = parse_formula(formula_text, m.schema, ws.sig_morphisms)
    rel = interpret_relation(m, phi)
    tuples = _ordered_tuples(rel, m.type_domain)
    if as_json:
        payload = {
            "signature": [[a, s] for a, s in rel.signature.pairs()],
            "tuples": [list(t) for t in tuples],
        }
        if as_table:
            payload["table"] = table_to_json(interpret_table(m, phi))
        _emit(out, _dump_json(payload))
        return 0
    _emit(out, "\t".join(f"{a}:{s}" for a, s in rel.signature.pairs()))
    for t in tuples:
        _emit(out, "\t".join(t))
    if as_table:
        table = interpret_table(m, phi)
        _emit(out, "-- table keys --")
        for k, t in table.rows.items():
            _emit(out, key_name(k) + "\t" + "\t".join(t))
    return 0


def _report(out, as_json: bool, lines: list[dict]) -> int:
    ok = all(line["ok"] for line in lines)
    if as_json:
        _emit(out, _dump_json({"ok": ok, "items": lines}))
    else:
        for line in lines:
            status = "OK" if line["ok"] else f"FAIL {line.get('code', 'ERROR')}"
            detail = line.get("detail", "")
            _emit(out, f"ITEM {line['name']}: {status}" + (f" {detail}" if detail else ""))
    return 0 if ok else 1


def _checked(name: str, fn: Callable[[], None]) -> dict:
    try:
        fn()
        return {"name": name, "ok": True}
    except FoleError as exc:
        return {"name": name, "ok": False,
                "code": type(exc).__name__, "detail": str(exc)}


def cmd_check(ws: Workspace, what: str, names: list[str],
              as_json: bool = False, out=sys.stdout) -> int:
    lines: list[dict] = []
    if what == "structure":
        for name in names:
            entry = ws.require("structure", name)
            lines.append(_checked(name, entry.lax.validate))
    elif what == "spec-sat":
        structure, spec_name = names
        m = ws.require("structure", structure).lax
        spec = ws.require("spec", spec_name)
        report = satisfies_spec(m, spec)
        for cname, verdict in sorted(report.verdicts.items()):
            line = {"name": f"{spec_name}.{cname}", "ok": verdict.satisfied}
            if not verdict.satisfied:
                line["code"] = "Unsatisfied"
                line["detail"] = "witness tuple " + repr(verdict.violating_tuple)
            lines.append(line)
    elif what == "morphism":
        for name in names:
            lines.append(_check_morphism(ws, name))
    elif what == "database":
        for name in names:
            db = ws.require("database", name)
            lines.append(_checked(name, lambda db=db: validate_database(db)))
    else:
        raise SystemExit(f"unknown check target {what!r}")
    return _report(out, as_json, lines)


def _check_morphism(ws: Workspace, name: str) -> dict:
    if name in ws.structure_morphisms:
        lax, src, tgt = ws.structure_morphisms[name]
        return _checked(name, lambda: validate_lax_morphism(
            lax, ws.require("structure", src).lax, ws.require("structure", tgt).lax
        ))
    if name in ws.spec_morphisms:
        sm, src, tgt = ws.spec_morphisms[name]
        return _checked(name, lambda: validate_spec_morphism(
            sm, ws.require("spec", src), ws.require("spec", tgt)
        ))
    if name in ws.db_morphisms:
        dm, src, tgt = ws.db_morphisms[name]
        return _checked(name, lambda: validate_db_morphism(
            dm, ws.require("database", src), ws.require("database", tgt)
        ))
    if name in ws.sig_morphisms:
        from .core import check_signature_morphism
        return _checked(name, lambda: check_signature_morphism(ws.sig_morphisms[name]))
    if name in ws.type_domain_morphisms:
        from .core import check_type_domain_morphism
        m, src, tgt = ws.type_domain_morphisms[name]
        return _checked(name, lambda: check_type_domain_morphism(
            m, ws.require("typeDomain", src), ws.require("typeDomain", tgt)
        ))
    raise UnresolvedReference("morphism", name)


def _spec_to_json(spec, schema_name: str) -> dict:
    return {
        "schema": schema_name,
        "constraints": {
            p: {
                "sourcePredicate": c.source_predicate,
                "targetPredicate": c.target_predicate,
                "h": dict(c.morphism.mapping),
            }
            for p, c in sorted(spec.constraints.items())
        },
        "composites": [
            {"path": list(d.path), "equals": d.equals} for d in spec.composites
        ],
    }


def _schema_to_json(schema) -> dict:
    return {
        "sorts": list(schema.sorts),
        "predicates": {r: [[a, s] for a, s in sig.pairs()]
                       for r, sig in sorted(schema.predicates.items())},
        "signatures": {n: [[a, s] for a, s in sig.pairs()]
                       for n, sig in sorted(schema.signatures.items())},
    }


def _td_to_json(td) -> dict:
    return {x: list(td.extents[x]) for x in td.sorts}


def _db_fragment(db: Database, name: str, td_name: str, schema_name: str,
                 spec_name: str) -> dict:
    return {
        "typeDomains": {td_name: _td_to_json(db.type_domain)},
        "schemas": {schema_name: _schema_to_json(db.schema.schema)},
        "specs": {spec_name: _spec_to_json(db.schema, schema_name)},
        "databases": {
            name: {
                "schema": spec_name,
                "typeDomain": td_name,
                "tables": {r: table_to_json(t) for r, t in sorted(db.table_of.items())},
                "constraintKeyMaps": {
                    p: {key_name(k): key_name(v) for k, v in tm.key_map.items()}
                    for p, tm in sorted(db.constraint_morphism.items())
                },
            }
        },
    }


def cmd_convert(ws: Workspace, direction: str, name: str, out_path: str,
                out=sys.stdout) -> int:
    if direction == "snd-to-db":
        struct_name, spec_name = name.split(":")
        m = ws.require("structure", struct_name).lax
        spec = ws.require("spec", spec_name)
        logic = SoundLogic(m, spec)
        db = snd_to_db(logic)
        frag = _db_fragment(db, f"{struct_name}__{spec_name}",
                            "typeDomain", "schema", "spec")
    elif direction == "db-image":
        db = ws.require("database", name)
        frag = _db_fragment(db_image(db), f"{name}_image",
                            "typeDomain", "schema", "spec")
    elif direction == "db-to-snd":
        db = ws.require("database", name)
        logic = db_to_snd(db)
        frag = {
            "typeDomains": {"typeDomain": _td_to_json(db.type_domain)},
            "schemas": {"schema": _schema_to_json(db.schema.schema)},
            "specs": {"spec": _spec_to_json(db.schema, "schema")},
            "structures": {
                f"{name}_structure": {
                    "schema": "schema",
                    "typeDomain": "typeDomain",
                    "kind": "lax",
                    "tables": {r: table_to_json(t)
                               for r, t in sorted(logic.structure.table_of.items())},
                }
            },
        }
    else:
        raise SystemExit(f"unknown convert direction {direction!r}")
    text = _dump_json(frag) + "\n"
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    _emit(out, f"WROTE {out_path}")
    return 0


def cmd_migrate(ws: Workspace, table_name: str, morphism_name: str,
                direction: str, out_path: str, out=sys.stdout) -> int:
    struct_name, predicate = table_name.split(".")
    entry = ws.require("structure", struct_name)
    table = entry.lax.table_of[predicate]
    m, a2_name, a1_name = ws.type_domain_morphisms[morphism_name]
    a2 = ws.require("typeDomain", a2_name)
    a1 = ws.require("typeDomain", a1_name)
    migrated = table_flow_type_domain(direction, m, table, a2, a1)
    target_td, target_name = (a1, a1_name) if direction == "dextro" else (a2, a2_name)
    migrated.validate(target_td)
    out_sig = [[a, s] for a, s in migrated.signature.pairs()]
    frag = {
        "typeDomains": {target_name: _td_to_json(target_td)},
        "schemas": {
            "schema": {"sorts": list(target_td.sorts),
                       "predicates": {"migrated": out_sig}},
        },
        "structures": {
            "migrated": {
                "schema": "schema",
                "typeDomain": target_name,
                "kind": "lax",
                "tables": {"migrated": table_to_json(migrated)},
            }
        },
    }
    text = _dump_json(frag) + "\n"
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    _emit(out, f"WROTE {out_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fole",
        description="Finite many-sorted logic engine over relational tables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="interpret a formula in a structure")
    p_eval.add_argument("--workspace", "-w", required=True)
    p_eval.add_argument("--structure", "-s", required=True)
    p_eval.add_argument("formula")
    p_eval.add_argument("--as-table", action="store_true")
    p_eval.add_argument("--json", action="store_true")

    p_check = sub.add_parser("check", help="validate an item or satisfaction")
    p_check.add_argument("--workspace", "-w", required=True)
    p_check.add_argument("what",
                         choices=["structure", "spec-sat", "morphism", "database"])
    p_check.add_argument("names", nargs="+")
    p_check.add_argument("--json", action="store_true")

    p_conv = sub.add_parser("convert", help="run a conversion passage")
    p_conv.add_argument("--workspace", "-w", required=True)
    p_conv.add_argument("direction", choices=["snd-to-db", "db-to-snd", "db-image"])
    p_conv.add_argument("name",
                        help="database name, or STRUCTURE:SPEC for snd-to-db")
    p_conv.add_argument("--out", required=True)

    p_mig = sub.add_parser("migrate", help="move a table along a type-domain morphism")
    p_mig.add_argument("--workspace", "-w", required=True)
    p_mig.add_argument("table", help="STRUCTURE.PREDICATE")
    p_mig.add_argument("morphism")
    p_mig.add_argument("direction", choices=["dextro", "levo"])
    p_mig.add_argument("--out", required=True)
    return parser


def main(argv=None, out=sys.stdout) -> int:
    args = build_parser().parse_args(argv)
    ws = load_workspace(args.workspace)
    try:
        if args.command == "eval":
            if ws.diagnostics:
                _print_diagnostics(ws, out)
                return 2
            return cmd_eval(ws, args.structure, args.formula,
                            as_table=args.as_table, as_json=args.json, out=out)
        if args.command == "check":
            return cmd_check(ws, args.what, args.names,
                             as_json=args.json, out=out)
        if ws.diagnostics:
            _print_diagnostics(ws, out)
            return 2
        if args.command == "convert":
            return cmd_convert(ws, args.direction, args.name, args.out, out=out)
        if args.command == "migrate":
            return cmd_migrate(ws, args.table, args.morphism, args.direction,
                               args.out, out=out)
    except FoleError as exc:
        _emit(out, f"ERROR {type(exc).__name__}: {exc}")
        return 2
    raise SystemExit("unreachable")


def _print_diagnostics(ws: Workspace, out):
    for diag in ws.diagnostics:
        _emit(out, f"ITEM {diag.section}/{diag.name}: FAIL {diag.error}")


if __name__ == "__main__":
    sys.exit(main())

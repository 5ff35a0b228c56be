"""Command line: ``bmc <command> [flags]`` or ``bmc run JOB.json``.

Every command prints one canonical JSON document (sorted keys).  Exit codes:
0 success, 1 a verification report came out false, 2 bad input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

import jsonschema

from .bmweights import (
    FormalCycleCombo, GL2ResidualDescriptor, SerreWeightGLn, TableKey, bm_verify,
    component_report_gl2, gl2_a_data, ledger_solve, weight_set_gl2,
)
from .cycles import (
    check_additivity, check_associativity, cut_by_regular, cycle_of, product_cycle,
)
from .errors import BMCError, ResourceLimit
from .groebner import Ideal, groebner_basis, unit_ideal
from .hilbert import SubquotientModule, hilbert_series, multiplicity
from .modrep import (
    SerreWeightGL2, character_sym, composition_factors_explicit, decompose, parse_weight_label,
    type_character,
)
from .poly import Ring, parse_order, parse_ring
from .primes import minimal_primes

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class InputError(Exception):
    kind = "InputError"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _ideal(ring: Ring, text: str | None) -> Ideal:
    if text is None:
        return unit_ideal(ring)
    return Ideal.parse(ring, text)


def _module(args) -> SubquotientModule:
    ring = parse_ring(args.ring)
    outer = _ideal(ring, getattr(args, "outer", None))
    return SubquotientModule(ring, _ideal(ring, args.ideal), outer)


def _load_json(value: Any) -> Any:
    if isinstance(value, (dict, list)):
        return value
    text = str(value)
    if text.lstrip().startswith(("{", "[")):
        return json.loads(text)
    return json.loads(Path(text).read_text(encoding="utf-8"))


def _ints(text: str | None) -> list[int]:
    if not text:
        return []
    return [int(x) for x in text.split(",")]


def cmd_gb(args):
    ring = parse_ring(args.ring)
    order = parse_order(args.order)
    basis = groebner_basis(_ideal(ring, args.ideal), order)
    return {"ring": str(ring), "order": args.order, "basis": [str(g) for g in basis]}, True


def cmd_hilbert(args):
    return hilbert_series(_module(args)).to_json(), True


def cmd_mult(args):
    M = _module(args)
    return {"dim": args.dim, "e": multiplicity(M, args.dim)}, True


def cmd_minprimes(args):
    ring = parse_ring(args.ring)
    dec = minimal_primes(_ideal(ring, args.ideal))
    return dec.to_json(), dec.verified


def cmd_cycle(args):
    return cycle_of(_module(args), args.dim).to_json(), True


def cmd_cut(args):
    M = _module(args)
    f = M.ring.parse(args.f)
    _, report = cut_by_regular(M, f, args.dim)
    return report.to_json(), report.ok


def cmd_product(args):
    MA = _module(args)
    ring2 = parse_ring(args.ring2)
    MB = SubquotientModule.quotient(_ideal(ring2, args.ideal2))
    _, report = product_cycle(MA, MB, args.dim, args.dim2)
    return report.to_json(), report.ok


def cmd_check_additivity(args):
    ring = parse_ring(args.ring)
    report = check_additivity(_ideal(ring, args.ideal), _ideal(ring, args.outer), args.dim)
    return report.to_json(), report.ok


def cmd_check_assoc(args):
    report = check_associativity(_module(args))
    return report.to_json(), report.ok


def cmd_brauer(args):
    p = args.p
    params = _ints(args.params)
    if args.type == "sym":
        if len(params) != 2:
            raise InputError("--type sym needs --params a,b")
        if args.method == "oracle":
            return composition_factors_explicit(params[0] + args.twist, params[1], p).to_json(), True
        chi = character_sym(params[0], params[1], p)
    elif args.type == "weight":
        if len(params) != 2:
            raise InputError("--type weight needs --params m,n")
        chi = character_sym(params[0], params[1], p)
        SerreWeightGL2(params[0], params[1], p)
    else:
        chi = type_character(args.type, params, p)
    if args.method == "oracle":
        raise InputError("the explicit oracle only handles --type sym")
    if args.twist:
        chi = chi.twist(args.twist)
    return decompose(chi, method=args.method).to_json(), True


def _descriptor(args) -> GL2ResidualDescriptor:
    return GL2ResidualDescriptor(args.p, args.case, args.m, args.n,
                                 cyclotomic_twist=not args.no_cyclotomic_twist)


def _combo(value: Any) -> FormalCycleCombo:
    if not isinstance(value, dict):
        raise InputError(f"expected a combo object, got {value!r}")
    return FormalCycleCombo(value)


def cmd_weights(args):
    D = _descriptor(args)
    out = {
        "descriptor": D.to_json(),
        "weights": [w.label for w in sorted(weight_set_gl2(D))],
        "fallback": D.is_fallback,
    }
    if args.components is None:
        return out, True
    data = _load_json(args.components)
    C = {parse_weight_label(k, D.p): _combo(v) for k, v in data.items()}
    report = component_report_gl2(D, C)
    out["report"] = report
    return out, report["conforms"]


def _weight_key(label: Any, p: int | None):
    if isinstance(label, dict):
        return SerreWeightGLn(label["p"], label["n"], tuple(label["a"]), tuple(label["a"].values()))
    if p is not None and str(label).startswith("sigma["):
        return parse_weight_label(str(label), p)
    return str(label)


def _value(v: Any):
    return _combo(v) if isinstance(v, dict) else v


def _json_value(v: Any):
    return v.to_json() if isinstance(v, FormalCycleCombo) else v


def cmd_ledger(args):
    data = _load_json(args.input)
    _require(data, ("weights", "m", "e"))
    weights = [_weight_key(w, data.get("p")) for w in data["weights"]]
    mu = ledger_solve(weights, data["m"], [_value(x) for x in data["e"]])
    return {"mu": [_json_value(x) for x in mu]}, True


def _require(data: Any, keys: Sequence[str]):
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    missing = [k for k in keys if k not in data]
    if missing:
        raise InputError(f"missing fields: {', '.join(missing)}")


def _table_key(row: dict) -> TableKey:
    t = row.get("type", {"kind": "trivial"})
    return TableKey(tuple(row["lambda"]), t["kind"], tuple(t.get("params", ())))


def cmd_bm_verify(args):
    data = _load_json(args.input)
    _require(data, ("rows", "C"))
    p = data.get("p")
    numerical = bool(data.get("numerical", False)) or args.numerical
    table, a_data = {}, {}
    for row in data["rows"]:
        _require(row, ("lambda", "value"))
        key = _table_key(row)
        if key in table:
            raise InputError(f"duplicate row {key.name}")
        table[key] = _value(row["value"])
        if "a" in row:
            a_data[key] = {_weight_key(k, p): int(v) for k, v in row["a"].items()}
        elif p is not None:
            a_data[key] = gl2_a_data(key, p).as_dict()
        else:
            raise InputError(f"row {key.name} has no reduction data and no p was given")
    C = {_weight_key(k, p): _value(v) for k, v in data["C"].items()}
    report = bm_verify(table, a_data, C, numerical=numerical)
    out = report.to_json()
    ok = report.ok
    if "descriptor" in data:
        d = data["descriptor"]
        D = GL2ResidualDescriptor(d["p"], d["case"], d["m"], d.get("n", 0),
                                  cyclotomic_twist=d.get("cyclotomic_twist", True))
        comp = component_report_gl2(D, {w: c for w, c in C.items()
                                        if isinstance(w, SerreWeightGL2)})
        out["components"] = comp
        ok = ok and comp["conforms"]
    return out, ok


COMMANDS: dict[str, Callable] = {
    "gb": cmd_gb,
    "hilbert": cmd_hilbert,
    "mult": cmd_mult,
    "minprimes": cmd_minprimes,
    "cycle": cmd_cycle,
    "cut": cmd_cut,
    "product": cmd_product,
    "check-additivity": cmd_check_additivity,
    "check-assoc": cmd_check_assoc,
    "brauer": cmd_brauer,
    "weights": cmd_weights,
    "ledger": cmd_ledger,
    "bm-verify": cmd_bm_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    parser = _Parser(prog="bmc", description="Exact cycle and Serre-weight computations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def ring_cmd(name, outer=True, dim=False, dim_required=True):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--ring", required=True, help='e.g. "F5[x,y,z]"')
        sp.add_argument("--ideal", required=True, help='comma separated generators, "0" for zero')
        if outer:
            sp.add_argument("--outer", help="outer ideal J of the module J/I (default: unit)")
        if dim:
            sp.add_argument("--dim", type=int, required=dim_required)
        return sp

    sp = ring_cmd("gb", outer=False)
    sp.add_argument("--order", default="grevlex", help="lex, grevlex or elim:k")
    ring_cmd("hilbert")
    ring_cmd("mult", dim=True)
    ring_cmd("minprimes", outer=False)
    ring_cmd("cycle", dim=True)
    sp = ring_cmd("cut", dim=True)
    sp.add_argument("--f", required=True, help="homogeneous element to cut by")
    sp = ring_cmd("product", outer=False, dim=True)
    sp.add_argument("--ring2", required=True)
    sp.add_argument("--ideal2", required=True)
    sp.add_argument("--dim2", type=int, required=True)
    sp = ring_cmd("check-additivity", dim=True)
    ring_cmd("check-assoc")

    sp = sub.add_parser("brauer", parents=[common])
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--type", required=True,
                    choices=("trivial", "steinberg", "ps", "sym", "weight"))
    sp.add_argument("--params", help="comma separated integers")
    sp.add_argument("--twist", type=int, default=0, help="extra det power")
    sp.add_argument("--method", choices=("modular", "exact", "oracle"), default="modular")

    sp = sub.add_parser("weights", parents=[common])
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--case", required=True, choices=(
        "irreducible", "nonsplit_peu_ramifiee", "nonsplit_tres_ramifiee", "nonsplit_generic",
        "split", "split_scalar_ss"))
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--no-cyclotomic-twist", action="store_true")
    sp.add_argument("--components", help="JSON file or inline object: weight label -> combo")

    sp = sub.add_parser("ledger", parents=[common])
    sp.add_argument("--input", required=True, help="JSON file or inline object")

    sp = sub.add_parser("bm-verify", parents=[common])
    sp.add_argument("--input", required=True, help="JSON file or inline object")
    sp.add_argument("--numerical", action="store_true")

    sp = sub.add_parser("run", parents=[common])
    sp.add_argument("job", help="job JSON file")
    return parser


_OPTION_TYPES = {
    "ring": "string", "ideal": "string", "outer": "string", "order": "string",
    "dim": "integer", "f": "string", "ring2": "string", "ideal2": "string", "dim2": "integer",
    "p": "integer", "type": "string", "params": "string", "twist": "integer",
    "method": "string", "case": "string", "m": "integer", "n": "integer",
    "no_cyclotomic_twist": "boolean", "components": ["string", "object"],
    "numerical": "boolean",
}

JOB_SCHEMA = {
    "type": "object",
    "properties": {
        "command": {"enum": sorted(COMMANDS)},
        "input": {"type": ["string", "object"]},
        "options": {
            "type": "object",
            "properties": {k: {"type": v} for k, v in _OPTION_TYPES.items()},
            "additionalProperties": False,
        },
    },
    "required": ["command"],
    "additionalProperties": False,
}


def _job_argv(job: dict) -> list[str]:
    jsonschema.validate(job, JOB_SCHEMA)
    argv = [job["command"]]
    for key, value in job.get("options", {}).items():
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif value is False:
            continue
        elif isinstance(value, dict):
            argv += [flag, json.dumps(value)]
        else:
            argv += [flag, str(value)]
    if "input" in job:
        value = job["input"]
        argv += ["--input", value if isinstance(value, str) else json.dumps(value)]
    return argv


def _text(value: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(value, list):
        return "\n".join(f"{pad}- {json.dumps(v, sort_keys=True)}" for v in value)
    return pad + json.dumps(value)


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False)


def execute(argv: Sequence[str]) -> tuple[int, Any, str]:
    """Run one command; returns (exit code, payload, output format)."""
    fmt = "text" if "--format" in argv and "text" in argv else "json"
    try:
        args = build_parser().parse_args(list(argv))
        fmt = args.format
        if args.command == "run":
            job = _load_json(args.job)
            return execute(_job_argv(job) + ["--format", fmt])
        payload, ok = COMMANDS[args.command](args)
        return (EXIT_OK if ok else EXIT_FAILED), payload, fmt
    except ResourceLimit as exc:
        return EXIT_LIMIT, _error(exc.kind, exc), fmt
    except BMCError as exc:
        return EXIT_INPUT, _error(exc.kind, exc), fmt
    except InputError as exc:
        return EXIT_INPUT, _error(exc.kind, exc), fmt
    except jsonschema.ValidationError as exc:
        return EXIT_INPUT, _error("SchemaError", exc.message), fmt
    except json.JSONDecodeError as exc:
        return EXIT_INPUT, _error("JSONError", exc), fmt
    except OSError as exc:
        return EXIT_INPUT, _error("IOError", exc), fmt
    except (ValueError, TypeError, KeyError) as exc:
        return EXIT_INPUT, _error(type(exc).__name__, exc), fmt


def _error(kind: str, detail: Any) -> dict:
    return {"error": {"kind": kind, "detail": str(detail)}}


def main(argv: Sequence[str] | None = None) -> int:
    code, payload, fmt = execute(sys.argv[1:] if argv is None else argv)
    print(_text(payload) if fmt == "text" else dumps(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every command reads self-contained JSON documents and writes one JSON
report (sorted keys, rationals as "n/d").  Exit status: 0 success, 1 a
validation or schema error, 2 a coefficient field that lacks a needed root.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .admissibility import check_wa, submodule_lattice, t_hodge, t_newton
from .descent import normalize_module, validate_module
from .document import dump_module, load_module, load_rank_one
from .errors import PhimodError, SchemaError, ValidationError
from .exactfield import FieldSpec, element_from_json, fstr
from .filtration import rank_one_iso, rank_one_wa, _rank_one_failures
from .isoclass import FamilyParams, decide_isomorphic, enumerate_family, iso_fingerprint
from .oracle import brute_isomorphic, brute_wa


class OracleDisagreement(ValidationError):
    pass


def _read(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def load_family_params(doc) -> FamilyParams:
    if not isinstance(doc, dict):
        raise SchemaError("family parameters: expected an object")
    for key in ("field", "e", "f", "pi", "weights"):
        if key not in doc:
            raise SchemaError(f"family parameters: missing key {key!r}")
    spec = FieldSpec.from_json(doc["field"])
    e, f = doc["e"], doc["f"]
    if not isinstance(e, int) or not isinstance(f, int) or e < 1 or f < 1:
        raise SchemaError("family parameters: e and f must be positive integers")
    weights = doc["weights"]
    if not isinstance(weights, list) or not all(isinstance(k, int) for k in weights):
        raise SchemaError("family parameters: weights must be a list of integers")
    pi = element_from_json(spec, doc["pi"])
    members = tuple(
        (tuple(m["lambda"]), tuple(m["mu"])) for m in doc.get("members", [])
    )
    seed = doc.get("seed", 0)
    if "eps" in doc:
        e0, e1 = (element_from_json(spec, x) for x in doc["eps"])
        return FamilyParams.from_roots(spec, e, f, e0, e1, pi, weights, members=members, seed=seed)
    if "alpha" not in doc:
        raise SchemaError("family parameters: give alpha or eps")
    sq = doc.get("sqrt_disc")
    return FamilyParams(
        spec, e, f, element_from_json(spec, doc["alpha"]), pi, tuple(weights),
        None if sq is None else element_from_json(spec, sq), members, seed,
    )


# ---------------------------------------------------------------------------
# commands


def cmd_normalize(args):
    D = load_module(_read(args.file))
    validate_module(D)
    nm = normalize_module(D)
    out = dump_module(nm.module)
    out["normalization"] = {"basechange": nm.basechange.to_json(), "form": nm.form.to_json()}
    return out


def cmd_check(args):
    D = load_module(_read(args.file))
    validate_module(D)
    return {"valid": True}


def cmd_classify(args):
    D = load_module(_read(args.file))
    validate_module(D)
    nm = normalize_module(D)
    rep = check_wa(nm.module)
    out = rep.to_json()
    if args.oracle:
        wa, cls, _ = brute_wa(nm.module)
        agree = wa == rep.wa and cls == rep.reducibility
        out["oracle"] = {"wa": wa, "reducibility": cls, "agree": agree}
        if not agree:
            raise OracleDisagreement("brute-force lattice evaluation disagrees with check_wa")
    return out


def cmd_isomorphic(args):
    D1 = load_module(_read(args.file1))
    D2 = load_module(_read(args.file2))
    validate_module(D1)
    validate_module(D2)
    v = decide_isomorphic(D1, D2)
    out = v.to_json()
    if args.oracle:
        ok, _ = brute_isomorphic(D1, D2)
        out["oracle"] = {"isomorphic": ok, "agree": ok == v.isomorphic}
        if ok != v.isomorphic:
            raise OracleDisagreement("full-ansatz isomorphism search disagrees")
    return out


def cmd_enumerate(args):
    params = load_family_params(_read(args.params))
    if args.count < 1:
        raise SchemaError("--count must be positive")
    return enumerate_family(params, args.count).to_json()


def cmd_rank1(args):
    if args.mode == "wa":
        if len(args.files) != 1:
            raise SchemaError("rank1 wa takes one file")
        R = load_rank_one(_read(args.files[0]))
        return {"wa": rank_one_wa(R), "failures": _rank_one_failures(R)}
    if len(args.files) != 2:
        raise SchemaError("rank1 iso takes two files")
    R1, R2 = (load_rank_one(_read(p)) for p in args.files)
    return {"isomorphic": rank_one_iso(R1, R2)}


def cmd_invariants(args):
    D = load_module(_read(args.file))
    validate_module(D)
    P = normalize_module(D).module
    F = P.filtration
    subs = [
        {"submodule": s.to_json(), "tN": fstr(t_newton(P, s)), "tH": fstr(t_hodge(F, s))}
        for s in submodule_lattice(P)
    ]
    return {"submodules": subs, "fingerprint": iso_fingerprint(P).to_json()}


COMMANDS = {
    "normalize": cmd_normalize,
    "check": cmd_check,
    "classify": cmd_classify,
    "isomorphic": cmd_isomorphic,
    "enumerate": cmd_enumerate,
    "rank1": cmd_rank1,
    "invariants": cmd_invariants,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="phimod", description="Rank-two filtered (phi, N, L/K, E)-modules.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("normalize", "check", "classify", "invariants"):
        sub.add_parser(name, parents=[common]).add_argument("file")
    p = sub.add_parser("isomorphic", parents=[common])
    p.add_argument("file1")
    p.add_argument("file2")
    p = sub.add_parser("enumerate", parents=[common])
    p.add_argument("params")
    p.add_argument("--count", type=int, default=3)
    p = sub.add_parser("rank1", parents=[common])
    p.add_argument("mode", choices=("wa", "iso"))
    p.add_argument("files", nargs="+")
    return ap


def _table(obj, prefix="") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.extend(_table(v, f"{prefix}{k}."))
            else:
                lines.append(f"{prefix}{k}: {json.dumps(v, sort_keys=True)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            lines.extend(_table(v, f"{prefix}{i}."))
    else:
        lines.append(f"{prefix.rstrip('.')}: {json.dumps(obj)}")
    return lines


def render(obj, fmt: str) -> str:
    if fmt == "table":
        return "\n".join(_table(obj)) + "\n"
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, code = COMMANDS[args.command](args), 0
    except PhimodError as exc:
        payload, code = exc.to_json(), exc.exit_code
    text = render(payload, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

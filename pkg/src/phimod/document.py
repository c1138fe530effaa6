"""Self-contained JSON documents for filtered modules and rank-one modules.

A module document looks like::

    {"field": {"p": 5, "min_poly": [0, 1]},
     "extension": {"p": 5, "f": 1, "e": 1, "nu": 1, ...group data...},
     "module": {"frob": {"a": [...], "b": [...], "c": [...], "d": [...]},
                "monodromy": {...},                       # optional
                "action": {"variant": "ScalarChar", "chi": [...]}
                          | {"matrices": {name: {...}}},  # optional
                "weights": [...], "offsets": [...],       # offsets optional
                "x": [...], "y": [...]                    # or "seeds"
                "roots": [...]}}                          # optional
"""
from __future__ import annotations

from .descent import (
    DIAG_CHARS,
    HOMO,
    SCALAR_CHAR,
    Character,
    FiltrationSeed,
    GaloisActionData,
    build_stable_filtration,
    extract_action,
    trivial_action,
    validate_action,
)
from .errors import SchemaError, ValidationError
from .exactfield import FieldSpec, element_from_json
from .extension import extension_from_json, require_valid
from .filtration import FilteredModule, RankOneModule, weight_profile
from .productring import Mat2F, VecM, vec_from_json


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    return obj[key]


def _elements(spec, obj, n, where):
    if not isinstance(obj, list) or len(obj) != n:
        raise SchemaError(f"{where}: expected {n} field elements")
    return tuple(element_from_json(spec, v) for v in obj)


def _action_from_json(spec, grp, obj):
    if obj is None:
        return trivial_action(spec, grp)
    if not isinstance(obj, dict):
        raise SchemaError("action: expected an object")
    G = grp.order
    if "matrices" in obj:
        return None
    variant = _require(obj, "variant", "action")
    if variant == SCALAR_CHAR:
        return GaloisActionData(SCALAR_CHAR, Character(_elements(spec, _require(obj, "chi", "action"), G, "chi")))
    if variant == DIAG_CHARS:
        return GaloisActionData(
            DIAG_CHARS,
            Character(_elements(spec, _require(obj, "chi", "action"), G, "chi")),
            Character(_elements(spec, _require(obj, "psi", "action"), G, "psi")),
        )
    if variant == HOMO:
        lam = _require(obj, "lam", "action")
        if not isinstance(lam, list) or len(lam) != G:
            raise SchemaError("action: lam needs one 2x2 matrix per group element")
        out = []
        for M in lam:
            if not isinstance(M, list) or len(M) != 2 or any(not isinstance(r, list) or len(r) != 2 for r in M):
                raise SchemaError("action: each lam entry is [[a, b], [c, d]]")
            out.append(tuple(tuple(element_from_json(spec, v) for v in r) for r in M))
        return GaloisActionData(HOMO, lam=tuple(out))
    raise SchemaError(f"action: unknown variant {variant!r}")


def load_module(doc) -> FilteredModule:
    """Parse and structurally validate a module document."""
    spec = FieldSpec.from_json(_require(doc, "field", "document"))
    ext, grp = extension_from_json(_require(doc, "extension", "document"))
    if spec.prime != ext.p:
        raise SchemaError("field prime and extension prime differ")
    require_valid(ext, grp)
    mod = _require(doc, "module", "document")
    f, m = ext.f, ext.m
    frob = Mat2F.from_json(spec, _require(mod, "frob", "module"), f)
    mono = mod.get("monodromy")
    N = Mat2F.zero(spec, f) if mono is None else Mat2F.from_json(spec, mono, f)
    weights = weight_profile(_require(mod, "weights", "module"), m)
    offsets = mod.get("offsets")
    if offsets is not None:
        if not isinstance(offsets, list) or len(offsets) != m or not all(isinstance(s, int) for s in offsets):
            raise SchemaError(f"module: offsets must be {m} integers")
        offsets = tuple(offsets)
    roots = tuple(element_from_json(spec, r) for r in mod.get("roots", []))
    act_obj = mod.get("action")
    act = _action_from_json(spec, grp, act_obj)
    if act is None:
        mats = _require(act_obj, "matrices", "action")
        if not isinstance(mats, dict) or set(mats) != set(grp.elements):
            raise SchemaError("action: matrices must be keyed by every group element")
        galois = tuple(Mat2F.from_json(spec, mats[nm], f) for nm in grp.elements)
    else:
        from .phimodule import PhiModule

        rep = validate_action(PhiModule(spec, ext, frob, N), grp, act)
        if not rep.ok:
            raise ValidationError(f"action: {rep.first_failure}")
        galois = act.matrices(spec, f)
    if "seeds" in mod:
        if act is None:
            raise SchemaError("module: seeds need an action given by variant")
        seeds = []
        for s in mod["seeds"]:
            if not isinstance(s, list) or len(s) != 3 or not isinstance(s[0], int):
                raise SchemaError("module: each seed is [representative, x, y]")
            seeds.append((s[0], element_from_json(spec, s[1]), element_from_json(spec, s[2])))
        x, y = build_stable_filtration(grp, act, weights, FiltrationSeed(tuple(seeds)))
    else:
        x = vec_from_json(VecM, spec, _require(mod, "x", "module"), m)
        y = vec_from_json(VecM, spec, _require(mod, "y", "module"), m)
    return FilteredModule(spec, ext, grp, frob, N, galois, weights, x, y, offsets, roots)


def dump_module(D: FilteredModule) -> dict:
    """Inverse of :func:`load_module` (Galois data as explicit matrices
    unless it is constant)."""
    mod = {
        "frob": D.frob.to_json(),
        "weights": D.weights.to_json(),
        "x": D.x.to_json(),
        "y": D.y.to_json(),
    }
    if not D.monodromy.is_zero():
        mod["monodromy"] = D.monodromy.to_json()
    if any(D.offsets):
        mod["offsets"] = list(D.offsets)
    if D.roots:
        mod["roots"] = [r.to_json() for r in D.roots]
    act = extract_action(D)
    names = D.group.elements
    if act is None:
        mod["action"] = {"matrices": {names[g]: M.to_json() for g, M in enumerate(D.galois)}}
    elif act.variant == SCALAR_CHAR:
        mod["action"] = {"variant": SCALAR_CHAR, "chi": [c.to_json() for c in act.chi.values]}
    elif act.variant == DIAG_CHARS:
        mod["action"] = {
            "variant": DIAG_CHARS,
            "chi": [c.to_json() for c in act.chi.values],
            "psi": [c.to_json() for c in act.psi.values],
        }
    else:
        mod["action"] = {
            "variant": HOMO,
            "lam": [[[v.to_json() for v in r] for r in M] for M in act.lam],
        }
    return {"field": D.field.to_json(), "extension": D.group.to_json(D.ext), "module": mod}


def load_rank_one(doc) -> RankOneModule:
    """{"field", "extension", "rank_one": {"u", "pi_power", "weights", "chi"}}."""
    spec = FieldSpec.from_json(_require(doc, "field", "document"))
    ext, grp = extension_from_json(_require(doc, "extension", "document"))
    require_valid(ext, grp)
    r = _require(doc, "rank_one", "document")
    weights = _require(r, "weights", "rank_one")
    if not isinstance(weights, list) or len(weights) != ext.m or not all(isinstance(k, int) for k in weights):
        raise SchemaError(f"rank_one: weights must be {ext.m} integers")
    chi = r.get("chi")
    chi = tuple(spec.one for _ in range(grp.order)) if chi is None else _elements(spec, chi, grp.order, "chi")
    return RankOneModule(
        spec,
        ext,
        grp,
        element_from_json(spec, _require(r, "u", "rank_one")),
        element_from_json(spec, _require(r, "pi_power", "rank_one")),
        tuple(weights),
        chi,
    )


def dump_rank_one(R: RankOneModule) -> dict:
    return {
        "field": R.field.to_json(),
        "extension": R.group.to_json(R.ext),
        "rank_one": {
            "u": R.u.to_json(),
            "pi_power": R.varpi.to_json(),
            "weights": list(R.weights),
            "chi": [c.to_json() for c in R.chi],
        },
    }

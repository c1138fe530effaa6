import random

import pytest

from helpers import s3_module, s3_standard_rep
from phimod import sampling as S
from phimod.descent import (
    DIAG_CHARS,
    SCALAR_CHAR,
    Character,
    GaloisActionData,
    build_stable_filtration,
    check_g_stable,
    is_presented,
    normalize_module,
    trivial_action,
    validate_action,
    validate_module,
)
from phimod.errors import BadSeed, OrbitMismatch, UnstableFiltration
from phimod.exactfield import FieldSpec
from phimod.extension import ExtensionSpec, trivial_group, unramified_cyclic
from phimod.filtration import FilteredModule, weight_profile
from phimod.phimodule import PhiModule
from phimod.productring import Mat2F, VecM

E = FieldSpec.rationals(5)


def chars(*vals):
    return Character(tuple(E(v) for v in vals))


def test_validate_action_examples():
    ext, grp = unramified_cyclic(5, 2)
    D = PhiModule(E, ext, Mat2F.const(E, 2, 5, 0, 0, 2))
    assert validate_action(D, grp, GaloisActionData(DIAG_CHARS, chars(1, 1), chars(1, -1))).ok
    assert validate_action(D, grp, trivial_action(E, grp)).ok
    rep = validate_action(D, grp, GaloisActionData(DIAG_CHARS, chars(1, 1), chars(1, 2)))
    assert not rep.ok and "multiplicative" in rep.first_failure
    DN = PhiModule(E, ext, Mat2F.const(E, 2, 5, 0, 0, 1), Mat2F.const(E, 2, 0, 0, 1, 0))
    rep = validate_action(DN, grp, GaloisActionData(DIAG_CHARS, chars(1, 1), chars(1, -1)))
    assert not rep.ok


def test_trivial_group_keeps_seeds():
    ext = ExtensionSpec(5, 1, 1, 1)
    grp = trivial_group(ext)
    act = trivial_action(E, grp)
    x, y = build_stable_filtration(grp, act, weight_profile([3]), [(0, E(2), E(7))])
    assert (x[0], y[0]) == (E(2), E(7))


def test_seed_errors():
    ext, grp = unramified_cyclic(5, 2)
    act = GaloisActionData(SCALAR_CHAR, chars(1, 1))
    w = weight_profile([2, 2])
    with pytest.raises(BadSeed):
        build_stable_filtration(grp, act, w, [(0, E(0), E(0))])
    with pytest.raises(BadSeed):
        build_stable_filtration(grp, act, w, [])
    with pytest.raises(OrbitMismatch):
        build_stable_filtration(grp, act, weight_profile([1, 2]), [(0, E(1), E(1))])


def test_single_zero_coordinate_is_unstable():
    ext, grp = unramified_cyclic(5, 3)
    act = GaloisActionData(DIAG_CHARS, chars(1, 1, 1), chars(1, 1, 1))
    frob = Mat2F.const(E, 3, 5, 0, 0, 1)
    w = weight_profile([1, 1, 1])
    x = VecM(E, [E(0), E(1), E(1)])
    y = VecM(E, [E(1), E(1), E(1)])
    D = FilteredModule(E, ext, grp, frob, Mat2F.zero(E, 3), act.matrices(E, 3), w, x, y)
    assert not check_g_stable(D)
    with pytest.raises(UnstableFiltration):
        validate_module(D)
    # with all weights zero there is nothing to preserve
    D0 = D.with_(weights=weight_profile([0, 0, 0]))
    assert check_g_stable(D0)


def test_built_filtrations_are_stable_and_survive_normalization():
    rng = random.Random(11)
    for _ in range(20):
        D = S.cyclic_module(rng, E, 5, 2, rng.choice(["SplitDiag", "Scalar", "NonSemisimple"]), SCALAR_CHAR, [1, -1])
        validate_module(D)
        C, _ = S.conjugate_module(rng, D)
        from phimod.phimodule import presentation

        _, a, d = presentation(D.frob)
        C = C.with_(roots=(a, d))
        validate_module(C)
        N = normalize_module(C).module
        assert is_presented(N)
        validate_module(N)


def test_s3_homomorphism_action():
    E5 = FieldSpec.rationals(5)
    ext, grp, act = s3_standard_rep(E5)
    frob = Mat2F.const(E5, 2, 5, 0, 0, 5)
    assert validate_action(PhiModule(E5, ext, frob), grp, act).ok
    D = s3_module(E5, 5, 1, (1, 2))
    validate_module(D)

import random

import pytest

from phimod import sampling as S
from phimod.errors import FieldTooSmall
from phimod.exactfield import FieldSpec
from phimod.extension import ExtensionSpec
from phimod.phimodule import (
    F_SCALAR,
    F_SEMISIMPLE_NON_SCALAR,
    NON_F_SEMISIMPLE,
    NONSEMISIMPLE,
    SCALAR,
    SPLIT,
    PhiModule,
    canonical_matrix,
    canonicalize,
    change_basis,
    f_class,
    monodromy_candidates,
    norm_block,
    normalize_monodromy,
)
from phimod.productring import Mat2F, VecF, mat_coord_inv, mat_coord_mul

E = FieldSpec.rationals(5)


def test_change_basis_identity_and_norm_block():
    rng = random.Random(4)
    for f in (1, 2, 3):
        M = S.invertible_matrix(rng, E, f)
        P = S.invertible_matrix(rng, E, f)
        assert change_basis(M, Mat2F.identity(E, f)) == M
        lhs = norm_block(change_basis(M, P))
        P0 = P.at(0)
        assert lhs == mat_coord_mul(mat_coord_mul(P0, norm_block(M)), mat_coord_inv(P0))


def test_f_class_examples():
    assert f_class(Mat2F.const(E, 1, 2, 0, 0, 3)) == F_SEMISIMPLE_NON_SCALAR
    assert f_class(Mat2F.const(E, 2, 7, 0, 1, 7)) == NON_F_SEMISIMPLE
    a = VecF(E, [E(7), E(1)])
    assert f_class(Mat2F.diag(a, a)) == F_SCALAR


def test_canonicalize_companion_matrix():
    # x^2 - 7x + 10 = (x - 2)(x - 5): eigenvalues are rational
    frob = Mat2F.const(E, 1, 0, 1, -10, 7)
    form = canonicalize(frob)
    assert form.tag == SPLIT
    assert {form.alpha, form.delta} == {E(2), E(5)}
    assert change_basis(frob, form.basechange) == form.matrix


def test_canonicalize_scalar_claim():
    al = E(3)
    a = VecF(E, [al * al, E(1)])
    form = canonicalize(Mat2F.diag(a, a))
    assert form.tag == SCALAR
    assert form.alpha ** 2 == 9
    assert form.matrix == canonical_matrix(SCALAR, form.alpha, form.alpha, E, 2)


def test_canonicalize_round_trip_random():
    rng = random.Random(5)
    for f in (1, 2, 3):
        for tag in (SPLIT, SCALAR, NONSEMISIMPLE):
            F = S.canonical_frobenius(rng, E, f, tag)
            P = S.invertible_matrix(rng, E, f)
            M = change_basis(F, P)
            from phimod.phimodule import presentation

            _, a, d = presentation(F)
            form = canonicalize(M, roots=(a, d))
            assert form.tag == tag
            assert change_basis(M, form.basechange) == form.matrix


def test_irrational_eigenvalues_raise_field_too_small():
    frob = Mat2F.const(E, 1, 0, 1, -5, 1)  # x^2 - x + 5, disc -19
    with pytest.raises(FieldTooSmall) as exc:
        canonicalize(frob)
    assert "discriminant" in exc.value.hint


def test_monodromy_candidates_and_normalization():
    ext = ExtensionSpec(5, 1, 1, 1)
    form = canonicalize(Mat2F.const(E, 1, 5, 0, 0, 1))
    fam = monodromy_candidates(form)
    assert fam.kind == "lower"
    assert monodromy_candidates(canonicalize(Mat2F.const(E, 1, 2, 0, 0, 3))).kind == "zero"
    D = PhiModule(E, ext, Mat2F.const(E, 1, 5, 0, 0, 1), Mat2F.const(E, 1, 0, 0, 3, 0))
    D.validate()
    out, P = normalize_monodromy(D)
    assert out.monodromy == Mat2F.const(E, 1, 0, 0, 1, 0)
    assert out.frob == Mat2F.const(E, 1, 5, 0, 0, 1)
    # upper-triangular N on diag(1, p) is swapped into the lower form
    D = PhiModule(E, ext, Mat2F.const(E, 1, 1, 0, 0, 5), Mat2F.const(E, 1, 0, 2, 0, 0))
    D.validate()
    out, _ = normalize_monodromy(D)
    assert out.frob == Mat2F.const(E, 1, 5, 0, 0, 1)
    assert out.monodromy == Mat2F.const(E, 1, 0, 0, 1, 0)

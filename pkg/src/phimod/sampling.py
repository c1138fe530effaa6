"""Seeded random instances for property tests and batch experiments."""
from __future__ import annotations

import random
from fractions import Fraction

from .descent import (
    DIAG_CHARS,
    SCALAR_CHAR,
    Character,
    FiltrationSeed,
    GaloisActionData,
    build_stable_filtration,
)
from .exactfield import FieldElement, FieldSpec
from .extension import ExtensionSpec, trivial_group, unramified_cyclic
from .filtration import FilteredModule, transform_module, weight_profile
from .phimodule import NONSEMISIMPLE, SCALAR, SPLIT, canonical_matrix
from .productring import Mat2F, VecM

CLASSES = (SPLIT, SCALAR, NONSEMISIMPLE)


def field(p: int, quadratic: bool) -> FieldSpec:
    """Q, or Q(sqrt p) (Eisenstein, so p is totally ramified)."""
    return FieldSpec.quadratic(p, p) if quadratic else FieldSpec.rationals(p)


def small_rational(rng: random.Random, bound: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def element(rng: random.Random, E: FieldSpec, bound: int = 4) -> FieldElement:
    return E.element([small_rational(rng, bound) for _ in range(E.degree)])


def nonzero(rng, E, bound: int = 4) -> FieldElement:
    while True:
        x = element(rng, E, bound)
        if not x.is_zero():
            return x


def unit(rng, E, bound: int = 4) -> FieldElement:
    """Random p-adic unit of E."""
    p = E.prime
    while True:
        num = rng.randint(1, 3 * bound)
        den = rng.randint(1, bound)
        if num % p and den % p:
            return E(Fraction(num, den) * rng.choice((1, -1)))


def with_valuation(rng, E, v: Fraction) -> FieldElement:
    """A unit times p^v (v in (1/2)Z needs the quadratic field)."""
    v = Fraction(v)
    if v.denominator == 1:
        return unit(rng, E) * E(E.prime) ** int(v)
    if v.denominator == 2 and E.degree == 2:
        return unit(rng, E) * E.gen ** int(2 * v)
    raise ValueError(f"valuation {v} not available in this field")


def invertible_matrix(rng, E: FieldSpec, f: int) -> Mat2F:
    while True:
        M = Mat2F.from_coords(
            E, [((element(rng, E), element(rng, E)), (element(rng, E), element(rng, E))) for _ in range(f)]
        )
        if M.is_invertible():
            return M


def canonical_frobenius(rng, E: FieldSpec, f: int, tag: str, alpha=None, delta=None) -> Mat2F:
    alpha = nonzero(rng, E) if alpha is None else alpha
    if tag == SPLIT:
        while delta is None or delta ** f == alpha ** f:
            delta = nonzero(rng, E)
    return canonical_matrix(tag, alpha, alpha if tag != SPLIT else delta, E, f)


def filtration_vectors(rng, E: FieldSpec, m: int, zero_bias: float = 0.3):
    """Random normalized (x, y): y_i in {0, 1}, x_i = 1 where y_i = 0."""
    xs, ys = [], []
    for _ in range(m):
        r = rng.random()
        if r < zero_bias / 2:
            xs.append(E.one)
            ys.append(E.zero)
        elif r < zero_bias:
            xs.append(E.zero)
            ys.append(E.one)
        else:
            xs.append(nonzero(rng, E, 2))
            ys.append(E.one)
    return VecM._raw(E, xs), VecM._raw(E, ys)


def module(
    rng,
    E: FieldSpec,
    ext: ExtensionSpec,
    frob: Mat2F,
    weights,
    x=None,
    y=None,
    monodromy: Mat2F | None = None,
    roots=(),
    offsets=None,
) -> FilteredModule:
    """Module over the trivial group."""
    f, m = ext.f, ext.m
    if x is None:
        x, y = filtration_vectors(rng, E, m)
    grp = trivial_group(ext)
    return FilteredModule(
        E, ext, grp, frob,
        Mat2F.zero(E, f) if monodromy is None else monodromy,
        (Mat2F.identity(E, f),),
        weight_profile(weights, m), x, y, offsets, tuple(roots),
    )


def weights(rng, m: int, top: int = 4):
    return [rng.randint(0, top) for _ in range(m)]


def presented_module(rng, E: FieldSpec, ext: ExtensionSpec, kind: str, aim_wa: bool = True):
    """Presented module of the given kind ('SplitDiag', 'Scalar',
    'NonSemisimple' or 'Monodromy'); valuations are steered towards
    t_N = t_H when ``aim_wa``."""
    f, e, m = ext.f, ext.e, ext.m
    k = weights(rng, m)
    total = sum(k)
    ef = e * f
    step = Fraction(1, 2) if E.degree == 2 else Fraction(1)
    p = E.prime

    if aim_wa:
        # nudge the weights so that t_H lies in the attainable value group
        unit_ = {"Monodromy": 2 * ef * step, SPLIT: ef * step}.get(kind, 2 * ef * step)
        shift = ef if kind == "Monodromy" else 0
        while (total - shift) % unit_ or total < shift:
            k[rng.randrange(m)] += 1
            total += 1

    def val(target):
        """Valuation in the value group, close to target."""
        return Fraction(round(target / step)) * step

    if kind == "Monodromy":
        # 2 e f v(delta) + e f = sum k
        vd = val(Fraction(total - ef, 2 * ef)) if aim_wa else val(Fraction(rng.randint(-1, 3)))
        delta = with_valuation(rng, E, vd)
        alpha = delta * p
        frob = Mat2F.const(E, f, alpha, 0, 0, delta)
        N = Mat2F.const(E, f, 0, 0, 1, 0)
        return module(rng, E, ext, frob, k, monodromy=N)
    if kind == SPLIT:
        if aim_wa and rng.random() < 0.8:
            s = Fraction(total, ef)
            va = val(Fraction(rng.randint(0, max(total, 0)), ef))
            vd = val(s - va)
        else:
            va, vd = val(Fraction(rng.randint(0, 3))), val(Fraction(rng.randint(0, 3)))
        alpha = with_valuation(rng, E, va)
        delta = with_valuation(rng, E, vd)
        while delta ** f == alpha ** f:
            delta = with_valuation(rng, E, vd)
        return module(rng, E, ext, canonical_matrix(SPLIT, alpha, delta, E, f), k)
    va = val(Fraction(total, 2 * ef)) if aim_wa else val(Fraction(rng.randint(0, 3)))
    alpha = with_valuation(rng, E, va)
    return module(rng, E, ext, canonical_matrix(kind, alpha, alpha, E, f), k)


def conjugate_module(rng, D: FilteredModule) -> tuple[FilteredModule, Mat2F]:
    """D expressed in a random basis, with filtration lines rescaled."""
    P = invertible_matrix(rng, D.field, D.f)
    out = transform_module(D, P)
    t = VecM._raw(D.field, [nonzero(rng, D.field, 3) for _ in range(D.m)])
    return out.with_(x=out.x * t, y=out.y * t), P


def cyclic_module(rng, E: FieldSpec, p: int, f: int, tag: str, variant: str, chi, psi=None):
    """Unramified cyclic L/Q_p of degree f with a character action and a
    stable filtration built from one random seed."""
    ext, grp = unramified_cyclic(p, f)
    frob = canonical_frobenius(rng, E, f, tag)
    chi = [E(c) for c in chi]
    psi = None if psi is None else [E(c) for c in psi]
    if variant == SCALAR_CHAR:
        act = GaloisActionData(SCALAR_CHAR, Character(tuple(chi)))
    else:
        act = GaloisActionData(DIAG_CHARS, Character(tuple(chi)), Character(tuple(psi)))
    kk = rng.randint(0, 4)
    w = weight_profile([kk] * ext.m)
    r = rng.random()
    seed = (E.one, E.zero) if r < 0.2 else (E.zero, E.one) if r < 0.4 else (nonzero(rng, E, 3), E.one)
    x, y = build_stable_filtration(grp, act, w, FiltrationSeed(((0, seed[0], seed[1]),)))
    return FilteredModule(E, ext, grp, frob, Mat2F.zero(E, f), act.matrices(E, f), w, x, y)

"""Galois descent data: action variants, their validation, G-stable
filtrations and normalization of a whole filtered module.

Galois matrices follow the cocycle rule [g1 g2] = [g1] g1([g2]) and commute
with Frobenius in the form [phi] phi([g]) = [g] g([phi]).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .errors import BadSeed, OrbitMismatch, UnstableFiltration, ValidationError
from .exactfield import FieldElement, FieldSpec
from .extension import (
    GaloisGroupSpec,
    ValidationReport,
    act_mat,
    act_set,
    orbits,
    validate_group,
)
from .filtration import (
    FilteredModule,
    FiltrationData,
    WeightData,
    normalize_filtration,
    transform_module,
)
from .phimodule import (
    NONSEMISIMPLE,
    SCALAR,
    SPLIT,
    CanonicalForm,
    canonicalize,
    normalize_monodromy,
    presentation,
)
from .productring import Mat2F, VecM

DIAG_CHARS = "DiagChars"
SCALAR_CHAR = "ScalarChar"
HOMO = "Homo"


@dataclass(frozen=True)
class Character:
    values: tuple[FieldElement, ...]

    def __call__(self, g: int) -> FieldElement:
        return self.values[g]

    def is_multiplicative(self, grp: GaloisGroupSpec) -> bool:
        if self.values[0] != 1:
            return False
        return all(
            self.values[grp.mul(g, h)] == self.values[g] * self.values[h]
            for g in range(grp.order)
            for h in range(grp.order)
        )


@dataclass(frozen=True)
class GaloisActionData:
    """``lam`` holds, per group element, a 2x2 matrix ((a, b), (c, d)) over E."""

    variant: str
    chi: Character | None = None
    psi: Character | None = None
    lam: tuple | None = None

    def matrices(self, spec: FieldSpec, f: int) -> tuple[Mat2F, ...]:
        if self.variant == DIAG_CHARS:
            return tuple(
                Mat2F.const(spec, f, c, 0, 0, s) for c, s in zip(self.chi.values, self.psi.values)
            )
        if self.variant == SCALAR_CHAR:
            return tuple(Mat2F.const(spec, f, c, 0, 0, c) for c in self.chi.values)
        if self.variant == HOMO:
            return tuple(Mat2F.const(spec, f, a, b, c, d) for (a, b), (c, d) in self.lam)
        raise ValidationError(f"unknown action variant {self.variant!r}")

    def matrix_at(self, g: int):
        """lambda(g) as a plain 2x2 matrix."""
        if self.variant == DIAG_CHARS:
            z = self.chi.values[g].spec.zero
            return ((self.chi.values[g], z), (z, self.psi.values[g]))
        if self.variant == SCALAR_CHAR:
            c = self.chi.values[g]
            return ((c, c.spec.zero), (c.spec.zero, c))
        return self.lam[g]

    def order(self) -> int:
        if self.lam is not None:
            return len(self.lam)
        return len(self.chi.values)


def trivial_action(spec: FieldSpec, grp: GaloisGroupSpec) -> GaloisActionData:
    return GaloisActionData(SCALAR_CHAR, Character(tuple(spec.one for _ in range(grp.order))))


def _report(failures):
    return ValidationReport(not failures, failures)


def validate_action(D, grp: GaloisGroupSpec, act: GaloisActionData) -> ValidationReport:
    """Cocycle, commutation with phi and N, and variant compatibility."""
    phi = D.phi_module if isinstance(D, FilteredModule) else D
    spec, f = phi.field, phi.f
    if act.order() != grp.order:
        return _report(["action data does not list every group element"])
    if act.variant in (DIAG_CHARS, SCALAR_CHAR):
        for name, ch in (("chi", act.chi), ("psi", act.psi)):
            if ch is not None and not ch.is_multiplicative(grp):
                return _report([f"{name} is not a multiplicative character"])
    mats = act.matrices(spec, f)
    if mats[0] != Mat2F.identity(spec, f):
        return _report(["action of the identity is not trivial"])
    for g in range(grp.order):
        if not mats[g].is_invertible():
            return _report([f"matrix of {grp.elements[g]} is not invertible"])
        for h in range(grp.order):
            if mats[grp.mul(g, h)] != mats[g] * act_mat(grp, g, mats[h]):
                return _report([f"cocycle identity fails at ({grp.elements[g]}, {grp.elements[h]})"])
    for g in range(grp.order):
        if phi.frob * mats[g].phi() != mats[g] * act_mat(grp, g, phi.frob):
            return _report([f"action of {grp.elements[g]} does not commute with Frobenius"])
        if phi.monodromy * mats[g] != mats[g] * act_mat(grp, g, phi.monodromy):
            return _report([f"action of {grp.elements[g]} does not commute with monodromy"])
    pres = presentation(phi.frob)
    tag = pres[0] if pres else None
    nontrivial_n = not phi.monodromy.is_zero()
    if act.variant == DIAG_CHARS and (nontrivial_n or tag == NONSEMISIMPLE):
        if act.chi != act.psi:
            return _report(["variant DiagChars with chi != psi is incompatible with this Frobenius class"])
    if act.variant == HOMO and tag != SCALAR:
        if any(not (m[0][1].is_zero() and m[1][0].is_zero()) for m in act.lam):
            return _report(["variant Homo with non-diagonal image requires an F-scalar module"])
    return _report([])


# ---------------------------------------------------------------------------
# G-stable filtrations


@dataclass(frozen=True)
class FiltrationSeed:
    """One (representative, x, y) triple per orbit."""

    entries: tuple[tuple[int, FieldElement, FieldElement], ...]


def _orbit_union_check(grp: GaloisGroupSpec, weights: WeightData) -> None:
    orbs = orbits(grp).orbits
    for r, I in enumerate(weights.steps):
        for orb in orbs:
            if orb & I and not orb <= I:
                raise OrbitMismatch(f"I_{r} = {sorted(I)} is not a union of Galois orbits")


def build_stable_filtration(
    grp: GaloisGroupSpec, act: GaloisActionData, weights: WeightData, seeds
):
    """x_l, y_l at l = pi(g)(i_j) is lambda(g^-1) applied to the seed column."""
    _orbit_union_check(grp, weights)
    entries = seeds.entries if isinstance(seeds, FiltrationSeed) else tuple(seeds)
    decomp = orbits(grp)
    m = weights.m
    used = set()
    xs, ys = [None] * m, [None] * m
    spec = None
    for entry in entries:
        try:
            i, x0, y0 = entry
        except (TypeError, ValueError):
            raise BadSeed("each seed is (representative, x, y)") from None
        if not isinstance(i, int) or not 0 <= i < m:
            raise BadSeed(f"seed representative {i!r} out of range")
        k = decomp.orbit_of(i)
        if k in used:
            raise BadSeed(f"two seeds given for the orbit of {i}")
        used.add(k)
        if not isinstance(x0, FieldElement) or not isinstance(y0, FieldElement):
            raise BadSeed("seed values must be field elements")
        if x0.is_zero() and y0.is_zero():
            raise BadSeed(f"seed at {i} is (0, 0)")
        spec = x0.spec
        for g in range(grp.order):
            ginv = grp.inverse(g)
            (a, b), (c, d) = act.matrix_at(ginv)
            l = grp.pi[g][i]
            xs[l] = a * x0 + b * y0
            ys[l] = c * x0 + d * y0
    if len(used) != len(decomp.orbits):
        raise BadSeed("every orbit needs exactly one seed")
    return VecM._raw(spec, xs), VecM._raw(spec, ys)


def check_g_stable(D: FilteredModule, grp: GaloisGroupSpec | None = None,
                   galois: Sequence[Mat2F] | None = None,
                   filt: FiltrationData | None = None) -> bool:
    """Direct check that g(Fil^j D_L) lies in Fil^j D_L for all g and j."""
    grp = D.group if grp is None else grp
    galois = D.galois if galois is None else galois
    filt = D.filtration if filt is None else filt
    f = galois[0].f
    x, y = filt.x, filt.y
    for g in range(grp.order):
        perm = grp.pi[g]
        Mg = galois[g]
        for I in filt.weights.steps:
            if act_set(grp, g, I) != I:
                return False
            for i in I:
                src = perm[i]
                (a, b), (c, d) = Mg.at(i % f)
                u = a * x[src] + b * y[src]
                v = c * x[src] + d * y[src]
                if u * y[i] != v * x[i]:
                    return False
    return True


# ---------------------------------------------------------------------------
# whole-module validation and normalization


def validate_module(D: FilteredModule) -> None:
    """Every structural check, raising on the first violation."""
    rep = validate_group(D.ext, D.group)
    if not rep.ok:
        raise ValidationError(f"group data: {rep.first_failure}")
    if D.field.prime != D.ext.p:
        raise ValidationError("field prime and extension prime differ")
    D.check_basic()
    if not check_g_stable(D):
        raise UnstableFiltration("filtration is not stable under the Galois action")


def monodromy_is_normalized(D) -> bool:
    N = D.monodromy
    if N.is_zero():
        return True
    return N.a.is_zero() and N.b.is_zero() and N.d.is_zero() and all(x == 1 for x in N.c)


def is_presented(D: FilteredModule) -> bool:
    """True if Frobenius is canonical or vector-diagonal and N is normalized."""
    pres = presentation(D.frob)
    if pres is None:
        return False
    if not D.monodromy.is_zero():
        return pres[0] == SPLIT and monodromy_is_normalized(D)
    return True


@dataclass(frozen=True)
class NormalizedModule:
    module: FilteredModule
    basechange: Mat2F
    form: CanonicalForm


def normalize_module(D: FilteredModule, normalize_lines: bool = True) -> NormalizedModule:
    """Canonical Frobenius, normalized monodromy, transformed Galois matrices
    and filtration."""
    form = canonicalize(D.frob, D.roots)
    P = form.basechange
    out = transform_module(D, P)
    if not out.monodromy.is_zero():
        _, P2 = normalize_monodromy(out.phi_module)
        out = transform_module(out, P2)
        P = P2 * P
        pres = presentation(out.frob)
        form = CanonicalForm(SPLIT, pres[1], pres[2], P, out.frob, form.root_source)
    if normalize_lines:
        F = normalize_filtration(out.filtration)
        out = replace(out, x=F.x, y=F.y)
    return NormalizedModule(out, P, form)


def ensure_presented(D: FilteredModule) -> FilteredModule:
    return D if is_presented(D) else normalize_module(D).module


def extract_action(D: FilteredModule) -> GaloisActionData | None:
    """Recover the variant from constant Galois matrices (None otherwise)."""
    if not all(M.is_constant() for M in D.galois):
        return None
    lam = tuple(M.at(0) for M in D.galois)
    diag = all(l[0][1].is_zero() and l[1][0].is_zero() for l in lam)
    if diag:
        chi = Character(tuple(l[0][0] for l in lam))
        psi = Character(tuple(l[1][1] for l in lam))
        if chi == psi:
            return GaloisActionData(SCALAR_CHAR, chi)
        return GaloisActionData(DIAG_CHARS, chi, psi)
    return GaloisActionData(HOMO, lam=lam)

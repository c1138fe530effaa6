"""Weights, filtration vectors, the filtered module container, rank-one
modules and weight-shifting twists.

At the embedding sigma_i the filtration on D_L has jumps s_i <= s_i + k_i:
everything up to level s_i, the line spanned by (x_i, y_i) for levels
s_i + 1 .. s_i + k_i, and zero above.  The gap k_i is the weight; the
offset s_i is zero unless a module was produced by a twist.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .errors import (
    ResultingNegativeWeight,
    NegativeWeight,
    PreconditionMismatch,
    ValidationError,
    WeightMismatch,
    WrongLength,
)
from .exactfield import FieldElement, FieldSpec, vp
from .extension import ExtensionSpec, GaloisGroupSpec, act_mat, orbits
from .phimodule import (
    NONSEMISIMPLE,
    PhiModule,
    change_basis,
    conjugate,
    presentation,
)
from .productring import Mat2F, VecM


@dataclass(frozen=True)
class WeightData:
    k: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.k)

    @property
    def jumps(self) -> tuple[int, ...]:
        """w_0 < ... < w_{t-1}: the distinct positive weights."""
        return tuple(sorted({x for x in self.k if x > 0}))

    @property
    def steps(self) -> tuple[frozenset[int], ...]:
        """I_r = {i : k_i > w_{r-1}} with w_{-1} = 0, for r = 0..t-1."""
        prev = [0] + list(self.jumps)
        return tuple(frozenset(i for i, x in enumerate(self.k) if x > prev[r]) for r in range(len(self.jumps)))

    @property
    def positive(self) -> frozenset[int]:
        """I0+ = {i : k_i > 0}."""
        return frozenset(i for i, x in enumerate(self.k) if x > 0)

    @property
    def total(self) -> int:
        return sum(self.k)

    def telescoping(self) -> int:
        w, I = self.jumps, self.steps
        total = 0
        for r in range(len(w)):
            nxt = len(I[r + 1]) if r + 1 < len(w) else 0
            total += w[r] * (len(I[r]) - nxt)
        return total

    def to_json(self):
        return list(self.k)


def weight_profile(k: Sequence[int], m: int | None = None) -> WeightData:
    k = tuple(int(x) for x in k)
    if m is not None and len(k) != m:
        raise WrongLength(f"expected {m} weights, got {len(k)}")
    if any(x < 0 for x in k):
        raise NegativeWeight(f"weights must be non-negative, got {list(k)}")
    return WeightData(k)


@dataclass(frozen=True)
class FiltrationData:
    weights: WeightData
    x: VecM
    y: VecM
    offsets: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.offsets is None:
            object.__setattr__(self, "offsets", (0,) * self.weights.m)
        m = self.weights.m
        if len(self.x) != m or len(self.y) != m or len(self.offsets) != m:
            raise WrongLength("filtration vectors, weights and offsets must all have length m")
        for i in range(m):
            if self.x[i].is_zero() and self.y[i].is_zero():
                raise ValidationError(f"filtration vector (x_{i}, y_{i}) is zero")

    @property
    def Jx(self) -> frozenset[int]:
        return self.x.support()

    @property
    def Jy(self) -> frozenset[int]:
        return self.y.support()


def equivalent_filtrations(F1: FiltrationData, F2: FiltrationData) -> bool:
    """Same filtration after rescaling each coordinate by a unit.

    Coordinates with k_i = 0 carry no line and are ignored.
    """
    if F1.weights != F2.weights or F1.offsets != F2.offsets:
        raise WeightMismatch("filtrations have different weights")
    for i in F1.weights.positive:
        if F1.x[i] * F2.y[i] != F2.x[i] * F1.y[i]:
            return False
    return True


def normalize_filtration(F: FiltrationData) -> FiltrationData:
    """Representative with y = f_{J_y} and x_i = 1 where y_i = 0."""
    spec = F.x.spec
    xs, ys = [], []
    for xi, yi in zip(F.x, F.y):
        if yi.is_zero():
            xs.append(spec.one)
            ys.append(spec.zero)
        else:
            xs.append(xi / yi)
            ys.append(spec.one)
    return FiltrationData(F.weights, VecM._raw(spec, xs), VecM._raw(spec, ys), F.offsets)


# ---------------------------------------------------------------------------
# filtered modules


@dataclass(frozen=True)
class FilteredModule:
    """A rank-two filtered (phi, N, L/K, E)-module in coordinates.

    ``galois`` holds the matrix [g] for every group element, in group order.
    ``roots`` are optional witnesses used by canonicalization.
    """

    field: FieldSpec
    ext: ExtensionSpec
    group: GaloisGroupSpec
    frob: Mat2F
    monodromy: Mat2F
    galois: tuple[Mat2F, ...]
    weights: WeightData
    x: VecM
    y: VecM
    offsets: tuple[int, ...] | None = None
    roots: tuple[FieldElement, ...] = ()

    def __post_init__(self):
        if self.offsets is None:
            object.__setattr__(self, "offsets", (0,) * self.ext.m)

    @property
    def f(self) -> int:
        return self.ext.f

    @property
    def m(self) -> int:
        return self.ext.m

    @property
    def phi_module(self) -> PhiModule:
        return PhiModule(self.field, self.ext, self.frob, self.monodromy)

    @property
    def filtration(self) -> FiltrationData:
        return FiltrationData(self.weights, self.x, self.y, self.offsets)

    def with_(self, **kw) -> "FilteredModule":
        return replace(self, **kw)

    def check_basic(self) -> None:
        """Shape checks plus the phi, N and Galois relations."""
        f, m = self.ext.f, self.ext.m
        for M in (self.frob, self.monodromy, *self.galois):
            if M.f != f:
                raise WrongLength("every matrix must have f coordinates")
        if len(self.galois) != self.group.order:
            raise WrongLength("one Galois matrix per group element is required")
        if self.weights.m != m:
            raise WrongLength(f"expected {m} weights")
        self.phi_module.validate()
        FiltrationData(self.weights, self.x, self.y, self.offsets)
        ident = Mat2F.identity(self.field, f)
        grp = self.group
        if self.galois[0] != ident:
            raise ValidationError("Galois matrix of the identity is not the identity")
        for g in range(grp.order):
            Mg = self.galois[g]
            if not Mg.is_invertible():
                raise ValidationError(f"Galois matrix of {grp.elements[g]} is not invertible")
            if self.frob * Mg.phi() != Mg * act_mat(grp, g, self.frob):
                raise ValidationError(
                    f"Galois action of {grp.elements[g]} does not commute with Frobenius"
                )
            if self.monodromy * Mg != Mg * act_mat(grp, g, self.monodromy):
                raise ValidationError(
                    f"Galois action of {grp.elements[g]} does not commute with monodromy"
                )
            for h in range(grp.order):
                gh = grp.mul(g, h)
                if self.galois[gh] != Mg * act_mat(grp, g, self.galois[h]):
                    raise ValidationError(
                        f"cocycle identity fails at ({grp.elements[g]}, {grp.elements[h]})"
                    )


def apply_on_lines(P: Mat2F, x: VecM, y: VecM, e: int):
    """(x, y) -> P^{(e)} (x, y) coordinatewise."""
    f = P.f
    xs, ys = [], []
    for s in range(len(x)):
        (a, b), (c, d) = P.at(s % f)
        xs.append(a * x[s] + b * y[s])
        ys.append(c * x[s] + d * y[s])
    return VecM._raw(x.spec, xs), VecM._raw(x.spec, ys)


def transform_module(D: FilteredModule, P: Mat2F) -> FilteredModule:
    """Express D in a new basis; P is the coordinate transform."""
    grp = D.group
    Pinv = P.inverse()
    galois = tuple(
        P * D.galois[g] * act_mat(grp, g, Pinv) for g in range(grp.order)
    )
    x, y = apply_on_lines(P, D.x, D.y, D.ext.e)
    return replace(
        D,
        frob=change_basis(D.frob, P),
        monodromy=conjugate(D.monodromy, P),
        galois=galois,
        x=x,
        y=y,
    )


def scale_filtration(D: FilteredModule, t: VecM) -> FilteredModule:
    if not t.is_unit():
        raise ValidationError("filtration scaling must be a unit")
    return replace(D, x=D.x * t, y=D.y * t)


# ---------------------------------------------------------------------------
# rank one


@dataclass(frozen=True)
class RankOneModule:
    """phi(eta) = u (varpi, ..., varpi) eta, g(eta) = chi(g) eta, one jump
    at level k_i at sigma_i."""

    field: FieldSpec
    ext: ExtensionSpec
    group: GaloisGroupSpec
    u: FieldElement
    varpi: FieldElement
    weights: tuple[int, ...]
    chi: tuple[FieldElement, ...]

    @property
    def frobenius_scalar(self) -> FieldElement:
        return self.u * self.varpi


def _rank_one_failures(R: RankOneModule) -> list[str]:
    out = []
    ext, grp = R.ext, R.group
    if len(R.weights) != ext.m:
        return [f"expected {ext.m} weights"]
    if len(R.chi) != grp.order:
        return ["one character value per group element is required"]
    if R.u.is_zero() or R.varpi.is_zero():
        return ["u and varpi must be nonzero"]
    # Newton/Hodge balance: e f v_p(u varpi) = sum k_i
    p = R.field.element(ext.p)
    if R.varpi ** ext.m != p ** sum(R.weights):
        out.append("varpi^m != p^(sum of weights)")
    if vp(R.u) != 0:
        out.append("v_p(u) != 0")
    for orb in orbits(grp).orbits:
        if len({R.weights[i] for i in orb}) > 1:
            out.append("weights are not constant on Galois orbits")
            break
    if R.chi[0] != 1:
        out.append("chi(identity) != 1")
    for g in range(grp.order):
        for h in range(grp.order):
            if R.chi[grp.mul(g, h)] != R.chi[g] * R.chi[h]:
                out.append("chi is not multiplicative")
                return out
    return out


def rank_one_wa(R: RankOneModule) -> bool:
    return not _rank_one_failures(R)


def rank_one_iso(R1: RankOneModule, R2: RankOneModule) -> bool:
    """u^f = v^f and chi(g) = eps^{n(g)} psi(g) with eps = u/v.

    The comparison uses the full Frobenius scalars u*varpi, so two
    presentations with different choices of varpi are handled too; with a
    common varpi it is exactly the criterion above.
    """
    if (R1.field, R1.ext, R1.group) != (R2.field, R2.ext, R2.group):
        raise PreconditionMismatch("rank-one modules over different data")
    if R1.weights != R2.weights:
        return False
    f = R1.ext.f
    a, b = R1.frobenius_scalar, R2.frobenius_scalar
    if a ** f != b ** f:
        return False
    eps = a / b
    grp = R1.group
    return all(R1.chi[g] == eps ** grp.n[g] * R2.chi[g] for g in range(grp.order))


def twist_shift_weights(D: FilteredModule, R: RankOneModule) -> FilteredModule:
    """D tensor R.

    Frobenius scales by u*varpi, Galois matrices by chi(g), and both jumps
    at sigma_i move up by the rank-one weight r_i (the offsets absorb the
    shift; the gaps k_i are unchanged).  A non-semisimple canonical
    Frobenius is rebased so that it stays canonical.
    """
    if (D.field, D.ext, D.group) != (R.field, R.ext, R.group):
        raise PreconditionMismatch("module and rank-one twist use different data")
    if len(R.weights) != D.ext.m:
        raise WrongLength("rank-one weights must have length m")
    offsets = tuple(s + r for s, r in zip(D.offsets, R.weights))
    if any(s < 0 for s in offsets):
        raise ResultingNegativeWeight(f"twist produces negative jumps {list(offsets)}")
    c = R.frobenius_scalar
    out = replace(
        D,
        frob=D.frob * c,
        galois=tuple(M * R.chi[g] for g, M in enumerate(D.galois)),
        offsets=offsets,
    )
    pres = presentation(D.frob)
    if pres is not None and pres[0] == NONSEMISIMPLE and D.monodromy.is_zero():
        P = Mat2F.const(D.field, D.ext.f, 1, 0, 0, c.inverse())
        out = transform_module(out, P)
    return out

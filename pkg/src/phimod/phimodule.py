"""Rank-two phi-modules over E^f: base change, classification of phi^f and
a constructive reduction of Frobenius to one of three canonical shapes.

Convention: a coordinate transform P sends the Frobenius matrix M to
P M phi(P)^{-1}, the monodromy N to P N P^{-1}, a Galois matrix [g] to
P [g] g(P)^{-1} and a filtration vector at sigma_s to P_{s mod f} v.

Canonical shapes::

    SplitDiag(alpha, delta)  diag(alpha 1, delta 1), alpha^f != delta^f
    Scalar(alpha)            diag(alpha 1, alpha 1)
    NonSemisimple(alpha)     ((alpha 1, 0), (1, alpha 1))
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    FieldTooSmall,
    SingularBaseChange,
    TrivialMonodromy,
    ValidationError,
    WrongClass,
)
from .exactfield import FieldElement, FieldSpec, nth_root_with_source, root_from_candidates
from .extension import ExtensionSpec
from .productring import (
    Mat2F,
    VecF,
    mat_coord_inv,
    mat_coord_mul,
    solve_twisted,
)

F_SEMISIMPLE_NON_SCALAR = "FSemisimpleNonScalar"
F_SCALAR = "FScalar"
NON_F_SEMISIMPLE = "NonFSemisimple"

SPLIT = "SplitDiag"
SCALAR = "Scalar"
NONSEMISIMPLE = "NonSemisimple"


@dataclass(frozen=True)
class PhiModule:
    field: FieldSpec
    ext: ExtensionSpec
    frob: Mat2F
    monodromy: Mat2F | None = None

    def __post_init__(self):
        if self.monodromy is None:
            object.__setattr__(self, "monodromy", Mat2F.zero(self.field, self.ext.f))

    @property
    def f(self) -> int:
        return self.ext.f

    def validate(self) -> None:
        if self.frob.f != self.ext.f or self.monodromy.f != self.ext.f:
            raise ValidationError("Frobenius and monodromy must have f coordinates")
        if not self.frob.is_invertible():
            raise ValidationError("Frobenius matrix is not invertible")
        N = self.monodromy
        if not (N * N).is_zero():
            raise ValidationError("monodromy is not nilpotent: N^2 != 0")
        if N * self.frob != self.frob * N.phi() * self.field.element(self.ext.p):
            raise ValidationError("relation N phi = p phi N fails: [N][phi] != p [phi] phi([N])")


def change_basis(M: Mat2F, P: Mat2F) -> Mat2F:
    """P M phi(P)^{-1}."""
    if not P.is_invertible():
        raise SingularBaseChange("base change matrix is not invertible")
    return P * M * P.phi().inverse()


def conjugate(N: Mat2F, P: Mat2F) -> Mat2F:
    if not P.is_invertible():
        raise SingularBaseChange("base change matrix is not invertible")
    return P * N * P.inverse()


def norm_block(frob: Mat2F):
    """Q0, the coordinate-0 block of Nm_phi(frob): the matrix of phi^f at tau_0."""
    out = frob.at(0)
    for k in range(1, frob.f):
        out = mat_coord_mul(out, frob.at(k))
    return out


def charpoly0(frob: Mat2F):
    """(trace, det) of Q0."""
    (a, b), (c, d) = norm_block(frob)
    return a + d, a * d - b * c


def _sqrt_candidates(disc, witnesses):
    try:
        return nth_root_with_source(disc, 2)
    except FieldTooSmall:
        pass
    for w in witnesses:
        w = disc.spec.element(w)
        if w * w == disc:
            return w, "witness"
    return None, None


def eigenvalues(Q0, witnesses: Sequence = (), f: int = 1):
    """Eigenvalues of a 2x2 matrix over E, or FieldTooSmall.

    Witnesses are tried both as eigenvalues and (raised to the f) as
    eigenvalues of Q0, and as square roots of the discriminant.
    """
    (a, b), (c, d) = Q0
    t, dt = a + d, a * d - b * c
    disc = t * t - 4 * dt
    if disc.is_zero():
        return t / 2, t / 2
    if b.is_zero():
        return a, d
    if c.is_zero():
        return a, d
    r, _ = _sqrt_candidates(disc, witnesses)
    if r is not None:
        return (t + r) / 2, (t - r) / 2
    for w in witnesses:
        w = disc.spec.element(w)
        for val in (w, w ** f):
            if val * val - t * val + dt == 0:
                return val, t - val
    raise FieldTooSmall(
        "eigenvalues of phi^f do not lie in E",
        hint=f"missing root: square root of the discriminant {disc.to_json()} of phi^f",
    )


def f_class(D, roots: Sequence = ()) -> str:
    frob = D.frob if isinstance(D, PhiModule) else D
    (a, b), (c, d) = Q0 = norm_block(frob)
    if b.is_zero() and c.is_zero() and a == d:
        return F_SCALAR
    t, dt = a + d, a * d - b * c
    if (t * t - 4 * dt).is_zero():
        return NON_F_SEMISIMPLE
    eigenvalues(Q0, roots, frob.f)
    return F_SEMISIMPLE_NON_SCALAR


@dataclass(frozen=True)
class CanonicalForm:
    tag: str
    alpha: FieldElement
    delta: FieldElement
    basechange: Mat2F
    matrix: Mat2F
    root_source: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out = {"tag": self.tag, "alpha": self.alpha.to_json(), "basechange": self.basechange.to_json()}
        if self.tag == SPLIT:
            out["delta"] = self.delta.to_json()
        out["root_source"] = dict(sorted(self.root_source.items()))
        return out


def canonical_matrix(tag: str, alpha, delta, spec: FieldSpec, f: int) -> Mat2F:
    if tag == SPLIT:
        return Mat2F.const(spec, f, alpha, 0, 0, delta)
    if tag == SCALAR:
        return Mat2F.const(spec, f, alpha, 0, 0, alpha)
    if tag == NONSEMISIMPLE:
        return Mat2F.const(spec, f, alpha, 0, 1, alpha)
    raise ValueError(tag)


def presentation(frob: Mat2F):
    """Recognize a matrix already in a canonical (or vector-diagonal) shape.

    Returns ``(tag, alpha, delta)`` with tag one of SplitDiag, Scalar,
    NonSemisimple, VectorDiagonal, or None.
    """
    a, b, c, d = frob.a, frob.b, frob.c, frob.d
    f = frob.f
    if not b.is_zero():
        return None
    if c.is_zero():
        if a.is_constant() and d.is_constant():
            al, de = a[0], d[0]
            if al == de:
                return (SCALAR, al, de)
            if al ** f != de ** f:
                return (SPLIT, al, de)
            return None
        if a.is_unit() and d.is_unit():
            if a.entries and _prod(a) != _prod(d):
                return ("VectorDiagonal", a, d)
        return None
    if a.is_constant() and d.is_constant() and a[0] == d[0] and all(x == 1 for x in c):
        return (NONSEMISIMPLE, a[0], a[0])
    return None


def _prod(v: VecF):
    out = v.spec.one
    for x in v:
        out = out * x
    return out


def _nullvector(M):
    """A nonzero kernel vector of a singular nonzero 2x2 matrix."""
    (m11, m12), (m21, m22) = M
    if not (m11.is_zero() and m12.is_zero()):
        return (-m12, m11)
    return (-m22, m21)


def _concentrate(A: Mat2F) -> Mat2F:
    """P with P A phi(P)^{-1} = (I, ..., I, Q0) where Q0 = A_0 ... A_{f-1}."""
    spec, f = A.spec, A.f
    one, zero = spec.one, spec.zero
    blocks = [((one, zero), (zero, one))]
    for i in range(f - 1):
        blocks.append(mat_coord_mul(blocks[-1], A.at(i)))
    return Mat2F.from_coords(spec, blocks)


def _const(spec, f, M) -> Mat2F:
    (a, b), (c, d) = M
    return Mat2F.const(spec, f, a, b, c, d)


def _last_vector(spec, f, value) -> VecF:
    return VecF._raw(spec, [spec.one] * (f - 1) + [spec.element(value)])


def claim_reduction(A: Mat2F, a: FieldElement) -> Mat2F:
    """Q* with Q* A phi(Q*)^{-1} = diag((a,1,...,1), (a,1,...,1)), assuming
    Nm_phi(A) is the scalar a at every coordinate."""
    spec, f = A.spec, A.f
    one, zero = spec.one, spec.zero
    ident = ((one, zero), (zero, one))
    Q = [ident]
    T = []
    for i in range(f - 1):
        M = mat_coord_mul(Q[i], A.at(i))
        (m11, m12), _ = M
        if not m11.is_zero():
            U = ((one, m12 / m11), (zero, one))
        else:
            U = ((zero, one), (one, zero))
        T.append(mat_coord_mul(M, mat_coord_inv(U)))
        Q.append(U)
    T.append(mat_coord_mul(Q[f - 1], A.at(f - 1)))
    if not T[-1][0][1].is_zero():
        raise ValidationError("scalar reduction failed: Nm_phi(A) is not scalar")
    alphas = [t[0][0] for t in T]
    deltas = [t[1][1] for t in T]
    x, y = [one], [one]
    px, py = one, one
    for i in range(1, f):
        px = px * alphas[i - 1]
        py = py * deltas[i - 1]
        x.append(px / a)
        y.append(py / a)
    R = Mat2F.diag(VecF._raw(spec, x), VecF._raw(spec, y)) * Mat2F.from_coords(spec, Q)
    X = change_basis(A, R)
    zeta = X.c
    z = []
    for i in range(f):
        if i == 0:
            z.append(one)
        else:
            tail = zero
            for j in range(i, f):
                tail = tail + zeta[j]
            z.append(one - tail)
    S = Mat2F(VecF.ones(spec, f), VecF.zeros(spec, f), VecF._raw(spec, z), VecF.ones(spec, f))
    return S * R


def mstar(G: VecF) -> Mat2F:
    """The matrix ((f, 0), (z, Tr G)) with z_i = i Tr(G) - f (G_0 + ... + G_{i-1}).

    Satisfies ((1, 0), (G, 1)) phi(M*) = M* ((1, 0), (1, 1)).
    """
    spec, f = G.spec, len(G)
    tr = spec.zero
    for g in G:
        tr = tr + g
    z, partial = [], spec.zero
    for i in range(f):
        z.append(tr * i - partial * f)
        partial = partial + G[i]
    return Mat2F(VecF.const(spec, f, f), VecF.zeros(spec, f), VecF._raw(spec, z), VecF.const(spec, tr, f))


def canonicalize(D, roots: Sequence = ()) -> CanonicalForm:
    """Constructive reduction of Frobenius to a canonical shape.

    ``roots`` are optional witnesses for the f-th roots of the eigenvalues of
    phi^f (or for the eigenvalues themselves, or the square root of the
    discriminant).
    """
    frob = D.frob if isinstance(D, PhiModule) else D
    spec, f = frob.spec, frob.f
    roots = [spec.element(r) for r in roots]
    if not frob.is_invertible():
        raise ValidationError("Frobenius matrix is not invertible")
    pres = presentation(frob)
    ident = Mat2F.identity(spec, f)
    if pres is not None and pres[0] in (SPLIT, SCALAR, NONSEMISIMPLE):
        tag, al, de = pres
        return CanonicalForm(tag, al, de, ident, frob, {"alpha": "input"})

    cls = f_class(frob, roots)
    Pc = _concentrate(frob)
    Q0 = norm_block(frob)
    sources = {}

    if cls == F_SCALAR:
        a = Q0[0][0]
        alpha, sources["alpha"] = root_from_candidates(a, f, roots)
        Qs = claim_reduction(frob, a)
        gamma = solve_twisted(_first_vector(spec, f, a), VecF.const(spec, alpha, f))
        P = Mat2F.diag(gamma.generator, gamma.generator) * Qs
        tag, delta = SCALAR, alpha
    elif cls == F_SEMISIMPLE_NON_SCALAR:
        l1, l2 = eigenvalues(Q0, roots, f)
        one, zero = spec.one, spec.zero
        v1 = _nullvector(((Q0[0][0] - l1, Q0[0][1]), (Q0[1][0], Q0[1][1] - l1)))
        v2 = _nullvector(((Q0[0][0] - l2, Q0[0][1]), (Q0[1][0], Q0[1][1] - l2)))
        Sinv = ((v1[0], v2[0]), (v1[1], v2[1]))
        S = _const(spec, f, mat_coord_inv(Sinv))
        alpha, sources["alpha"] = root_from_candidates(l1, f, roots)
        delta, sources["delta"] = root_from_candidates(l2, f, roots)
        g1 = solve_twisted(_last_vector(spec, f, l1), VecF.const(spec, alpha, f))
        g2 = solve_twisted(_last_vector(spec, f, l2), VecF.const(spec, delta, f))
        P = Mat2F.diag(g1.generator, g2.generator) * S * Pc
        tag = SPLIT
    else:
        (a, b), (c, d) = Q0
        lam = (a + d) / 2
        one, zero = spec.one, spec.zero
        N0 = ((a - lam, b), (c, d - lam))
        v1 = (one, zero)
        w = (N0[0][0], N0[1][0])
        if w[0].is_zero() and w[1].is_zero():
            v1 = (zero, one)
            w = (N0[0][1], N0[1][1])
        Sinv = ((v1[0], w[0]), (v1[1], w[1]))
        S = _const(spec, f, mat_coord_inv(Sinv))
        alpha, sources["alpha"] = root_from_candidates(lam, f, roots)
        g = solve_twisted(_last_vector(spec, f, lam), VecF.const(spec, alpha, f)).generator
        B = Mat2F.diag(g, g) * S * Pc
        X = change_basis(frob, B)
        G = X.c * alpha.inverse()
        Ms = mstar(G)
        scale = Mat2F.const(spec, f, 1, 0, 0, alpha.inverse())
        P = scale * Ms.inverse() * B
        tag, delta = NONSEMISIMPLE, alpha

    target = canonical_matrix(tag, alpha, delta, spec, f)
    if change_basis(frob, P) != target:
        raise ValidationError("internal error: canonical base change does not verify")
    return CanonicalForm(tag, alpha, delta, P, target, sources)


def _first_vector(spec, f, value) -> VecF:
    return VecF._raw(spec, [spec.element(value)] + [spec.one] * (f - 1))


# ---------------------------------------------------------------------------
# monodromy


@dataclass(frozen=True)
class MonodromyFamily:
    """``kind`` is ``zero``, ``lower`` or ``upper``; the family is the
    E-multiples of ``generator`` placed below (or above) the diagonal."""

    kind: str
    generator: VecF | None = None

    def member(self, n) -> Mat2F:
        g = self.generator
        z = VecF.zeros(g.spec, len(g))
        if self.kind == "lower":
            return Mat2F(z, z, g * n, z)
        if self.kind == "upper":
            return Mat2F(z, g * n, z, z)
        raise ValueError("the zero family has no nonzero members")


def monodromy_candidates(form: CanonicalForm, p: int | None = None) -> MonodromyFamily:
    spec, f = form.alpha.spec, form.basechange.f
    p = spec.prime if p is None else p
    if form.tag != SPLIT:
        return MonodromyFamily("zero")
    al, de = form.alpha, form.delta
    if al ** f == (de * p) ** f:
        zeta = al / (de * p)
        return MonodromyFamily("lower", VecF._raw(spec, [zeta ** i for i in range(f)]))
    if de ** f == (al * p) ** f:
        eps = de / (al * p)
        return MonodromyFamily("upper", VecF._raw(spec, [eps ** i for i in range(f)]))
    return MonodromyFamily("zero")


def normalize_monodromy(D: PhiModule):
    """Return ``(D', P)``: D' has frob diag(alpha, alpha/p) and N = ((0,0),(1,0)).

    The input must already have Frobenius diag(alpha 1, delta 1).
    """
    N = D.monodromy
    if N.is_zero():
        raise TrivialMonodromy("monodromy is zero")
    pres = presentation(D.frob)
    if pres is None or pres[0] != SPLIT:
        raise WrongClass("normalize_monodromy needs Frobenius diag(alpha 1, delta 1) with alpha^f != delta^f")
    spec, f = D.field, D.f
    P = Mat2F.identity(spec, f)
    frob = D.frob
    if not N.b.is_zero():
        swap = Mat2F.const(spec, f, 0, 1, 1, 0)
        P = swap
        frob = change_basis(frob, swap)
        N = conjugate(N, swap)
    if not (N.a.is_zero() and N.b.is_zero() and N.d.is_zero()) or not N.c.is_unit():
        raise WrongClass("monodromy is not of the lower-triangular shape")
    scale = Mat2F.diag(VecF.ones(spec, f), N.c.inverse())
    P = scale * P
    out = PhiModule(D.field, D.ext, change_basis(D.frob, P), conjugate(D.monodromy, P))
    return out, P

"""Newton and Hodge invariants, the phi,N-stable submodule lattice and the
weak-admissibility decision.

Submodules are described relative to a presented basis e1, e2 (canonical or
vector-diagonal Frobenius, monodromy e1 -> e2):  D1 = <e1>, D2 = <e2> and,
for scalar phi^f, D_theta = <e1 + theta e2>.  A single symbolic ``generic``
D_theta stands in for every theta that is not a relevant constant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .descent import check_g_stable, is_presented, normalize_module
from .errors import NotCanonicalized, UnstableFiltration, WrongSubmoduleForClass
from .exactfield import FieldElement, fstr, vp
from .filtration import FilteredModule, FiltrationData
from .phimodule import NONSEMISIMPLE, SCALAR, SPLIT, presentation

ZERO, FULL, D1, D2, DTHETA = "Zero", "Full", "D1", "D2", "DTheta"

IRREDUCIBLE = "Irreducible"
NON_SPLIT = "NonSplitReducible"
SPLIT_REDUCIBLE = "SplitReducible"

SPECIAL = "Special"
PRINCIPAL = "PrincipalSeries"
SC_OR_PRINCIPAL = "SupercuspidalOrPrincipal"
NOT_LABELED = "NotLabeled"


@dataclass(frozen=True)
class SubmoduleDescriptor:
    variant: str
    theta: FieldElement | None = None  # None with variant DTheta means generic

    @property
    def generic(self) -> bool:
        return self.variant == DTHETA and self.theta is None

    @property
    def proper(self) -> bool:
        return self.variant not in (ZERO, FULL)

    def line(self):
        """Constant generator (u, v) of a rank-one submodule."""
        if self.variant == D1:
            return (1, 0)
        if self.variant == D2:
            return (0, 1)
        if self.variant == DTHETA and self.theta is not None:
            return (1, self.theta)
        return None

    def to_json(self):
        out = {"variant": self.variant}
        if self.variant == DTHETA:
            out["theta"] = "generic" if self.theta is None else self.theta.to_json()
        return out

    def __str__(self):
        if self.variant != DTHETA:
            return self.variant
        if self.theta is None:
            return "DTheta(generic)"
        t = self.theta
        return f"DTheta({t.to_rational() if t.is_rational() else t.to_json()})"


def _kind(D: FilteredModule) -> str:
    """SplitDiag, Scalar, NonSemisimple, VectorDiagonal or Monodromy."""
    pres = presentation(D.frob)
    if pres is None:
        raise NotCanonicalized("Frobenius is not in a canonical or vector-diagonal shape")
    if not D.monodromy.is_zero():
        if pres[0] != SPLIT or not is_presented(D):
            raise NotCanonicalized("monodromy is not normalized")
        return "Monodromy"
    return pres[0]


def _evp_prod(v, e: int) -> Fraction:
    out = v.spec.one
    for x in v:
        out = out * x
    return e * vp(out)


def t_newton(D: FilteredModule, sub: SubmoduleDescriptor) -> Fraction:
    """e v_p of the phi-norm of the eigenvalue(s) carried by ``sub``."""
    kind = _kind(D)
    e = D.ext.e
    if sub.variant == ZERO:
        return Fraction(0)
    if sub.variant == FULL:
        return _evp_prod(D.frob.det(), e)
    if sub.variant == DTHETA and kind != SCALAR:
        raise WrongSubmoduleForClass("D_theta only exists when phi^f is scalar")
    if sub.variant == D1 and kind in (NONSEMISIMPLE, "Monodromy"):
        raise WrongSubmoduleForClass("D1 is not phi,N-stable for this module")
    if sub.variant == D2:
        return _evp_prod(D.frob.d, e)
    return _evp_prod(D.frob.a, e)


def _on_line(u, v, x, y) -> bool:
    return u * y == v * x


def t_hodge(F: FiltrationData, sub: SubmoduleDescriptor) -> int:
    """Sum over embeddings of the jumps of the induced filtration."""
    s, k = F.offsets, F.weights.k
    if sub.variant == ZERO:
        return 0
    if sub.variant == FULL:
        return sum(2 * a + b for a, b in zip(s, k))
    total = sum(s)
    line = sub.line()
    if line is None:  # generic theta meets no filtration line
        return total
    u, v = line
    for i in F.weights.positive:
        if _on_line(u, v, F.x[i], F.y[i]):
            total += k[i]
    return total


def relevant_constants(F: FiltrationData) -> list[FieldElement]:
    """Distinct y_i / x_i over the positive-weight coordinates with both nonzero."""
    out = []
    for i in sorted(F.weights.positive & F.Jx & F.Jy):
        c = F.y[i] / F.x[i]
        if c not in out:
            out.append(c)
    return out


def submodule_lattice(D: FilteredModule) -> list[SubmoduleDescriptor]:
    kind = _kind(D)
    if kind in (NONSEMISIMPLE, "Monodromy"):
        return [SubmoduleDescriptor(ZERO), SubmoduleDescriptor(D2), SubmoduleDescriptor(FULL)]
    out = [SubmoduleDescriptor(ZERO), SubmoduleDescriptor(D1), SubmoduleDescriptor(D2)]
    if kind == SCALAR:
        out += [SubmoduleDescriptor(DTHETA, c) for c in relevant_constants(D.filtration)]
        out.append(SubmoduleDescriptor(DTHETA))
    out.append(SubmoduleDescriptor(FULL))
    return out


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class SubmoduleCheck:
    sub: SubmoduleDescriptor
    tN: Fraction
    tH: int
    galois_stable: bool

    @property
    def ok(self) -> bool:
        return self.tH <= self.tN

    @property
    def tight(self) -> bool:
        return self.tH == self.tN

    def to_json(self):
        return {
            "submodule": self.sub.to_json(),
            "tN": fstr(self.tN),
            "tH": fstr(Fraction(self.tH)),
            "ok": self.ok,
            "tight": self.tight,
            "galois_stable": self.galois_stable,
        }


@dataclass(frozen=True)
class Condition:
    name: str
    relation: str  # "=" or ">="
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs if self.relation == "=" else self.lhs >= self.rhs

    @property
    def strict(self) -> bool:
        return self.relation == ">=" and self.lhs > self.rhs

    def to_json(self):
        return {
            "name": self.name,
            "relation": self.relation,
            "lhs": fstr(Fraction(self.lhs)),
            "rhs": fstr(Fraction(self.rhs)),
            "holds": self.holds,
        }


@dataclass(frozen=True)
class WAReport:
    case: str
    f_class: str
    tN: Fraction
    tH: int
    submodules: tuple[SubmoduleCheck, ...]
    conditions: tuple[Condition, ...]
    wa: bool
    reducibility: str | None
    witnesses: tuple[SubmoduleDescriptor, ...]
    galois_type: dict
    notes: tuple[str, ...] = field(default=())

    def to_json(self):
        return {
            "case": self.case,
            "f_class": self.f_class,
            "tN": fstr(self.tN),
            "tH": fstr(Fraction(self.tH)),
            "submodules": [s.to_json() for s in self.submodules],
            "conditions": [c.to_json() for c in self.conditions],
            "wa": self.wa,
            "reducibility": None
            if self.reducibility is None
            else {"class": self.reducibility, "witnesses": [w.to_json() for w in self.witnesses]},
            "galois_type": self.galois_type,
            "notes": list(self.notes),
        }


_CASES = {
    SPLIT: "SplitDiag",
    "VectorDiagonal": "VectorDiagonal",
    SCALAR: "FScalar",
    NONSEMISIMPLE: "NonFSemisimple",
    "Monodromy": "Semistable",
}
_F_CLASS = {
    SPLIT: "FSemisimpleNonScalar",
    "VectorDiagonal": "FSemisimpleNonScalar",
    "Monodromy": "FSemisimpleNonScalar",
    SCALAR: "FScalar",
    NONSEMISIMPLE: "NonFSemisimple",
}


def _line_is_stable(D: FilteredModule, line) -> bool:
    u, v = line
    for M in D.galois:
        for i in range(M.f):
            (a, b), (c, d) = M.at(i)
            if not _on_line(u, v, a * u + b * v, c * u + d * v):
                return False
    return True


def _all_scalar(D: FilteredModule) -> bool:
    return all(
        M.b.is_zero() and M.c.is_zero() and M.a == M.d for M in D.galois
    )


def _galois_stable(D: FilteredModule, sub: SubmoduleDescriptor) -> bool:
    if not sub.proper:
        return True
    if sub.generic:
        return _all_scalar(D)
    return _line_is_stable(D, sub.line())


def _conditions(kind: str, checks: dict, lattice) -> list[Condition]:
    full = checks[FULL]
    out = [Condition("i", "=", full.tN, full.tH)]
    if kind in ("Monodromy", NONSEMISIMPLE):
        out.append(Condition("ii", ">=", checks[D2].tN, checks[D2].tH))
        return out
    out.append(Condition("ii", ">=", checks[D1].tN, checks[D1].tH))
    out.append(Condition("iii", ">=", checks[D2].tN, checks[D2].tH))
    if kind == SCALAR:
        thetas = [checks[str(s)] for s in lattice if s.variant == DTHETA]
        out.append(Condition("iv", ">=", thetas[0].tN, max(t.tH for t in thetas)))
    return out


def galois_type_label(D: FilteredModule) -> dict:
    kind = _kind(D)
    if kind == "Monodromy":
        out = {"label": SPECIAL}
    elif kind == SCALAR:
        mats = D.galois
        abelian = all(A * B == B * A for A in mats for B in mats)
        out = {"label": SC_OR_PRINCIPAL, "lambda_abelian": abelian}
    else:
        out = {"label": PRINCIPAL}
    if D.ext.p == 2:
        return {"label": NOT_LABELED, "underlying": out}
    return out


def check_wa(D: FilteredModule, normalize: bool = True) -> WAReport:
    """Decide weak admissibility and classify reducibility.

    With ``normalize`` the module is first brought to a presented basis;
    otherwise a non-presented module raises NotCanonicalized.
    """
    if not is_presented(D):
        if not normalize:
            raise NotCanonicalized("module is not in a presented basis")
        D = normalize_module(D).module
    if not check_g_stable(D):
        raise UnstableFiltration("filtration is not stable under the Galois action")
    kind = _kind(D)
    F = D.filtration
    lattice = submodule_lattice(D)
    checks = {}
    rows = []
    for sub in lattice:
        c = SubmoduleCheck(sub, t_newton(D, sub), t_hodge(F, sub), _galois_stable(D, sub))
        checks[str(sub) if sub.variant == DTHETA else sub.variant] = c
        rows.append(c)
    full = checks[FULL]
    wa = full.tight and all(c.ok for c in rows)
    reducibility, witnesses = None, ()
    if wa:
        tight = [c.sub for c in rows if c.sub.proper and c.tight]
        if not tight:
            reducibility = IRREDUCIBLE
        elif len(tight) == 1 and not tight[0].generic:
            reducibility, witnesses = NON_SPLIT, (tight[0],)
        else:
            reducibility, witnesses = SPLIT_REDUCIBLE, tuple(tight[:2])
    notes = []
    if D.field.certificate in ("attested",):
        notes.append("p-adic valuation relies on an attested single-prime field")
    if kind == SCALAR and wa and reducibility != IRREDUCIBLE:
        if not all(_galois_stable(D, w) for w in witnesses):
            notes.append("a witness submodule is not Galois-stable")
    return WAReport(
        case=_CASES[kind],
        f_class=_F_CLASS[kind],
        tN=full.tN,
        tH=full.tH,
        submodules=tuple(rows),
        conditions=tuple(_conditions(kind, checks, lattice)),
        wa=wa,
        reducibility=reducibility,
        witnesses=witnesses,
        galois_type=galois_type_label(D),
        notes=tuple(notes),
    )

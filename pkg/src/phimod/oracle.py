"""Brute-force reference computations used to cross-check the closed forms.

Nothing here relies on canonical forms:

* Hodge numbers come from building every filtration step as an explicit
  subspace of E^2 per embedding and counting dimension drops.
* The submodule lattice is probed by testing candidate lines for phi- and
  N-stability directly, with Newton numbers read off phi on the line.
* Isomorphism is decided on the raw matrices with all 4f coordinates of Q
  as unknowns and the Frobenius equation included in the linear system.
"""
from __future__ import annotations

from fractions import Fraction

from .exactfield import vp
from .filtration import FilteredModule, FiltrationData
from .isoclass import find_invertible, intertwiner_failures, solution_space
from .linalg import rank
from .productring import Mat2F, VecF


def _span_rank(spec, vectors):
    return rank([list(v) for v in vectors], 2) if vectors else 0


def filtration_step(F: FiltrationData, i: int, j: int):
    """Spanning vectors of Fil^j at sigma_i (jumps at s_i and s_i + k_i)."""
    spec = F.x.spec
    s, k = F.offsets[i], F.weights.k[i]
    if j <= s:
        return [(spec.one, spec.zero), (spec.zero, spec.one)]
    if j <= s + k:
        return [(F.x[i], F.y[i])]
    return []


def brute_hodge(F: FiltrationData, line_at=None) -> int:
    """sum_j j * dim gr^j of the filtration induced on a subspace.

    ``line_at(i)`` gives a spanning vector of the subspace at sigma_i, or
    None for the whole space.
    """
    spec = F.x.spec
    total = 0
    for i in range(F.weights.m):
        lo = min(0, F.offsets[i])
        top = F.offsets[i] + F.weights.k[i] + 1
        sub = None if line_at is None else [line_at(i)]
        dims = []
        levels = range(lo, top + 1)
        for j in levels:
            step = filtration_step(F, i, j)
            if sub is None:
                dims.append(_span_rank(spec, step))
            else:
                # dim(sub ∩ step) = dim sub + dim step - dim(sub + step)
                dims.append(1 + _span_rank(spec, step) - _span_rank(spec, sub + step))
        # dim Fil^j drops by dim gr^j between j and j + 1
        for t in range(len(dims) - 1):
            total += levels[t] * (dims[t] - dims[t + 1])
    return total


def _is_phi_stable_line(D: FilteredModule, v) -> bool:
    u, w = v
    for i in range(D.f):
        (a, b), (c, d) = D.frob.at(i)
        if (a * u + b * w) * w != (c * u + d * w) * u:
            return False
    return True


def _is_n_stable_line(D: FilteredModule, v) -> bool:
    u, w = v
    for i in range(D.f):
        (a, b), (c, d) = D.monodromy.at(i)
        if (a * u + b * w) * w != (c * u + d * w) * u:
            return False
    return True


def _line_newton(D: FilteredModule, v) -> Fraction:
    u, w = v
    prod = D.field.one
    for i in range(D.f):
        (a, b), (c, d) = D.frob.at(i)
        img = (a * u + b * w, c * u + d * w)
        lam = img[0] / u if not u.is_zero() else img[1] / w
        prod = prod * lam
    return D.ext.e * vp(prod)


def _full_newton(D: FilteredModule) -> Fraction:
    prod = D.field.one
    for x in D.frob.det():
        prod = prod * x
    return D.ext.e * vp(prod)


def candidate_lines(D: FilteredModule):
    """(1,0), (0,1), (1, c) for the filtration ratios and two fresh ratios."""
    spec = D.field
    one, zero = spec.one, spec.zero
    out = [(one, zero), (zero, one)]
    ratios = []
    for i in sorted(D.weights.positive):
        if not D.x[i].is_zero() and not D.y[i].is_zero():
            r = D.y[i] / D.x[i]
            if r not in ratios:
                ratios.append(r)
    fresh, t = [], 1
    while len(fresh) < 2:
        c = spec(t)
        if c not in ratios:
            fresh.append(c)
        t += 1
    return out + [(one, r) for r in ratios] + [(one, c) for c in fresh], len(ratios)


def brute_wa(D: FilteredModule):
    """(wa, reducibility class or None, list of tight proper lines).

    Expects constant-coordinate stable lines, which holds for presented
    modules.
    """
    F = D.filtration
    tN, tH = _full_newton(D), brute_hodge(F)
    if tN != tH:
        return False, None, []
    lines, _ = candidate_lines(D)
    tight = []
    for v in lines:
        if not (_is_phi_stable_line(D, v) and _is_n_stable_line(D, v)):
            continue
        n = _line_newton(D, v)
        h = brute_hodge(F, lambda i, v=v: v)
        if h > n:
            return False, None, []
        if h == n:
            tight.append(v)
    if not tight:
        return True, "Irreducible", []
    if len(tight) == 1:
        return True, "NonSplitReducible", tight
    return True, "SplitReducible", tight


def brute_isomorphic(D1: FilteredModule, D2: FilteredModule):
    """(isomorphic, witness) from the full 4f-dimensional ansatz."""
    if D1.weights != D2.weights or D1.offsets != D2.offsets:
        return False, None
    spec, f = D1.field, D1.f
    basis = []
    for slot in range(4):
        for i in range(f):
            ents = [VecF.zeros(spec, f) for _ in range(4)]
            e = [spec.zero] * f
            e[i] = spec.one
            ents[slot] = VecF._raw(spec, e)
            basis.append(Mat2F(*ents))
    sols = solution_space(D1, D2, basis, with_phi=True)
    Q = find_invertible(sols)
    if Q is None:
        return False, None
    assert not intertwiner_failures(D1, D2, Q)
    return True, Q

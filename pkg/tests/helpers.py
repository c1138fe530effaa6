"""Shared constructors for the test suite."""
from phimod.descent import HOMO, FiltrationSeed, GaloisActionData, build_stable_filtration
from phimod.extension import s3_group
from phimod.filtration import FilteredModule, weight_profile
from phimod.phimodule import SCALAR, canonical_matrix
from phimod.productring import Mat2F


def s3_standard_rep(E):
    """2-dimensional standard representation of the S3 in ``s3_group``,
    compatible with its multiplication table."""
    ext, grp = s3_group(E.prime)
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]

    def perm_matrix_t(a):
        # transpose of e_x -> e_{a(x)}
        return [[1 if a[c] == r else 0 for c in range(3)] for r in range(3)]

    def restrict(M):
        # basis u1 = e0 - e1, u2 = e1 - e2 of the sum-zero plane (M is transposed)
        T = [[M[c][r] for c in range(3)] for r in range(3)]
        imgs = []
        for u in ((1, -1, 0), (0, 1, -1)):
            w = [sum(T[r][c] * u[c] for c in range(3)) for r in range(3)]
            # w = s u1 + t u2: s = w0, t = -w2
            imgs.append((w[0], -w[2]))
        (s1, t1), (s2, t2) = imgs
        return ((E(s1), E(s2)), (E(t1), E(t2)))

    lam = tuple(restrict(perm_matrix_t(a)) for a in perms)
    return ext, grp, GaloisActionData(HOMO, lam=lam)


def s3_module(E, alpha, k, seed):
    ext, grp, act = s3_standard_rep(E)
    frob = canonical_matrix(SCALAR, E(alpha), E(alpha), E, ext.f)
    w = weight_profile([k] * ext.m)
    x, y = build_stable_filtration(grp, act, w, FiltrationSeed(((0, E(seed[0]), E(seed[1])),)))
    return FilteredModule(E, ext, grp, frob, Mat2F.zero(E, ext.f), act.matrices(E, ext.f), w, x, y)

"""Extension data for L/K and the action of Gal(L/K) on embeddings.

The group is given combinatorially: a multiplication table, for each g a
permutation pi(g) of {0, ..., m-1}, and the shift n(g) by which g acts on
L0.  Conventions:

* g acts on E^m by ``g(x)_i = x_{pi(g)(i)}`` and on E^f by a shift of n(g);
* pi(g1 g2) = pi(g2) o pi(g1), which makes the action on E^m a left action;
* on index sets, ``gJ = pi(g)^{-1}(J)`` so that g(f_J) = f_{gJ}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .errors import SchemaError, ValidationError
from .productring import Mat2F, VecF, VecM, phi_shift


@dataclass(frozen=True)
class ExtensionSpec:
    p: int
    f: int
    e: int
    nu: int

    @property
    def m(self) -> int:
        return self.e * self.f

    def check(self) -> None:
        if self.f < 1 or self.e < 1 or self.nu < 1:
            raise SchemaError("extension: f, e and nu must be positive")
        if self.m % self.nu:
            raise SchemaError(f"extension: nu = {self.nu} does not divide m = {self.m}")


@dataclass(frozen=True)
class GaloisGroupSpec:
    elements: tuple[str, ...]
    mult: tuple[tuple[int, ...], ...]
    pi: tuple[tuple[int, ...], ...]
    n: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise SchemaError(f"unknown group element {name!r}") from None

    def mul(self, g: int, h: int) -> int:
        return self.mult[g][h]

    def inverse(self, g: int) -> int:
        for h in range(self.order):
            if self.mult[g][h] == 0:
                return h
        raise ValidationError(f"element {self.elements[g]} has no inverse")

    def power(self, g: int, k: int) -> int:
        out = 0
        for _ in range(k):
            out = self.mul(out, g)
        return out

    def to_json(self, ext: ExtensionSpec) -> dict:
        names = self.elements
        return {
            "p": ext.p,
            "f": ext.f,
            "e": ext.e,
            "nu": ext.nu,
            "elements": list(names),
            "mult": [[names[x] for x in row] for row in self.mult],
            "pi": {names[g]: list(self.pi[g]) for g in range(self.order)},
            "n": {names[g]: self.n[g] for g in range(self.order)},
        }


@dataclass
class ValidationReport:
    ok: bool
    failures: list[str] = field(default_factory=list)

    @property
    def first_failure(self) -> str | None:
        return self.failures[0] if self.failures else None

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures)}


@dataclass(frozen=True)
class OrbitDecomposition:
    orbits: tuple[frozenset[int], ...]
    representatives: tuple[int, ...]

    def orbit_of(self, i: int) -> int:
        for k, orb in enumerate(self.orbits):
            if i in orb:
                return k
        raise ValueError(i)


def extension_from_json(obj) -> tuple[ExtensionSpec, GaloisGroupSpec]:
    if not isinstance(obj, dict):
        raise SchemaError("extension: expected an object")
    for key in ("p", "f", "e", "nu"):
        if not isinstance(obj.get(key), int) or isinstance(obj.get(key), bool):
            raise SchemaError(f"extension: {key!r} must be an integer")
    ext = ExtensionSpec(obj["p"], obj["f"], obj["e"], obj["nu"])
    ext.check()
    if "elements" not in obj:
        return ext, trivial_group(ext)
    names = obj["elements"]
    if not isinstance(names, list) or not names or len(set(names)) != len(names):
        raise SchemaError("extension: elements must be a nonempty list of distinct names")
    names = [str(x) for x in names]
    idx = {nm: k for k, nm in enumerate(names)}

    def look(x):
        if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < len(names):
            return x
        if str(x) in idx:
            return idx[str(x)]
        raise SchemaError(f"extension: unknown element {x!r} in multiplication table")

    mult = obj.get("mult")
    if not isinstance(mult, list) or len(mult) != len(names):
        raise SchemaError("extension: mult must be a |G| x |G| table")
    table = []
    for row in mult:
        if not isinstance(row, list) or len(row) != len(names):
            raise SchemaError("extension: mult must be a |G| x |G| table")
        table.append(tuple(look(x) for x in row))
    pi_obj, n_obj = obj.get("pi"), obj.get("n")
    if not isinstance(pi_obj, dict) or not isinstance(n_obj, dict):
        raise SchemaError("extension: pi and n must be objects keyed by element name")
    try:
        pi = tuple(tuple(int(x) for x in pi_obj[nm]) for nm in names)
        n = tuple(int(n_obj[nm]) % ext.f for nm in names)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"extension: bad pi/n entry ({exc})") from None
    grp = GaloisGroupSpec(tuple(names), tuple(table), pi, n)
    return ext, grp


def validate_group(ext: ExtensionSpec, grp: GaloisGroupSpec) -> ValidationReport:
    """Check every structural constraint; stop at the first failure."""

    def fail(msg):
        return ValidationReport(False, [msg])

    try:
        ext.check()
    except SchemaError as exc:
        return fail(str(exc))
    G, m, f = grp.order, ext.m, ext.f
    if G * ext.nu != m:
        return fail(f"|G| = {G} but m/nu = {m}/{ext.nu}")
    if len(grp.mult) != G or any(len(r) != G for r in grp.mult):
        return fail("multiplication table has the wrong shape")
    if any(not 0 <= x < G for r in grp.mult for x in r):
        return fail("multiplication table has out-of-range entries")
    if any(grp.mult[0][g] != g or grp.mult[g][0] != g for g in range(G)):
        return fail("first element is not the identity")
    for g, h, k in product(range(G), repeat=3):
        if grp.mult[grp.mult[g][h]][k] != grp.mult[g][grp.mult[h][k]]:
            return fail("multiplication is not associative")
    for g in range(G):
        if 0 not in grp.mult[g]:
            return fail(f"{grp.elements[g]} has no inverse")
    if len(grp.pi) != G or len(grp.n) != G:
        return fail("pi or n is missing elements")
    for g in range(G):
        if sorted(grp.pi[g]) != list(range(m)):
            return fail(f"pi({grp.elements[g]}) is not a permutation of range(m)")
    if any(x != i for i, x in enumerate(grp.pi[0])):
        return fail("pi(identity) is not the identity")
    for g, h in product(range(G), repeat=2):
        gh = grp.mult[g][h]
        comp = tuple(grp.pi[h][grp.pi[g][i]] for i in range(m))
        if comp != grp.pi[gh]:
            return fail(
                f"rho = pi^-1 is not a homomorphism at ({grp.elements[g]}, {grp.elements[h]})"
            )
    for g in range(1, G):
        fixed = [i for i in range(m) if grp.pi[g][i] == i]
        if fixed:
            return fail(f"action is not free: {grp.elements[g]} fixes index {fixed[0]}")
    for g in range(G):
        for s in range(m):
            if grp.pi[g][s] % f != (s % f + grp.n[g]) % f:
                return fail(
                    f"block constraint pi(g)(fi+j) = j + n(g) mod f fails for {grp.elements[g]} at {s}"
                )
    for g, h in product(range(G), repeat=2):
        if grp.n[grp.mult[g][h]] % f != (grp.n[g] + grp.n[h]) % f:
            return fail("n is not additive")
    return ValidationReport(True, [])


def require_valid(ext: ExtensionSpec, grp: GaloisGroupSpec) -> None:
    rep = validate_group(ext, grp)
    if not rep.ok:
        raise ValidationError(f"group data: {rep.first_failure}")


# ---------------------------------------------------------------------------
# constructors


def _cyclic_table(d: int):
    return tuple(tuple((a + b) % d for b in range(d)) for a in range(d))


def _cyclic_names(d: int):
    return tuple(["1"] + ["s" if k == 1 else f"s^{k}" for k in range(1, d)])


def trivial_group(ext: ExtensionSpec) -> GaloisGroupSpec:
    """L = K: nu = m."""
    return GaloisGroupSpec(("1",), ((0,),), (tuple(range(ext.m)),), (0,))


def unramified_cyclic(p: int, f: int, e: int = 1, d: int | None = None):
    """L/K unramified cyclic of degree d dividing f (default d = f).

    The generator s moves every block by f/d places: pi(s^k)(fi+j) =
    fi + (j + k f/d) mod f, with n(s) = f/d.
    """
    d = f if d is None else d
    if f % d:
        raise SchemaError("degree of an unramified subextension must divide f")
    step = f // d
    m = e * f
    ext = ExtensionSpec(p, f, e, m // d)
    pi = tuple(
        tuple(f * (s // f) + ((s % f) + k * step) % f for s in range(m)) for k in range(d)
    )
    grp = GaloisGroupSpec(_cyclic_names(d), _cyclic_table(d), pi, tuple(k * step % f for k in range(d)))
    return ext, grp


def ramified_cyclic(p: int, e: int, f: int = 1, d: int | None = None):
    """L/K totally ramified cyclic of degree d dividing e (default d = e), n = 0."""
    d = e if d is None else d
    if e % d:
        raise SchemaError("degree of a ramified subextension must divide e")
    step = e // d
    m = e * f
    ext = ExtensionSpec(p, f, e, m // d)
    pi = tuple(
        tuple(f * (((s // f) + k * step) % e) + s % f for s in range(m)) for k in range(d)
    )
    grp = GaloisGroupSpec(_cyclic_names(d), _cyclic_table(d), pi, (0,) * d)
    return ext, grp


def regular_action(p: int, f: int, e: int, elements: Sequence[str], mult, n: Sequence[int]):
    """L/Q_p Galois with group G (so nu = 1): G acts on itself by right
    multiplication, the slots with residue j mod f holding the elements with
    n(h) = j."""
    G = len(elements)
    if G != e * f:
        raise SchemaError("regular action needs |G| = ef")
    slots: dict[int, list[int]] = {j: [] for j in range(f)}
    for h in range(G):
        slots[n[h] % f].append(h)
    if any(len(v) != e for v in slots.values()):
        raise SchemaError("n must take each value mod f exactly e times")
    where = {}
    for j, hs in slots.items():
        for i, h in enumerate(hs):
            where[h] = f * i + j
    inv_where = {s: h for h, s in where.items()}
    pi = tuple(
        tuple(where[mult[inv_where[s]][g]] for s in range(G)) for g in range(G)
    )
    ext = ExtensionSpec(p, f, e, 1)
    grp = GaloisGroupSpec(tuple(elements), tuple(tuple(r) for r in mult), pi, tuple(x % f for x in n))
    return ext, grp


def s3_group(p: int):
    """S3 acting regularly with f = 2, e = 3 (n = sign)."""
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
    names = ["1", "r", "r2", "t", "tr", "tr2"]

    def compose(a, b):  # a then b as functions on {0,1,2}: (a*b)(x) = b(a(x))
        return tuple(b[a[x]] for x in range(3))

    mult = [[perms.index(compose(a, b)) for b in perms] for a in perms]
    sign = [0, 0, 0, 1, 1, 1]
    return regular_action(p, 2, 3, names, mult, sign)


# ---------------------------------------------------------------------------
# actions


def act_vecm(grp: GaloisGroupSpec, g: int, v: VecM) -> VecM:
    perm = grp.pi[g]
    return VecM._raw(v.spec, (v.entries[perm[i]] for i in range(len(v))))


def act_vecf(grp: GaloisGroupSpec, g: int, v: VecF) -> VecF:
    return phi_shift(v, grp.n[g])


def act_mat(grp: GaloisGroupSpec, g: int, M: Mat2F) -> Mat2F:
    return M.phi(grp.n[g])


def act_set(grp: GaloisGroupSpec, g: int, J: Iterable[int]) -> frozenset[int]:
    """gJ = pi(g)^{-1}(J), the support of g(f_J)."""
    J = set(J)
    return frozenset(i for i, x in enumerate(grp.pi[g]) if x in J)


def orbits(grp: GaloisGroupSpec) -> OrbitDecomposition:
    m = len(grp.pi[0])
    seen: set[int] = set()
    orbs, reps = [], []
    for i in range(m):
        if i in seen:
            continue
        orb = frozenset(grp.pi[g][i] for g in range(grp.order))
        seen |= orb
        orbs.append(orb)
        reps.append(i)
    return OrbitDecomposition(tuple(orbs), tuple(reps))

"""The product rings E^f and E^m, the Frobenius shift and 2x2 matrices over E^f.

``VecF`` (length f, indexed by embeddings of L0) and ``VecM`` (length m,
indexed by embeddings of L) are separate classes; combining one with the
other raises :class:`TypeMismatch`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import SchemaError, SingularBaseChange, TypeMismatch, WrongLength, ZeroCoordinate
from .exactfield import FieldElement, FieldSpec, element_from_json


class _Vec:
    __slots__ = ("spec", "entries")
    kind = "?"

    def __init__(self, spec: FieldSpec, entries: Iterable):
        self.spec = spec
        self.entries = tuple(spec.element(x) for x in entries)

    @classmethod
    def _raw(cls, spec, entries):
        obj = object.__new__(cls)
        obj.spec = spec
        obj.entries = tuple(entries)
        return obj

    @classmethod
    def const(cls, spec: FieldSpec, value, length: int):
        v = spec.element(value)
        return cls._raw(spec, (v,) * length)

    @classmethod
    def ones(cls, spec: FieldSpec, length: int):
        return cls.const(spec, 1, length)

    @classmethod
    def zeros(cls, spec: FieldSpec, length: int):
        return cls.const(spec, 0, length)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def _check(self, other):
        if not isinstance(other, _Vec):
            return None
        if type(other) is not type(self):
            raise TypeMismatch(f"cannot combine Vec{self.kind} with Vec{other.kind}")
        if len(other) != len(self):
            raise WrongLength(f"length {len(self)} vs {len(other)}")
        return other

    def _zip(self, other, op):
        o = self._check(other)
        if o is None:
            s = self.spec.element(other)
            return type(self)._raw(self.spec, (op(x, s) for x in self.entries))
        return type(self)._raw(self.spec, (op(x, y) for x, y in zip(self.entries, o.entries)))

    def __add__(self, other):
        return self._zip(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._zip(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._zip(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._check(other)
        if o is not None and any(y.is_zero() for y in o.entries):
            raise ZeroCoordinate("division by a vector with a zero coordinate")
        return self._zip(other, lambda x, y: x / y)

    def __neg__(self):
        return type(self)._raw(self.spec, (-x for x in self.entries))

    def __pow__(self, n: int):
        return type(self)._raw(self.spec, (x ** n for x in self.entries))

    def inverse(self):
        if not self.is_unit():
            raise ZeroCoordinate("vector has a zero coordinate")
        return type(self)._raw(self.spec, (x.inverse() for x in self.entries))

    def __eq__(self, other):
        if isinstance(other, _Vec):
            return type(other) is type(self) and self.entries == other.entries
        return NotImplemented

    def __hash__(self):
        return hash((self.kind, self.entries))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries)

    def is_unit(self) -> bool:
        return all(not x.is_zero() for x in self.entries)

    def is_constant(self) -> bool:
        return all(x == self.entries[0] for x in self.entries)

    def support(self) -> frozenset[int]:
        """J_v = indices of nonzero coordinates."""
        return frozenset(i for i, x in enumerate(self.entries) if not x.is_zero())

    def to_json(self):
        return [x.to_json() for x in self.entries]

    def __repr__(self):
        return f"Vec{self.kind}({', '.join(repr(x) for x in self.entries)})"


class VecF(_Vec):
    """Element of E^f; entry i corresponds to the embedding tau_i of L0."""

    __slots__ = ()
    kind = "F"


class VecM(_Vec):
    """Element of E^m; entry s = f*i + j corresponds to sigma_s."""

    __slots__ = ()
    kind = "M"


def vec_from_json(cls, spec: FieldSpec, obj, length: int):
    if not isinstance(obj, list):
        raise SchemaError(f"expected an array of {length} field elements")
    if len(obj) != length:
        raise WrongLength(f"expected {length} entries, got {len(obj)}")
    return cls._raw(spec, [element_from_json(spec, x) for x in obj])


def idempotent(spec: FieldSpec, J: Iterable[int], length: int, cls=VecM):
    """f_J: 1 on J and 0 elsewhere."""
    J = set(J)
    if any(not 0 <= i < length for i in J):
        raise WrongLength("index set out of range")
    one, zero = spec.one, spec.zero
    return cls._raw(spec, (one if i in J else zero for i in range(length)))


# ---------------------------------------------------------------------------
# Frobenius shift, norms, traces


def phi_shift(v: VecF, k: int = 1) -> VecF:
    """Entry i of the result is entry (i + k) mod f of v."""
    if not isinstance(v, VecF):
        raise TypeMismatch("phi_shift acts on VecF")
    f = len(v)
    return VecF._raw(v.spec, (v.entries[(i + k) % f] for i in range(f)))


def nm_phi(v: VecF) -> VecF:
    f = len(v)
    prod = v.spec.one
    for x in v.entries:
        prod = prod * x
    return VecF.const(v.spec, prod, f)


def tr_phi(v: VecF) -> VecF:
    f = len(v)
    total = v.spec.zero
    for x in v.entries:
        total = total + x
    return VecF.const(v.spec, total, f)


def tensor_e(v: VecF, e: int) -> VecM:
    """Entry f*i + j of the result is entry j of v."""
    if not isinstance(v, VecF):
        raise TypeMismatch("tensor_e acts on VecF")
    return VecM._raw(v.spec, v.entries * e)


class _NoSolution:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NoSolution"

    def __bool__(self):
        return False


NoSolution = _NoSolution()


@dataclass(frozen=True)
class Line:
    """All solutions are the E-multiples of ``generator``."""

    generator: VecF


def solve_twisted(alpha: VecF, beta: VecF):
    """Solve alpha * gamma = beta * phi(gamma) for gamma in E^f."""
    if not isinstance(alpha, VecF) or not isinstance(beta, VecF):
        raise TypeMismatch("solve_twisted takes two VecF")
    if len(alpha) != len(beta):
        raise WrongLength("alpha and beta differ in length")
    if not alpha.is_unit() or not beta.is_unit():
        raise ZeroCoordinate("alpha and beta must have all coordinates nonzero")
    if nm_phi(alpha) != nm_phi(beta):
        return NoSolution
    f = len(alpha)
    gens = [alpha.spec.one]
    for i in range(f - 1):
        gens.append(gens[-1] * alpha.entries[i] / beta.entries[i])
    return Line(VecF._raw(alpha.spec, gens))


# ---------------------------------------------------------------------------
# 2x2 matrices over E^f


class Mat2F:
    """Matrix ((a, b), (c, d)) with entries in E^f.

    Columns hold images of basis vectors, so coordinate i is an ordinary
    2x2 matrix over E.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: VecF, b: VecF, c: VecF, d: VecF):
        for x in (a, b, c, d):
            if not isinstance(x, VecF):
                raise TypeMismatch("Mat2F entries must be VecF")
        if not len(a) == len(b) == len(c) == len(d):
            raise WrongLength("Mat2F entries differ in length")
        self.a, self.b, self.c, self.d = a, b, c, d

    @property
    def spec(self) -> FieldSpec:
        return self.a.spec

    @property
    def f(self) -> int:
        return len(self.a)

    @classmethod
    def from_coords(cls, spec: FieldSpec, blocks: Sequence) -> "Mat2F":
        """Build from a list of per-coordinate 2x2 matrices ((a, b), (c, d))."""
        cols = [[], [], [], []]
        for (a, b), (c, d) in blocks:
            for k, x in enumerate((a, b, c, d)):
                cols[k].append(spec.element(x))
        return cls(*(VecF._raw(spec, col) for col in cols))

    @classmethod
    def const(cls, spec: FieldSpec, f: int, a, b, c, d) -> "Mat2F":
        return cls(*(VecF.const(spec, x, f) for x in (a, b, c, d)))

    @classmethod
    def identity(cls, spec: FieldSpec, f: int) -> "Mat2F":
        return cls.const(spec, f, 1, 0, 0, 1)

    @classmethod
    def zero(cls, spec: FieldSpec, f: int) -> "Mat2F":
        return cls.const(spec, f, 0, 0, 0, 0)

    @classmethod
    def diag(cls, x: VecF, y: VecF) -> "Mat2F":
        z = VecF.zeros(x.spec, len(x))
        return cls(x, z, z, y)

    def at(self, i: int):
        return ((self.a[i], self.b[i]), (self.c[i], self.d[i]))

    def coords(self):
        return [self.at(i) for i in range(self.f)]

    def __mul__(self, o):
        if isinstance(o, Mat2F):
            return Mat2F(
                self.a * o.a + self.b * o.c,
                self.a * o.b + self.b * o.d,
                self.c * o.a + self.d * o.c,
                self.c * o.b + self.d * o.d,
            )
        if isinstance(o, (VecF, FieldElement, int, Fraction)):
            return Mat2F(self.a * o, self.b * o, self.c * o, self.d * o)
        return NotImplemented

    def __rmul__(self, o):
        if isinstance(o, (VecF, FieldElement, int, Fraction)):
            return self * o
        return NotImplemented

    def __add__(self, o: "Mat2F") -> "Mat2F":
        return Mat2F(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: "Mat2F") -> "Mat2F":
        return Mat2F(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return Mat2F(-self.a, -self.b, -self.c, -self.d)

    def apply(self, x: VecF, y: VecF):
        """Matrix times the column (x, y)."""
        return self.a * x + self.b * y, self.c * x + self.d * y

    def det(self) -> VecF:
        return self.a * self.d - self.b * self.c

    def is_invertible(self) -> bool:
        return self.det().is_unit()

    def inverse(self) -> "Mat2F":
        dt = self.det()
        if not dt.is_unit():
            raise SingularBaseChange("matrix is not invertible in every coordinate")
        inv = dt.inverse()
        return Mat2F(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def phi(self, k: int = 1) -> "Mat2F":
        return Mat2F(phi_shift(self.a, k), phi_shift(self.b, k), phi_shift(self.c, k), phi_shift(self.d, k))

    def trace(self) -> VecF:
        return self.a + self.d

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in (self.a, self.b, self.c, self.d))

    def is_constant(self) -> bool:
        return all(x.is_constant() for x in (self.a, self.b, self.c, self.d))

    def __eq__(self, o):
        if not isinstance(o, Mat2F):
            return NotImplemented
        return self.a == o.a and self.b == o.b and self.c == o.c and self.d == o.d

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json(), "c": self.c.to_json(), "d": self.d.to_json()}

    @classmethod
    def from_json(cls, spec: FieldSpec, obj, f: int) -> "Mat2F":
        if not isinstance(obj, dict) or set(obj) != {"a", "b", "c", "d"}:
            raise SchemaError("matrix: expected an object with keys a, b, c, d")
        return cls(*(vec_from_json(VecF, spec, obj[k], f) for k in "abcd"))

    def __repr__(self):
        return f"Mat2F(a={self.a!r}, b={self.b!r}, c={self.c!r}, d={self.d!r})"


def nm_phi_mat(M: Mat2F) -> Mat2F:
    """M * phi(M) * ... * phi^{f-1}(M)."""
    out = M
    for k in range(1, M.f):
        out = out * M.phi(k)
    return out


def mat_coord_mul(A, B):
    """Product of two plain 2x2 matrices over E given as nested tuples."""
    (a, b), (c, d) = A
    (e, f), (g, h) = B
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat_coord_inv(A):
    (a, b), (c, d) = A
    dt = a * d - b * c
    if dt.is_zero():
        raise SingularBaseChange("singular 2x2 matrix")
    return ((d / dt, -b / dt), (-c / dt, a / dt))

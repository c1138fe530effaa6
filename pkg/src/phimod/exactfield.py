"""Exact arithmetic in a number field E = Q[x]/(m(x)) with one prime above p.

Elements are tuples of :class:`fractions.Fraction` coefficients (constant
first) reduced modulo the monic defining polynomial.  The p-adic valuation
is read off the field norm, which is correct because the field spec carries
a certificate that m stays irreducible over Q_p.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    DivisionByZero,
    FieldTooSmall,
    InvalidWitness,
    SchemaError,
    SpecMismatch,
    UncertifiedField,
    ZeroElement,
)

Rational = Union[int, Fraction]


# ---------------------------------------------------------------------------
# rational helpers


def fstr(q: Rational) -> str:
    """Canonical "num/den" string."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise SchemaError(f"expected a rational, got {s!r}")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"malformed rational {s!r}") from None
    raise SchemaError(f"expected a rational, got {s!r}")


def vp_rational(q: Rational, p: int) -> int:
    q = Fraction(q)
    if q == 0:
        raise ZeroElement("valuation of zero")
    v = 0
    n, d = abs(q.numerator), q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _integer_nth_root(n: int, k: int) -> int | None:
    from sympy import integer_nthroot

    r, exact = integer_nthroot(n, k)
    return int(r) if exact else None


def rational_nth_root(q: Rational, n: int) -> Fraction | None:
    """Return r in Q with r**n == q, or None."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    sign = 1
    if q < 0:
        if n % 2 == 0:
            return None
        sign = -1
    a = _integer_nth_root(abs(q.numerator), n)
    b = _integer_nth_root(q.denominator, n)
    if a is None or b is None:
        return None
    return sign * Fraction(a, b)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# dense polynomials over Q, lists constant-first, trimmed


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = _trim([Fraction(c) for c in a])
    b = _trim([Fraction(c) for c in b])
    if not b:
        raise DivisionByZero("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        t = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = t
        for i, c in enumerate(b):
            a[i + shift] -= t * c
        a.pop()
        _trim(a)
    return _trim(q), a


def resultant(f: Sequence[Rational], g: Sequence[Rational]) -> Fraction:
    """Resultant of two polynomials over Q via the Euclidean recurrence."""
    f = _trim([Fraction(c) for c in f])
    g = _trim([Fraction(c) for c in g])
    if not f or not g:
        return Fraction(0)
    acc = Fraction(1)
    while True:
        n, k = len(f) - 1, len(g) - 1
        if k == 0:
            return acc * g[0] ** n
        _, r = _poly_divmod(f, g)
        if not r:
            return Fraction(0)
        if (n * k) % 2:
            acc = -acc
        acc *= g[-1] ** (n - (len(r) - 1))
        f, g = g, r


def _poly_mod_p(coeffs: Sequence[int], p: int) -> list[int]:
    return [c % p for c in coeffs]


def is_eisenstein(poly: Sequence[int], p: int) -> bool:
    d = len(poly) - 1
    if d < 1 or poly[-1] % p == 0:
        return False
    if any(c % p for c in poly[:-1]):
        return False
    return poly[0] % (p * p) != 0


def is_irreducible_mod_p(poly: Sequence[int], p: int) -> bool:
    if poly[-1] % p == 0:
        return False
    if len(poly) == 2:
        return True
    from sympy import Poly, symbols

    x = symbols("x")
    P = Poly(list(reversed(_poly_mod_p(poly, p))), x, modulus=p)
    return bool(P.is_irreducible)


def is_irreducible_over_q(poly: Sequence[int]) -> bool:
    if len(poly) == 2:
        return True
    from sympy import Poly, symbols

    x = symbols("x")
    return bool(Poly(list(reversed(list(poly))), x, domain="QQ").is_irreducible)


# ---------------------------------------------------------------------------
# field spec


@dataclass(frozen=True)
class FieldSpec:
    """Q[x]/(m) with p-adic data.

    ``certificate`` is one of ``rational``, ``eisenstein``,
    ``irreducible-mod-p``, ``attested`` or ``none``; only the last leaves
    ``p_indecomposable`` false.
    """

    prime: int
    defining_poly: tuple[int, ...]
    p_indecomposable: bool
    certificate: str

    @property
    def p(self) -> int:
        return self.prime

    @property
    def degree(self) -> int:
        return len(self.defining_poly) - 1

    @classmethod
    def create(cls, p: int, min_poly: Iterable[int], attest: bool = False) -> "FieldSpec":
        poly = tuple(int(c) for c in min_poly)
        if not _is_prime(p):
            raise SchemaError(f"p = {p} is not prime")
        if len(poly) < 2:
            raise SchemaError("defining polynomial must have degree >= 1")
        if poly[-1] != 1:
            raise SchemaError("defining polynomial must be monic (constant-first coefficients)")
        if len(poly) == 2:
            return cls(p, poly, True, "rational")
        if is_eisenstein(poly, p):
            return cls(p, poly, True, "eisenstein")
        if is_irreducible_mod_p(poly, p):
            return cls(p, poly, True, "irreducible-mod-p")
        if attest:
            # irreducibility over Q_p implies irreducibility over Q
            return cls(p, poly, True, "attested")
        if not is_irreducible_over_q(poly):
            raise SchemaError("defining polynomial is reducible over the rationals")
        return cls(p, poly, False, "none")

    @classmethod
    def rationals(cls, p: int) -> "FieldSpec":
        return cls.create(p, (0, 1))

    @classmethod
    def quadratic(cls, p: int, c: int, attest: bool = False) -> "FieldSpec":
        """E = Q(sqrt(c))."""
        return cls.create(p, (-c, 0, 1), attest=attest)

    # element constructors
    def __call__(self, value) -> "FieldElement":
        return self.element(value)

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise SpecMismatch("element belongs to a different field")
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return FieldElement._raw(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))
        if isinstance(value, str):
            return self.element(parse_rational(value))
        if isinstance(value, (list, tuple)):
            coeffs = [parse_rational(c) for c in value]
            return FieldElement._raw(self, _reduce(self.defining_poly, coeffs))
        raise SchemaError(f"cannot build a field element from {value!r}")

    @property
    def zero(self) -> "FieldElement":
        return self.element(0)

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    @property
    def gen(self) -> "FieldElement":
        """The class theta of x."""
        return self.element([0, 1])

    def to_json(self) -> dict:
        return {"p": self.prime, "min_poly": list(self.defining_poly), "certified": self.p_indecomposable}

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        if not isinstance(obj, dict):
            raise SchemaError("field: expected an object")
        for key in ("p", "min_poly"):
            if key not in obj:
                raise SchemaError(f"field: missing key {key!r}")
        p, poly = obj["p"], obj["min_poly"]
        if not isinstance(p, int) or not isinstance(poly, list) or not all(isinstance(c, int) for c in poly):
            raise SchemaError("field: p must be an int and min_poly a list of ints")
        certified = obj.get("certified", False)
        spec = cls.create(p, poly, attest=bool(certified))
        return spec


def _reduce(poly: tuple[int, ...], coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    d = len(poly) - 1
    c = [Fraction(x) for x in coeffs]
    for k in range(len(c) - 1, d - 1, -1):
        t = c[k]
        if t:
            for i in range(d):
                if poly[i]:
                    c[k - d + i] -= t * poly[i]
        c[k] = Fraction(0)
    c = c[:d] + [Fraction(0)] * (d - len(c))
    return tuple(c)


# ---------------------------------------------------------------------------
# elements


class FieldElement:
    __slots__ = ("spec", "c")

    def __init__(self, spec: FieldSpec, coeffs: Sequence[Rational]):
        self.spec = spec
        self.c = _reduce(spec.defining_poly, [Fraction(x) for x in coeffs])

    @classmethod
    def _raw(cls, spec: FieldSpec, c: tuple[Fraction, ...]) -> "FieldElement":
        obj = object.__new__(cls)
        obj.spec = spec
        obj.c = c
        return obj

    # coercion
    def _other(self, b) -> "FieldElement":
        if isinstance(b, FieldElement):
            if b.spec is not self.spec and b.spec != self.spec:
                raise SpecMismatch("operands live in different fields")
            return b
        if isinstance(b, (int, Fraction)) and not isinstance(b, bool):
            return self.spec.element(b)
        raise TypeError(f"unsupported operand {b!r}")

    def __add__(self, b):
        try:
            b = self._other(b)
        except TypeError:
            return NotImplemented
        return FieldElement._raw(self.spec, tuple(x + y for x, y in zip(self.c, b.c)))

    __radd__ = __add__

    def __sub__(self, b):
        try:
            b = self._other(b)
        except TypeError:
            return NotImplemented
        return FieldElement._raw(self.spec, tuple(x - y for x, y in zip(self.c, b.c)))

    def __rsub__(self, b):
        try:
            b = self._other(b)
        except TypeError:
            return NotImplemented
        return b - self

    def __neg__(self):
        return FieldElement._raw(self.spec, tuple(-x for x in self.c))

    def __mul__(self, b):
        try:
            b = self._other(b)
        except TypeError:
            return NotImplemented
        d = len(self.c)
        if d == 1:
            return FieldElement._raw(self.spec, (self.c[0] * b.c[0],))
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        prod[i + j] += x * y
        return FieldElement._raw(self.spec, _reduce(self.spec.defining_poly, prod))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("division by zero in E")
        if len(self.c) == 1:
            return FieldElement._raw(self.spec, (1 / self.c[0],))
        # extended Euclid: s*a + t*m = 1
        m = [Fraction(c) for c in self.spec.defining_poly]
        r0, r1 = m, _trim(list(self.c))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            s_new = _poly_sub(s0, _poly_mul(q, s1))
            r0, r1, s0, s1 = r1, r, s1, s_new
        inv_c = 1 / r1[0]
        return FieldElement(self.spec, [x * inv_c for x in s1])

    def __truediv__(self, b):
        try:
            b = self._other(b)
        except TypeError:
            return NotImplemented
        return self * b.inverse()

    def __rtruediv__(self, b):
        try:
            b = self._other(b)
        except TypeError:
            return NotImplemented
        return b * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.spec.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, b):
        if isinstance(b, FieldElement):
            return self.c == b.c and (b.spec is self.spec or b.spec == self.spec)
        if isinstance(b, (int, Fraction)) and not isinstance(b, bool):
            return self.c[0] == b and not any(self.c[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.c[0]

    def norm(self) -> Fraction:
        """Norm to Q, computed as the resultant of m with the representative."""
        return resultant(self.spec.defining_poly, self.c)

    def trace(self) -> Fraction:
        d = self.spec.degree
        total = Fraction(0)
        basis = self.spec.one
        theta = self.spec.gen
        for i in range(d):
            total += (self * basis).c[i]
            basis = basis * theta
        return total

    def to_json(self) -> list[str]:
        return [fstr(x) for x in self.c]

    def __repr__(self):
        terms = []
        for i, x in enumerate(self.c):
            if x:
                s = str(x)
                terms.append(s if i == 0 else f"{s}*t" + (f"^{i}" if i > 1 else ""))
        return "FieldElement(" + (" + ".join(terms) or "0") + ")"

    __str__ = __repr__


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def element_from_json(spec: FieldSpec, obj) -> FieldElement:
    if isinstance(obj, list):
        if len(obj) > spec.degree:
            raise SchemaError(f"element has {len(obj)} coefficients, field degree is {spec.degree}")
        return spec.element(obj)
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        return spec.element(parse_rational(obj))
    raise SchemaError(f"malformed field element {obj!r}")


# ---------------------------------------------------------------------------
# valuation and roots


def vp(a: FieldElement) -> Fraction:
    """p-adic valuation normalized by vp(p) = 1."""
    if a.is_zero():
        raise ZeroElement("vp of zero")
    if not a.spec.p_indecomposable:
        raise UncertifiedField("field has no certificate of a single prime above p")
    if a.is_rational():
        return Fraction(vp_rational(a.c[0], a.spec.prime))
    return Fraction(vp_rational(a.norm(), a.spec.prime), a.spec.degree)


def nth_root_with_source(a: FieldElement, n: int, witness: FieldElement | None = None):
    """Return ``(r, source)`` with r**n == a; source names how r was found."""
    if n < 1:
        raise ValueError("n must be positive")
    spec = a.spec
    if witness is not None:
        w = spec.element(witness)
        if w ** n != a:
            raise InvalidWitness(f"witness^{n} != a")
        return w, "witness"
    if n == 1:
        return a, "rational" if a.is_rational() else "identity"
    if a.is_rational():
        r = rational_nth_root(a.c[0], n)
        if r is not None:
            return spec.element(r), "rational"
    if a.is_zero():
        return spec.zero, "rational"
    theta = spec.gen
    d = spec.degree
    if d > 1:
        tk = spec.one
        for k in range(1, n * d + 1):
            tk = tk * theta
            if tk.is_zero():
                break
            quotient = a / tk ** n
            if quotient.is_rational():
                c = rational_nth_root(quotient.c[0], n)
                if c is not None:
                    return tk * c, f"generator-power:{k}"
    if d > 1:
        for r in _roots_by_factoring(a, n):
            return r, "factorization"
    raise FieldTooSmall(
        f"no {n}-th root of {a.to_json()} found in E",
        hint=f"missing root: {n}-th root of {a.to_json()}; supply a witness or enlarge E",
    )


@functools.lru_cache(maxsize=None)
def _sympy_field(poly: tuple[int, ...]):
    """sympy's QQ<theta> for the monic ``poly`` (constant first)."""
    from sympy import QQ, AlgebraicNumber, CRootOf, Poly, Symbol

    X = Symbol("X")
    m = Poly(list(reversed(poly)), X)
    K = QQ.algebraic_field(AlgebraicNumber(CRootOf(m.as_expr(), 0)))
    if [Fraction(int(c.numerator), int(c.denominator)) for c in K.mod.to_list()] != list(reversed(poly)):
        return None  # sympy chose a different primitive element
    return K


def _roots_by_factoring(a: FieldElement, n: int) -> list[FieldElement]:
    """Roots in E of X^n - a from the linear factors over E (sympy)."""
    from sympy import Poly, Symbol

    K = _sympy_field(a.spec.defining_poly)
    if K is None:
        return []
    QQ = K.dom
    elt = K.dtype([QQ(x.numerator, x.denominator) for x in reversed(a.c)], K.mod.to_list(), QQ)
    P = Poly([K.one] + [K.zero] * (n - 1) + [-elt], Symbol("X"), domain=K)
    out = []
    for fac, _ in P.factor_list()[1]:
        if fac.degree() != 1:
            continue
        lc, c0 = fac.rep.to_list()
        root = (-c0 / lc).to_list()  # highest power first
        cand = a.spec.element([Fraction(int(q.numerator), int(q.denominator)) for q in reversed(root)])
        if cand ** n == a:
            out.append(cand)
    return out


def nth_root(a: FieldElement, n: int, witness: FieldElement | None = None) -> FieldElement:
    return nth_root_with_source(a, n, witness)[0]


def root_from_candidates(a: FieldElement, n: int, candidates: Iterable[FieldElement] = ()):
    """Like :func:`nth_root` but tries each candidate witness (and its
    negative) silently before the built-in search."""
    for w in candidates:
        w = a.spec.element(w)
        for cand in (w, -w):
            if cand ** n == a:
                return cand, "witness"
    return nth_root_with_source(a, n)


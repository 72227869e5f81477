"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored as coefficient vectors over the power basis
1, z, ..., z^(phi(n)-1), reduced modulo the n-th cyclotomic polynomial.
Coefficients are :class:`fractions.Fraction` instances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

Rational = Fraction
IntPoly = tuple  # tuple[int, ...], lowest degree first


class DivisionByZero(ZeroDivisionError):
    pass


class ContextMismatch(ValueError):
    pass


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def poly_trim(p: Sequence[int]) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_divmod_monic(a: Sequence[int], b: Sequence[int]) -> tuple[tuple, tuple]:
    """Divide ``a`` by the monic polynomial ``b``; returns (quotient, remainder)."""
    if not b or b[-1] != 1:
        raise ValueError("divisor must be monic")
    r = list(a)
    db = len(b) - 1
    if len(r) <= db:
        return (), poly_trim(r)
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            q[i - db] = c
            base = i - db
            for j in range(db + 1):
                r[base + j] -= c * b[j]
    return poly_trim(q), poly_trim(r[:db])


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPoly:
    """Phi_n as an integer coefficient tuple, via (x^n - 1) / prod_{d|n, d<n} Phi_d."""
    if n < 1:
        raise ValueError(f"cyclotomic_poly needs n >= 1, got {n}")
    num = [-1] + [0] * (n - 1) + [1]
    den: tuple = (1,)
    for d in divisors(n)[:-1]:
        den = poly_mul(den, cyclotomic_poly(d))
    q, r = poly_divmod_monic(num, den)
    assert not r, f"nonzero remainder computing Phi_{n}"
    return q


@dataclass(frozen=True)
class CycloContext:
    """The field Q(zeta_n). Immutable; contexts are cached per order."""

    order: int
    minimal_poly: IntPoly = field(repr=False)
    degree: int

    def __reduce__(self):
        return (make_context, (self.order,))

    @property
    def zero(self) -> "CycloElement":
        return CycloElement(self, (Fraction(0),) * self.degree)

    @property
    def one(self) -> "CycloElement":
        return self.rational(1)

    @property
    def zeta(self) -> "CycloElement":
        return self.zeta_power(1)

    def rational(self, r) -> "CycloElement":
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = Fraction(r)
        return CycloElement(self, tuple(coeffs))

    def zeta_power(self, m: int) -> "CycloElement":
        return CycloElement(self, _zeta_powers(self.order)[m % self.order])

    def from_cyclic(self, vec: Sequence[int], den: int = 1) -> "CycloElement":
        """Project sum vec[i] * z^i / den (indices mod n) to a reduced element."""
        return CycloElement(self, reduce_cyclic(self.order, vec, den))

    def from_poly(self, coeffs: Iterable) -> "CycloElement":
        """Reduce an arbitrary rational polynomial in z (indices taken mod n)."""
        fr = [Fraction(c) for c in coeffs]
        den = math.lcm(*(c.denominator for c in fr)) if fr else 1
        vec = [0] * self.order
        for i, c in enumerate(fr):
            vec[i % self.order] += c.numerator * (den // c.denominator)
        return self.from_cyclic(vec, den)

    def __eq__(self, other):
        return isinstance(other, CycloContext) and other.order == self.order

    def __hash__(self):
        return hash(("CycloContext", self.order))


@lru_cache(maxsize=None)
def make_context(n: int) -> CycloContext:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"context order must be a positive integer, got {n!r}")
    phi = cyclotomic_poly(n)
    return CycloContext(order=n, minimal_poly=phi, degree=len(phi) - 1)


def reduce_cyclic(n: int, vec: Sequence[int], den: int = 1) -> tuple:
    """Reduce an integer vector indexed mod n (scaled by 1/den) modulo Phi_n."""
    from . import kernel

    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rem = kernel.reduce_mod(list(vec), phi)
    rem = list(rem[:deg]) + [0] * (deg - len(rem))
    return tuple(Fraction(c, den) for c in rem)


@lru_cache(maxsize=None)
def _zeta_powers(n: int) -> tuple:
    out = []
    for m in range(n):
        vec = [0] * n
        vec[m] = 1
        out.append(reduce_cyclic(n, vec))
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_index(n: int) -> dict:
    """Map reduced coefficient tuples of +-z^m to (sign, m)."""
    table = {}
    for m, coeffs in enumerate(_zeta_powers(n)):
        table[coeffs] = (1, m)
        table.setdefault(tuple(-c for c in coeffs), (-1, m))
    return table


def _common_den(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


class CycloElement:
    """An exact element of Q(zeta_n) in canonical reduced form."""

    __slots__ = ("context", "coeffs")

    def __init__(self, context: CycloContext, coeffs: Sequence):
        if len(coeffs) != context.degree:
            raise ValueError(
                f"expected {context.degree} coefficients for order {context.order}, got {len(coeffs)}"
            )
        self.context = context
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    # -- helpers ---------------------------------------------------------
    def _coerce(self, other) -> "CycloElement":
        if isinstance(other, CycloElement):
            if other.context.order != self.context.order:
                raise ContextMismatch(
                    f"orders differ: {self.context.order} vs {other.context.order}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.context.rational(other)
        return NotImplemented

    @property
    def order(self) -> int:
        return self.context.order

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def as_monomial(self):
        """Return (sign, m) when self == sign * z^m, else None."""
        return _monomial_index(self.order).get(self.coeffs)

    def cyclic_vector(self) -> tuple[list[int], int]:
        """Integer vector of length n and denominator representing self."""
        nums, den = _common_den(self.coeffs)
        vec = [0] * self.order
        vec[: len(nums)] = nums
        return vec, den

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElement(self.context, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.context, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElement(self.context, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_rational():
            c = self.coeffs[0]
            return CycloElement(self.context, [c * b for b in other.coeffs])
        if other.is_rational():
            c = other.coeffs[0]
            return CycloElement(self.context, [c * a for a in self.coeffs])
        a, da = _common_den(self.coeffs)
        b, db = _common_den(other.coeffs)
        prod = poly_mul(poly_trim(a), poly_trim(b))
        return CycloElement(self.context, _reduce_poly(self.context, prod, da * db))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * inverse(other)

    def __rtruediv__(self, other):
        return inverse(self) * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        mono = self.as_monomial()
        if mono is not None:
            sign, m = mono
            base = self.context.zeta_power(m * k)
            return -base if (sign < 0 and k % 2) else base
        if k < 0:
            return inverse(self) ** (-k)
        result, base = self.context.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycloElement):
            return NotImplemented
        return self.context.order == other.context.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.context.order, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycloElement(n={self.order}, {format_element(self)})"

    def __str__(self):
        return format_element(self)


def _reduce_poly(ctx: CycloContext, poly: Sequence[int], den: int) -> tuple:
    vec = [0] * ctx.order
    for i, c in enumerate(poly):
        vec[i % ctx.order] += c
    return reduce_cyclic(ctx.order, vec, den)


def arith(a: CycloElement, b: CycloElement | None, op: str, k: int | None = None) -> CycloElement:
    """Dispatch helper: op in {'add', 'sub', 'mul', 'neg', 'pow'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "pow":
        if k is None:
            raise ValueError("pow needs an exponent")
        return a**k
    raise ValueError(f"unknown op {op!r}")


def _qpoly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and any(a):
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for j, y in enumerate(b):
            a[shift + j] -= c * y
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return q, a


def inverse(a: CycloElement) -> CycloElement:
    """Multiplicative inverse by the extended Euclidean algorithm modulo Phi_n."""
    if a.is_zero():
        raise DivisionByZero("inverse of zero")
    ctx = a.context
    mono = a.as_monomial()
    if mono is not None:
        sign, m = mono
        inv = ctx.zeta_power(-m)
        return -inv if sign < 0 else inv
    if a.is_rational():
        return ctx.rational(1 / a.coeffs[0])
    # invariant: s * a == r (mod Phi_n)
    r0 = [Fraction(c) for c in ctx.minimal_poly]
    r1 = list(a.coeffs)
    while r1 and r1[-1] == 0:
        r1.pop()
    s0: list[Fraction] = []
    s1 = [Fraction(1)]
    while len(r1) > 1:
        q, r2 = _qpoly_divmod(r0, r1)
        qs = _qpoly_mul(q, s1)
        s2 = _qpoly_sub(s0, qs)
        r0, r1, s0, s1 = r1, r2, s1, s2
    c = r1[0]
    # deg(s1) < deg(Phi_n), so s1 is already reduced
    coeffs = [x / c for x in s1] + [Fraction(0)] * (ctx.degree - len(s1))
    return CycloElement(ctx, coeffs)


def _qpoly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _qpoly_sub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    while out and out[-1] == 0:
        out.pop()
    return out


def _check_unit_exponent(k: int, n: int) -> None:
    if math.gcd(k, n) != 1:
        raise ValueError(f"conjugation exponent {k} is not coprime to {n}")


def conjugate(a: CycloElement, k: int) -> CycloElement:
    """Apply the automorphism z -> z^k (gcd(k, n) = 1)."""
    n = a.order
    _check_unit_exponent(k, n)
    vec, den = a.cyclic_vector()
    out = [0] * n
    for i, c in enumerate(vec):
        if c:
            out[(i * k) % n] += c
    return a.context.from_cyclic(out, den)


def abs_square(a: CycloElement) -> CycloElement:
    return a * conjugate(a, -1)


def trace(a: CycloElement) -> Fraction:
    """Sum of all Galois conjugates of ``a``; always rational."""
    n = a.order
    vec, den = a.cyclic_vector()
    acc = [0] * n
    for k in range(1, n + 1):
        if math.gcd(k, n) != 1:
            continue
        for i, c in enumerate(vec):
            if c:
                acc[(i * k) % n] += c
    total = a.context.from_cyclic(acc, den)
    if not total.is_rational():
        raise ArithmeticError("trace is not rational; arithmetic bug")
    return total.coeffs[0]


def lift(a: CycloElement, n: int) -> CycloElement:
    """Embed a in Q(zeta_n) via zeta_d -> zeta_n^(n/d); requires d | n."""
    d = a.order
    if n % d:
        raise ValueError(f"cannot embed order {d} into order {n}")
    step = n // d
    vec, den = a.cyclic_vector()
    out = [0] * n
    for i, c in enumerate(vec):
        out[i * step] += c
    return make_context(n).from_cyclic(out, den)


def embed_complex(a: CycloElement, digits: int = 15) -> complex:
    """Value at zeta = exp(2 pi i / n), accurate to about ``digits`` digits."""
    return complex(embed_mp(a, digits))


def embed_mp(a: CycloElement, digits: int = 15) -> mpmath.mpc:
    if digits < 1:
        raise ValueError("digits must be >= 1")
    n = a.order
    with mpmath.workdps(digits + 10 + len(str(max((abs(c) for c in a.coeffs), default=0)))):
        z = mpmath.exp(2j * mpmath.pi / n)
        acc = mpmath.mpc(0)
        zp = mpmath.mpc(1)
        for c in a.coeffs:
            if c:
                acc += mpmath.mpf(c.numerator) / c.denominator * zp
            zp *= z
        return +acc


def format_element(a: CycloElement, var: str = "z") -> str:
    parts = []
    for i, c in enumerate(a.coeffs):
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out

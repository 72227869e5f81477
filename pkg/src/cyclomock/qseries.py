"""q-Pochhammer products and terminating q-series over cyclotomic fields.

A series term is

    sign(k) * q^e(k) * prod(numerator factors) / prod(denominator factors)^power

with every factor a q-Pochhammer symbol (c q^s; q^d)_{L(k)}. At a root of
unity a numerator factor can become exactly zero; because L(k) never
decreases, the zero persists and the series terminates.

When the evaluation point is a signed power of zeta, all factors are
binomials 1 +- z^m and the sum runs in the integer kernels of
:mod:`cyclomock.kernel`. Other points, and denominators of the form
1 - z^m (not units in the cyclic group ring), use generic field arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import kernel
from .exactfield import CycloElement, inverse


class SeriesError(ArithmeticError):
    pass


class DenominatorZero(SeriesError):
    def __init__(self, k: int, detail: str = ""):
        self.k = k
        super().__init__(f"denominator vanishes at k={k}" + (f": {detail}" if detail else ""))


class NonTerminating(SeriesError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"series did not terminate within {cap} terms")


@dataclass(frozen=True)
class PochhammerFactor:
    """(sign * q^offset; q^step)_{slope*k + intercept}."""

    sign: int
    offset: int
    step: int
    slope: int = 1
    intercept: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("factor sign must be +1 or -1")
        if self.step < 1 or self.offset < 0:
            raise ValueError("factor needs step >= 1 and offset >= 0")
        if self.slope < 0 or self.intercept < 0:
            raise ValueError("length rule must be nondecreasing and nonnegative")

    def length(self, k: int) -> int:
        return self.slope * k + self.intercept

    def exponent(self, j: int) -> int:
        """Power of q in the j-th factor 1 - sign * q^(offset + step*j)."""
        return self.offset + self.step * j

    def describe(self) -> str:
        base = "q" if self.offset == 1 else f"q^{self.offset}"
        base = ("-" if self.sign < 0 else "") + base
        step = "q" if self.step == 1 else f"q^{self.step}"
        length = {(1, 0): "k", (1, 1): "k+1", (2, 0): "2k", (2, 1): "2k+1"}.get(
            (self.slope, self.intercept), f"{self.slope}k+{self.intercept}"
        )
        return f"({base};{step})_{{{length}}}"


SIGN_RULES = {
    "+": lambda k: 1,
    "(-1)^k": lambda k: -1 if k % 2 else 1,
    "(-1)^(k+1)": lambda k: 1 if k % 2 else -1,
}


@dataclass(frozen=True)
class SeriesSpec:
    sign_rule: str
    # e(k) = a*k^2 + b*k + c, integer-valued on integers
    exponent: tuple[Fraction, Fraction, Fraction]
    numerator: tuple[PochhammerFactor, ...] = ()
    denominator: tuple[PochhammerFactor, ...] = ()
    denominator_power: int = 1

    def __post_init__(self):
        if self.sign_rule not in SIGN_RULES:
            raise ValueError(f"unknown sign rule {self.sign_rule!r}")
        if self.denominator_power not in (1, 2):
            raise ValueError("denominator_power must be 1 or 2")
        object.__setattr__(self, "exponent", tuple(Fraction(x) for x in self.exponent))
        for k in range(3):
            if self.exponent_at(k).denominator != 1:
                raise ValueError("exponent polynomial is not integer-valued")

    def sign(self, k: int) -> int:
        return SIGN_RULES[self.sign_rule](k)

    def exponent_at(self, k: int) -> Fraction:
        a, b, c = self.exponent
        return a * k * k + b * k + c

    def e(self, k: int) -> int:
        return int(self.exponent_at(k))


@dataclass(frozen=True)
class EvaluationResult:
    value: CycloElement
    terminated_at: int
    terms_emitted: int
    # the term with index terminated_at; margin reports need it
    last_term: CycloElement | None = field(default=None, repr=False)


def quadratic(f: Callable[[int], int]) -> tuple[Fraction, Fraction, Fraction]:
    """Fit e(k) = a k^2 + b k + c through f(0), f(1), f(2)."""
    y0, y1, y2 = (Fraction(f(k)) for k in range(3))
    a = (y2 - 2 * y1 + y0) / 2
    b = y1 - y0 - a
    return (a, b, y0)


# -- generic field products --------------------------------------------------

def pochhammer(x: CycloElement, q_step: CycloElement, k: int) -> CycloElement:
    """prod_{j<k} (1 - x * q_step^j), exact."""
    if k < 0:
        raise ValueError("pochhammer length must be nonnegative")
    if x.order != q_step.order:
        raise ValueError("pochhammer arguments must share a context")
    ctx = x.context
    if k == 0:
        return ctx.one
    mx, mq = x.as_monomial(), q_step.as_monomial()
    if mx is not None and mq is not None and mq[0] == 1:
        sx, ax = mx
        codes, ms = [], []
        for j in range(k):
            # 1 - sx z^(ax + aq j)
            codes.append(kernel.OP_MUL_MINUS if sx > 0 else kernel.OP_MUL_PLUS)
            ms.append(ax + mq[1] * j)
        vec, e, _, _ = kernel.run_steps(ctx.order, [0, k], codes, ms, [1], [0])
        return ctx.from_cyclic(vec, 1 << e)
    result = ctx.one
    term = x
    for _ in range(k):
        result = result * (1 - term)
        term = term * q_step
    return result


# -- series evaluation -------------------------------------------------------

def _point_power(sign: int, a: int, e: int) -> tuple[int, int]:
    """(sign z^a)^e as (sign', exponent)."""
    return (sign if e % 2 else 1), a * e


def eval_series(spec: SeriesSpec, q0: CycloElement, cap: int | None = None) -> EvaluationResult:
    if q0.is_zero():
        raise ValueError("evaluation point must be nonzero")
    n = q0.order
    if cap is None:
        cap = 4 * n
    if cap < 1:
        raise ValueError("cap must be >= 1")
    mono = q0.as_monomial()
    if mono is not None:
        plan = _plan_monomial(spec, n, mono, cap)
        if plan is not None:
            return _run_plan(spec, q0, plan, mono)
    return _eval_generic(spec, q0, cap)


def _binomial(fsign: int, psign: int, a: int, exp: int, n: int):
    """1 - fsign * (psign z^a)^exp as (coefficient of z^m, m); zero iff coeff -1 and m = 0."""
    s, m = _point_power(psign, a, exp)
    return -fsign * s, m % n


def _plan_monomial(spec: SeriesSpec, n: int, mono, cap: int):
    """Build kernel ops; returns None when a denominator is not a cyclic-ring unit."""
    psign, a = mono
    step_ptr = [0]
    codes: list[int] = []
    ms: list[int] = []
    signs: list[int] = []
    exps: list[int] = []
    for k in range(cap):
        num_zero = False
        for fac in spec.numerator:
            lo = fac.length(k - 1) if k else 0
            for j in range(lo, fac.length(k)):
                c, m = _binomial(fac.sign, psign, a, fac.exponent(j), n)
                if c < 0 and m == 0:
                    num_zero = True
                codes.append(kernel.OP_MUL_PLUS if c > 0 else kernel.OP_MUL_MINUS)
                ms.append(m)
        den_zero = False
        for _ in range(spec.denominator_power):
            for fac in spec.denominator:
                lo = fac.length(k - 1) if k else 0
                for j in range(lo, fac.length(k)):
                    c, m = _binomial(fac.sign, psign, a, fac.exponent(j), n)
                    if c < 0:
                        if m == 0:
                            den_zero = True
                        else:
                            return None
                    codes.append(kernel.OP_DIV_PLUS)
                    ms.append(m)
        if den_zero:
            raise DenominatorZero(k)
        if num_zero:
            # factors never shrink, so every later term is zero too
            codes = codes[: step_ptr[-1]]
            ms = ms[: step_ptr[-1]]
            return step_ptr, codes, ms, signs, exps, k
        ts, e = _point_power(psign, a, spec.e(k))
        signs.append(spec.sign(k) * ts)
        exps.append(e)
        step_ptr.append(len(codes))
    raise NonTerminating(cap)


def _run_plan(spec, q0, plan, mono) -> EvaluationResult:
    step_ptr, codes, ms, signs, exps, stop = plan
    ctx = q0.context
    n = ctx.order
    if stop == 0:
        return EvaluationResult(ctx.zero, 0, 0, None)
    vec, e, cur, cur_e = kernel.run_steps(n, step_ptr, codes, ms, signs, exps)
    value = ctx.from_cyclic(vec, 1 << e)
    shift = exps[-1] % n
    last_vec = [0] * n
    for i, x in enumerate(cur):
        last_vec[(i + shift) % n] = signs[-1] * x
    last = ctx.from_cyclic(last_vec, 1 << cur_e)
    return EvaluationResult(value, stop - 1, stop, last)


def _eval_generic(spec: SeriesSpec, q0: CycloElement, cap: int) -> EvaluationResult:
    ctx = q0.context
    q_inv = None
    num = ctx.one
    den = ctx.one
    total = ctx.zero
    last = None
    for k in range(cap):
        for fac in spec.numerator:
            lo = fac.length(k - 1) if k else 0
            for j in range(lo, fac.length(k)):
                num = num * (1 - fac.sign * q0 ** fac.exponent(j))
        den_zero = False
        for fac in spec.denominator:
            lo = fac.length(k - 1) if k else 0
            for j in range(lo, fac.length(k)):
                f = 1 - fac.sign * q0 ** fac.exponent(j)
                if f.is_zero():
                    den_zero = True
                den = den * f
        if num.is_zero():
            if den_zero or den.is_zero():
                raise DenominatorZero(k, "numerator and denominator both vanish")
            return EvaluationResult(total, k - 1, k, last)
        if den.is_zero():
            raise DenominatorZero(k)
        e = spec.e(k)
        if e >= 0:
            mono = q0**e
        else:
            if q_inv is None:
                q_inv = inverse(q0)
            mono = q_inv ** (-e)
        term = num * mono * inverse(den**spec.denominator_power)
        if spec.sign(k) < 0:
            term = -term
        total = total + term
        last = term
    raise NonTerminating(cap)


# -- floating point ----------------------------------------------------------

def series_truncated(spec: SeriesSpec, q: complex, K: int) -> complex:
    """sum_{k=0}^{K} term_k in complex floating point, built incrementally."""
    q = complex(q)
    num = 1 + 0j
    den = 1 + 0j
    total = 0j
    for k in range(K + 1):
        for fac in spec.numerator:
            lo = fac.length(k - 1) if k else 0
            for j in range(lo, fac.length(k)):
                num *= 1 - fac.sign * q ** fac.exponent(j)
        for fac in spec.denominator:
            lo = fac.length(k - 1) if k else 0
            for j in range(lo, fac.length(k)):
                den *= 1 - fac.sign * q ** fac.exponent(j)
        if num == 0:
            break
        e = spec.e(k)
        mono = (1 + 0j if e == 0 else 0j) if q == 0 else q**e
        total += spec.sign(k) * mono * num / den**spec.denominator_power
    return total

"""Independent floating point oracles, written from the series definitions.

Nothing here touches the package's series machinery: every function is
spelled out term by term and summed in complex floating point until a
numerator factor vanishes.
"""
from __future__ import annotations

import cmath
import math

ZERO_TOL = 1e-9


def poch(a: complex, step: complex, k: int) -> complex:
    out = 1 + 0j
    for j in range(k):
        out *= 1 - a * step**j
    return out


def _has_zero_factor(a: complex, step: complex, k: int) -> bool:
    return any(abs(1 - a * step**j) < ZERO_TOL for j in range(k))


# term(q, k) -> (numerator factors as (a, step, length), term without them)
def _phi(q, k):
    return [(q, q * q, k)], (-1) ** k * q ** (k * k) / poch(-q, q, 2 * k)


def _psi(q, k):
    return [(q, q * q, k)], (-1) ** k * q ** ((k + 1) ** 2) / poch(-q, q, 2 * k + 1)


def _lambda(q, k):
    return [(q, q * q, k)], (-1) ** k * q**k / poch(-q, q, k)


def _mu(q, k):
    return [(q, q * q, k)], (-1) ** k / poch(-q, q, k)


def _rho(q, k):
    return [(-q, q, k)], q ** (k * (k + 1) // 2) / poch(q, q * q, k + 1)


def _sigma(q, k):
    return [(-q, q, k)], q ** ((k + 1) * (k + 2) // 2) / poch(q, q * q, k + 1)


def _S0(q, k):
    return [(-q, q * q, k)], q ** (k * k) / poch(-q * q, q * q, k)


def _S1(q, k):
    return [(-q, q * q, k)], q ** (k * (k + 2)) / poch(-q * q, q * q, k)


def _U0(q, k):
    return [(-q, q * q, k)], q ** (k * k) / poch(-(q**4), q**4, k)


def _U1(q, k):
    return [(-q, q * q, k)], q ** ((k + 1) ** 2) / poch(-q * q, q**4, k + 1)


def _phi0(q, k):
    return [(-q, q * q, k)], q ** (k * k)


def _phi1(q, k):
    return [(-q, q * q, k)], q ** ((k + 1) ** 2)


def _u(q, k):
    return [(q, q * q, k)], (-1) ** k * q ** (k * k) / poch(-q * q, q * q, k) ** 2


def summed(term, q: complex, kmax: int) -> complex:
    total = 0j
    for k in range(kmax + 1):
        facs, rest = term(q, k)
        if any(_has_zero_factor(*f) for f in facs):
            return total
        num = 1 + 0j
        for f in facs:
            num *= poch(*f)
        total += num * rest
    raise RuntimeError("series did not terminate")


# id -> (base term, transform of the evaluation point)
_NEG = lambda q: -q  # noqa: E731
_ID = lambda q: q  # noqa: E731
_INV = lambda q: 1 / q  # noqa: E731
_NEG_INV = lambda q: -1 / q  # noqa: E731

TABLE = {
    "phi": (_phi, _ID),
    "psi": (_psi, _ID),
    "lambda": (_lambda, _ID),
    "mu": (_mu, _ID),
    "rho_neg": (_rho, _NEG),
    "sigma_neg": (_sigma, _NEG),
    "S0_neg": (_S0, _NEG),
    "S1_neg": (_S1, _NEG),
    "U0_neg": (_U0, _NEG),
    "U1_neg": (_U1, _NEG),
    "phi0_neg": (_phi0, _NEG),
    "phi1_neg": (_phi1, _NEG),
    "u": (_u, _ID),
    # primed functions satisfy f'(q) = f(1/q)
    "phi_p": (_phi, _INV),
    "psi_p": (_psi, _INV),
    "mu_p": (_mu, _INV),
    "lambda_p": (_lambda, _INV),
    "sigma_p_neg": (_sigma, _NEG_INV),
    "rho_p_neg": (_rho, _NEG_INV),
    "S0_p_neg": (_S0, _NEG_INV),
    "S1_p_neg": (_S1, _NEG_INV),
    "U0_p_neg": (_U0, _NEG_INV),
    "U1_p_neg": (_U1, _NEG_INV),
}


def root(n: int, j: int = 1) -> complex:
    return cmath.exp(2j * math.pi * j / n)


def direct_value(fid: str, n: int, j: int = 1) -> complex:
    term, point = TABLE[fid]
    return summed(term, point(root(n, j)), 4 * n)


def partial_sums(fid: str, n: int) -> list[complex]:
    """Running sums S_0, S_1, ..., through the last nonzero term."""
    term, point = TABLE[fid]
    q = point(root(n))
    out, total = [], 0j
    for k in range(4 * n + 1):
        facs, rest = term(q, k)
        if any(_has_zero_factor(*f) for f in facs):
            return out
        num = 1 + 0j
        for f in facs:
            num *= poch(*f)
        total += num * rest
        out.append(total)
    raise RuntimeError("series did not terminate")

"""Pure-Python kernels over the cyclic group ring Z[x]/(x^n - 1).

Values are integer vectors ``v`` with a power-of-two denominator ``2**e``.
The compiled twin in ``_kernel.pyx`` implements the same contract on int64
and raises OverflowError when a coefficient leaves that range; callers then
rerun here, where Python ints never overflow.

Op codes for :func:`run_steps`:
    OP_MUL_PLUS   multiply by (1 + x^m)
    OP_MUL_MINUS  multiply by (1 - x^m)
    OP_DIV_PLUS   divide by (1 + x^m), a unit for odd n
"""
from math import gcd

OP_MUL_PLUS = 1
OP_MUL_MINUS = -1
OP_DIV_PLUS = 0


def _mul_binomial(a, sign, m, n):
    m %= n
    if m == 0:
        if sign > 0:
            return [2 * x for x in a]
        return [0] * n
    return [a[i] + sign * a[i - m] for i in range(n)]


def _div_unit_doubled(a, m, n):
    """Return c with c / 2 == a / (1 + x^m)."""
    m %= n
    if m == 0:
        return list(a)
    c = [0] * n
    g = gcd(m, n)
    length = n // g
    for start in range(g):
        # walk the cycle start, start+m, start+2m, ...
        s = 0
        idx = start
        for t in range(length):
            s += a[idx] if t % 2 == 0 else -a[idx]
            idx = (idx - m) % n
        c[start] = s
        prev = s
        idx = (start + m) % n
        for _ in range(1, length):
            prev = 2 * a[idx] - prev
            c[idx] = prev
            idx = (idx + m) % n
    return c


def run_steps(n, step_ptr, op_code, op_m, term_sign, term_exp):
    """Accumulate sum_k term_sign[k] * x^term_exp[k] * P_k.

    P_0 = 1 and P_k is P_{k-1} after the ops in
    ``op_code[step_ptr[k]:step_ptr[k+1]]`` (ops for step k are applied
    before term k is added). Returns ``(total, e, p_last, p_e)``: the sum is
    total / 2**e and the final running product is p_last / 2**p_e.
    """
    cur = [0] * n
    cur[0] = 1
    cur_e = 0
    total = [0] * n
    tot_e = 0
    for k in range(len(term_sign)):
        for i in range(step_ptr[k], step_ptr[k + 1]):
            code = op_code[i]
            if code == OP_DIV_PLUS:
                cur = _div_unit_doubled(cur, op_m[i], n)
                cur_e += 1
            else:
                cur = _mul_binomial(cur, code, op_m[i], n)
        while cur_e and all(x % 2 == 0 for x in cur):
            cur = [x >> 1 for x in cur]
            cur_e -= 1
        if cur_e > tot_e:
            total = [x << (cur_e - tot_e) for x in total]
            tot_e = cur_e
        shift = tot_e - cur_e
        e = term_exp[k] % n
        sgn = term_sign[k]
        for i in range(n):
            x = cur[i]
            if x:
                total[(i + e) % n] += sgn * (x << shift)
    while tot_e and all(x % 2 == 0 for x in total):
        total = [x >> 1 for x in total]
        tot_e -= 1
    return total, tot_e, cur, cur_e


def reduce_mod(vec, phi):
    """Remainder of the integer polynomial ``vec`` modulo monic ``phi``."""
    r = list(vec)
    db = len(phi) - 1
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            base = i - db
            for j in range(db + 1):
                r[base + j] -= c * phi[j]
    return r[:db] if len(r) > db else r

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""int64 twin of ``_kernel_py``. Raises OverflowError instead of wrapping."""
from libc.stdlib cimport malloc, free
from libc.string cimport memset

cdef extern from *:
    bint __builtin_add_overflow(long long a, long long b, long long* r) nogil
    bint __builtin_sub_overflow(long long a, long long b, long long* r) nogil
    bint __builtin_mul_overflow(long long a, long long b, long long* r) nogil


cdef long long _gcd(long long a, long long b) nogil:
    while b:
        a, b = b, a % b
    return a


cdef int _mul_binomial(long long* a, long long* out, int sign, long long m, int n) nogil:
    cdef int i
    cdef long long j
    m = m % n
    if m < 0:
        m += n
    if m == 0:
        for i in range(n):
            if sign > 0:
                if __builtin_add_overflow(a[i], a[i], &out[i]):
                    return 1
            else:
                out[i] = 0
        return 0
    for i in range(n):
        j = i - m
        if j < 0:
            j += n
        if sign > 0:
            if __builtin_add_overflow(a[i], a[j], &out[i]):
                return 1
        else:
            if __builtin_sub_overflow(a[i], a[j], &out[i]):
                return 1
    return 0


cdef int _div_unit_doubled(long long* a, long long* c, long long m, int n) nogil:
    cdef long long g, length, start, t, idx, s, prev, twice
    cdef int i
    m = m % n
    if m < 0:
        m += n
    if m == 0:
        for i in range(n):
            c[i] = a[i]
        return 0
    g = _gcd(m, n)
    length = n // g
    for start in range(g):
        s = 0
        idx = start
        for t in range(length):
            if t % 2 == 0:
                if __builtin_add_overflow(s, a[idx], &s):
                    return 1
            else:
                if __builtin_sub_overflow(s, a[idx], &s):
                    return 1
            idx -= m
            if idx < 0:
                idx += n
        c[start] = s
        prev = s
        idx = (start + m) % n
        for t in range(1, length):
            if __builtin_add_overflow(a[idx], a[idx], &twice):
                return 1
            if __builtin_sub_overflow(twice, prev, &prev):
                return 1
            c[idx] = prev
            idx = (idx + m) % n
    return 0


def run_steps(int n, step_ptr, op_code, op_m, term_sign, term_exp):
    cdef long long* cur = <long long*> malloc(n * sizeof(long long))
    cdef long long* tmp = <long long*> malloc(n * sizeof(long long))
    cdef long long* total = <long long*> malloc(n * sizeof(long long))
    cdef long long* swap
    cdef int cur_e = 0, tot_e = 0, shift, d, i, k, nterms = len(term_sign)
    cdef long long code, m, e, sgn, x, v, tgt
    cdef bint even
    if cur == NULL or tmp == NULL or total == NULL:
        free(cur); free(tmp); free(total)
        raise MemoryError()
    try:
        memset(cur, 0, n * sizeof(long long))
        memset(total, 0, n * sizeof(long long))
        cur[0] = 1
        for k in range(nterms):
            for i in range(step_ptr[k], step_ptr[k + 1]):
                code = op_code[i]
                m = op_m[i]
                if code == 0:
                    if _div_unit_doubled(cur, tmp, m, n):
                        raise OverflowError("int64 kernel overflow")
                    cur_e += 1
                else:
                    if _mul_binomial(cur, tmp, <int> code, m, n):
                        raise OverflowError("int64 kernel overflow")
                swap = cur; cur = tmp; tmp = swap
            while cur_e:
                even = True
                for i in range(n):
                    if cur[i] & 1:
                        even = False
                        break
                if not even:
                    break
                for i in range(n):
                    cur[i] >>= 1
                cur_e -= 1
            if cur_e > tot_e:
                d = cur_e - tot_e
                for i in range(n):
                    for _ in range(d):
                        if __builtin_add_overflow(total[i], total[i], &total[i]):
                            raise OverflowError("int64 kernel overflow")
                tot_e = cur_e
            shift = tot_e - cur_e
            e = term_exp[k] % n
            if e < 0:
                e += n
            sgn = term_sign[k]
            for i in range(n):
                x = cur[i]
                if x:
                    v = x
                    for _ in range(shift):
                        if __builtin_add_overflow(v, v, &v):
                            raise OverflowError("int64 kernel overflow")
                    tgt = (i + e) % n
                    if sgn > 0:
                        if __builtin_add_overflow(total[tgt], v, &total[tgt]):
                            raise OverflowError("int64 kernel overflow")
                    else:
                        if __builtin_sub_overflow(total[tgt], v, &total[tgt]):
                            raise OverflowError("int64 kernel overflow")
        while tot_e:
            even = True
            for i in range(n):
                if total[i] & 1:
                    even = False
                    break
            if not even:
                break
            for i in range(n):
                total[i] >>= 1
            tot_e -= 1
        return [total[i] for i in range(n)], tot_e, [cur[i] for i in range(n)], cur_e
    finally:
        free(cur); free(tmp); free(total)


def reduce_mod(vec, phi):
    cdef int db = len(phi) - 1, lr = len(vec), i, j, base
    cdef long long c, prod
    if lr <= db:
        return list(vec)
    cdef long long* r = <long long*> malloc(lr * sizeof(long long))
    cdef long long* p = <long long*> malloc((db + 1) * sizeof(long long))
    if r == NULL or p == NULL:
        free(r); free(p)
        raise MemoryError()
    try:
        for i in range(lr):
            r[i] = vec[i]
        for j in range(db + 1):
            p[j] = phi[j]
        for i in range(lr - 1, db - 1, -1):
            c = r[i]
            if c:
                base = i - db
                for j in range(db + 1):
                    if __builtin_mul_overflow(c, p[j], &prod):
                        raise OverflowError("int64 kernel overflow")
                    if __builtin_sub_overflow(r[base + j], prod, &r[base + j]):
                        raise OverflowError("int64 kernel overflow")
        return [r[i] for i in range(db)]
    finally:
        free(r); free(p)

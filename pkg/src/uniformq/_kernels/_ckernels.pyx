# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the word-size hot loops.

Same contracts as ``pykernels``; callers are responsible for keeping all
intermediate values inside signed 64-bit range (imat_mul) and primes
below 2**31 (modular kernels).
"""

from libc.stdlib cimport malloc, free

BACKEND = "c"

# imat_mul guarantees correctness only when max|a|*max|b|*k < 2**63;
# callers check that bound before dispatching here.
IMAT_MUL_LIMIT = 2 ** 62
CHARPOLY_PRIME_BITS = 31


def imat_mul(list a, list b, int n, int k, int m):
    cdef long long *abuf = <long long *> malloc(n * k * sizeof(long long))
    cdef long long *bbuf = <long long *> malloc(k * m * sizeof(long long))
    cdef long long *obuf = <long long *> malloc(n * m * sizeof(long long))
    cdef int i, j, t
    cdef long long av, acc
    if abuf == NULL or bbuf == NULL or obuf == NULL:
        if abuf != NULL: free(abuf)
        if bbuf != NULL: free(bbuf)
        if obuf != NULL: free(obuf)
        raise MemoryError()
    try:
        for i in range(n * k):
            abuf[i] = a[i]
        for i in range(k * m):
            bbuf[i] = b[i]
        for i in range(n * m):
            obuf[i] = 0
        for i in range(n):
            for t in range(k):
                av = abuf[i * k + t]
                if av == 0:
                    continue
                for j in range(m):
                    obuf[i * m + j] += av * bbuf[t * m + j]
        return [obuf[i] for i in range(n * m)]
    finally:
        free(abuf)
        free(bbuf)
        free(obuf)


def charpoly_mod(list a, int n, long long p):
    cdef long long *h = <long long *> malloc(n * n * sizeof(long long))
    cdef long long *work = <long long *> malloc((n + 1) * (n + 1) * sizeof(long long))
    cdef int i, j, r, c, s, piv, idx
    cdef long long inv, f, d, prod, coef, tmp
    if h == NULL or work == NULL:
        if h != NULL: free(h)
        if work != NULL: free(work)
        raise MemoryError()
    try:
        for i in range(n):
            for j in range(n):
                h[i * n + j] = a[i * n + j] % p

        for j in range(n - 2):
            piv = -1
            for i in range(j + 1, n):
                if h[i * n + j] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != j + 1:
                for c in range(n):
                    tmp = h[piv * n + c]
                    h[piv * n + c] = h[(j + 1) * n + c]
                    h[(j + 1) * n + c] = tmp
                for r in range(n):
                    tmp = h[r * n + piv]
                    h[r * n + piv] = h[r * n + j + 1]
                    h[r * n + j + 1] = tmp
            inv = pow(h[(j + 1) * n + j], p - 2, p)
            for i in range(j + 2, n):
                f = h[i * n + j] * inv % p
                if f == 0:
                    continue
                for c in range(j, n):
                    h[i * n + c] = (h[i * n + c] - f * h[(j + 1) * n + c]) % p
                for r in range(n):
                    h[r * n + j + 1] = (h[r * n + j + 1] + f * h[r * n + i]) % p

        # work[s] holds charpoly of the leading s x s block, degree s
        for i in range((n + 1) * (n + 1)):
            work[i] = 0
        work[0] = 1  # p_0 = 1
        for s in range(1, n + 1):
            d = h[(s - 1) * n + (s - 1)]
            for idx in range(s):
                coef = work[(s - 1) * (n + 1) + idx]
                if coef != 0:
                    work[s * (n + 1) + idx + 1] = (work[s * (n + 1) + idx + 1] + coef) % p
                    work[s * (n + 1) + idx] = (work[s * (n + 1) + idx] - d * coef) % p
            prod = 1
            for i in range(1, s):
                prod = prod * h[(s - i) * n + (s - i - 1)] % p
                if prod == 0:
                    break
                coef = prod * h[(s - 1 - i) * n + (s - 1)] % p
                if coef == 0:
                    continue
                for idx in range(s - i):
                    tmp = work[(s - 1 - i) * (n + 1) + idx]
                    if tmp != 0:
                        work[s * (n + 1) + idx] = (work[s * (n + 1) + idx] - coef * tmp) % p
        # canonical residues in [0, p), matching the pure backend
        return [(work[n * (n + 1) + i] % p + p) % p for i in range(n + 1)]
    finally:
        free(h)
        free(work)


def rank_mod(list a, int nrows, int ncols, long long p):
    cdef long long *m = <long long *> malloc(nrows * ncols * sizeof(long long))
    cdef int i, j, col, piv, rank
    cdef long long inv, f, tmp
    if m == NULL:
        raise MemoryError()
    try:
        for i in range(nrows * ncols):
            m[i] = a[i] % p
        rank = 0
        for col in range(ncols):
            piv = -1
            for i in range(rank, nrows):
                if m[i * ncols + col] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(ncols):
                    tmp = m[piv * ncols + j]
                    m[piv * ncols + j] = m[rank * ncols + j]
                    m[rank * ncols + j] = tmp
            inv = pow(m[rank * ncols + col], p - 2, p)
            for i in range(rank + 1, nrows):
                f = m[i * ncols + col] * inv % p
                if f == 0:
                    continue
                for j in range(col, ncols):
                    m[i * ncols + j] = (m[i * ncols + j] - f * m[rank * ncols + j]) % p
            rank += 1
            if rank == nrows:
                break
        return rank
    finally:
        free(m)

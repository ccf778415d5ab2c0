# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse elimination kernel.

Same contract and same canonical output as the pure-Python twin: rows come
in as {col: value} dicts and leave the same way.  Columns are processed
left to right (canonical staircase pivots); inside a column the sparsest
candidate row wins.

Rows live in sorted (col, value) C arrays.  The F_p path works entirely in
64-bit arithmetic (p < 2**31 keeps products in range).  The integer path
stages values in 64 bits with a conservative magnitude guard; when a row
outgrows the guard it raises KernelOverflow and the caller reruns that
matrix with arbitrary-precision integers.
"""

from libc.stdlib cimport free, malloc

KERNEL_TAG = "c"


class KernelOverflow(ArithmeticError):
    """64-bit staging would overflow; retry with the pure kernel."""


cdef long long LIMIT = (<long long> 1) << 30


cdef struct Row:
    int* cols
    long long* vals
    int n
    int cap
    long long mx          # max |value|, maintained on every rewrite


cdef inline long long _llabs(long long x):
    return -x if x < 0 else x


cdef inline long long _gcd(long long a, long long b):
    cdef long long t
    a = _llabs(a)
    b = _llabs(b)
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef long long _powmod(long long a, long long e, long long p):
    cdef long long r = 1
    a %= p
    while e:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


cdef int _row_alloc(Row* r, int cap) except -1:
    if cap < 4:
        cap = 4
    r.cols = <int*> malloc(cap * sizeof(int))
    r.vals = <long long*> malloc(cap * sizeof(long long))
    if r.cols == NULL or r.vals == NULL:
        raise MemoryError()
    r.cap = cap
    r.n = 0
    r.mx = 0
    return 0


cdef void _row_free(Row* r):
    if r.cols != NULL:
        free(r.cols)
        r.cols = NULL
    if r.vals != NULL:
        free(r.vals)
        r.vals = NULL
    r.n = 0
    r.cap = 0


cdef inline int _row_find(Row* r, int c):
    """Binary search; returns the index of column c in r or -1."""
    cdef int lo = 0, hi = r.n - 1, mid
    while lo <= hi:
        mid = (lo + hi) >> 1
        if r.cols[mid] == c:
            return mid
        if r.cols[mid] < c:
            lo = mid + 1
        else:
            hi = mid - 1
    return -1


cdef int _merge(Row* out, Row* a, long long alpha, Row* b, long long beta,
                long long p) except -1:
    """out = alpha*a + beta*b, mod p when p > 0, zero entries dropped."""
    cdef int ia = 0, ib = 0, k = 0
    cdef int ca, cb
    cdef long long v, m = 0
    while ia < a.n or ib < b.n:
        ca = a.cols[ia] if ia < a.n else 2147483647
        cb = b.cols[ib] if ib < b.n else 2147483647
        if ca < cb:
            v = alpha * a.vals[ia]
            ia += 1
            out.cols[k] = ca
        elif cb < ca:
            v = beta * b.vals[ib]
            ib += 1
            out.cols[k] = cb
        else:
            v = alpha * a.vals[ia] + beta * b.vals[ib]
            ia += 1
            ib += 1
            out.cols[k] = ca
        if p > 0:
            v %= p
            if v < 0:
                v += p
        if v != 0:
            out.vals[k] = v
            if _llabs(v) > m:
                m = _llabs(v)
            k += 1
    out.n = k
    out.mx = m
    return 0


cdef void _row_content_reduce(Row* r):
    cdef long long g = 0
    cdef int i
    for i in range(r.n):
        g = _gcd(g, r.vals[i])
        if g == 1:
            return
    if g > 1:
        r.mx = 0
        for i in range(r.n):
            r.vals[i] = r.vals[i] // g
            if _llabs(r.vals[i]) > r.mx:
                r.mx = _llabs(r.vals[i])


cdef class _Workspace:
    """Owns the row arrays so memory is reclaimed even on exceptions."""
    cdef Row* rows
    cdef int n
    cdef Row scratch
    cdef int ncols

    def __cinit__(self, pyrows, long long p):
        cdef int i, k, c
        cdef long long v
        self.n = len(pyrows)
        self.rows = <Row*> malloc(self.n * sizeof(Row)) if self.n else NULL
        if self.n and self.rows == NULL:
            raise MemoryError()
        for i in range(self.n):
            self.rows[i].cols = NULL
            self.rows[i].vals = NULL
            self.rows[i].n = 0
            self.rows[i].cap = 0
            self.rows[i].mx = 0
        self.scratch.cols = NULL
        self.scratch.vals = NULL
        self.scratch.n = 0
        self.scratch.cap = 0
        self.ncols = 0
        i = 0
        for d in pyrows:
            items = sorted(d.items())
            _row_alloc(&self.rows[i], len(items))
            k = 0
            for cj, vj in items:
                c = cj
                if p > 0:
                    v = vj % p
                    if v < 0:
                        v += p
                else:
                    if not (-LIMIT <= vj <= LIMIT):
                        raise KernelOverflow()
                    v = vj
                if v == 0:
                    continue
                self.rows[i].cols[k] = c
                self.rows[i].vals[k] = v
                if _llabs(v) > self.rows[i].mx:
                    self.rows[i].mx = _llabs(v)
                k += 1
                if c + 1 > self.ncols:
                    self.ncols = c + 1
            self.rows[i].n = k
            i += 1
        _row_alloc(&self.scratch, self.ncols)

    def __dealloc__(self):
        cdef int i
        if self.rows != NULL:
            for i in range(self.n):
                _row_free(&self.rows[i])
            free(self.rows)
        _row_free(&self.scratch)

    cdef int eliminate(self, int j, int target_col, Row* prow, long long pv,
                       long long p) except -1:
        """Clear target_col from row j against pivot row prow."""
        cdef Row* other = &self.rows[j]
        cdef int k = _row_find(other, target_col)
        cdef long long rc, g, mult_self, mult_piv
        cdef Row tmp
        if k < 0:
            return 0
        rc = other.vals[k]
        if self.scratch.cap < self.ncols:
            _row_free(&self.scratch)
            _row_alloc(&self.scratch, self.ncols)
        if p > 0:
            _merge(&self.scratch, other, 1, prow, p - rc, p)
        else:
            if other.mx > LIMIT or prow.mx > LIMIT:
                raise KernelOverflow()
            g = _gcd(pv, rc)
            mult_self = pv // g
            mult_piv = rc // g
            _merge(&self.scratch, other, mult_self, prow, -mult_piv, 0)
            _row_content_reduce(&self.scratch)
        tmp = self.rows[j]
        self.rows[j] = self.scratch
        self.scratch = tmp
        return 1


cdef int _forward(_Workspace w, long long p, int* pivot_cols, int* pivot_rows) except -1:
    """Column-ordered forward elimination; returns the number of pivots.

    For p > 0, retired pivot rows are normalized to pivot value 1.
    """
    cdef int n = w.n
    cdef int ncols = w.ncols
    cdef int* bucket_head = <int*> malloc(ncols * sizeof(int)) if ncols else NULL
    cdef int* next_row = <int*> malloc(n * sizeof(int)) if n else NULL
    cdef int* cand = <int*> malloc(n * sizeof(int)) if n else NULL
    if (ncols and bucket_head == NULL) or (n and (next_row == NULL or cand == NULL)):
        if bucket_head != NULL:
            free(bucket_head)
        if next_row != NULL:
            free(next_row)
        if cand != NULL:
            free(cand)
        raise MemoryError()
    cdef int i, k, c, ri, ncand, lead, rank = 0
    cdef long long pv, inv
    cdef Row* row
    try:
        for c in range(ncols):
            bucket_head[c] = -1
        for i in range(n):
            if w.rows[i].n > 0:
                lead = w.rows[i].cols[0]
                next_row[i] = bucket_head[lead]
                bucket_head[lead] = i
        for c in range(ncols):
            ncand = 0
            i = bucket_head[c]
            while i != -1:
                cand[ncand] = i
                ncand += 1
                i = next_row[i]
            bucket_head[c] = -1
            if ncand == 0:
                continue
            ri = cand[0]
            for k in range(1, ncand):
                i = cand[k]
                if w.rows[i].n < w.rows[ri].n or (
                    w.rows[i].n == w.rows[ri].n and i < ri
                ):
                    ri = i
            row = &w.rows[ri]
            pv = row.vals[0]
            if p > 0:
                inv = _powmod(pv, p - 2, p)
                for k in range(row.n):
                    row.vals[k] = row.vals[k] * inv % p
                pv = 1
            for k in range(ncand):
                i = cand[k]
                if i == ri:
                    continue
                w.eliminate(i, c, row, pv, p)
                if w.rows[i].n > 0:
                    lead = w.rows[i].cols[0]
                    next_row[i] = bucket_head[lead]
                    bucket_head[lead] = i
            pivot_cols[rank] = c
            pivot_rows[rank] = ri
            rank += 1
        return rank
    finally:
        if bucket_head != NULL:
            free(bucket_head)
        if next_row != NULL:
            free(next_row)
        if cand != NULL:
            free(cand)


cdef _back_substitute(_Workspace w, long long p, int rank, int* pc, int* pr):
    """Clear stray pivot-column entries, then emit canonical dicts."""
    cdef int ncols = w.ncols
    cdef int* pivot_of_col = <int*> malloc(ncols * sizeof(int)) if ncols else NULL
    cdef int* count = <int*> malloc(ncols * sizeof(int)) if ncols else NULL
    cdef int* offs = <int*> malloc((ncols + 1) * sizeof(int))
    cdef int* entries = NULL
    if (ncols and (pivot_of_col == NULL or count == NULL)) or offs == NULL:
        if pivot_of_col != NULL:
            free(pivot_of_col)
        if count != NULL:
            free(count)
        if offs != NULL:
            free(offs)
        raise MemoryError()
    cdef int k, k2, c, ci, idx, total
    cdef long long pv
    cdef Row* prow
    try:
        for c in range(ncols):
            pivot_of_col[c] = -1
            count[c] = 0
        for k in range(rank):
            pivot_of_col[pc[k]] = k
        total = 0
        for k in range(rank):
            prow = &w.rows[pr[k]]
            for idx in range(prow.n):
                ci = prow.cols[idx]
                if ci != pc[k] and pivot_of_col[ci] != -1:
                    count[ci] += 1
                    total += 1
        offs[0] = 0
        for c in range(ncols):
            offs[c + 1] = offs[c] + count[c]
            count[c] = 0
        entries = <int*> malloc((total if total else 1) * sizeof(int))
        if entries == NULL:
            raise MemoryError()
        for k in range(rank):
            prow = &w.rows[pr[k]]
            for idx in range(prow.n):
                ci = prow.cols[idx]
                if ci != pc[k] and pivot_of_col[ci] != -1:
                    entries[offs[ci] + count[ci]] = k
                    count[ci] += 1
        for k in range(rank - 1, -1, -1):
            c = pc[k]
            prow = &w.rows[pr[k]]
            pv = prow.vals[_row_find(prow, c)]
            for idx in range(offs[c], offs[c] + count[c]):
                k2 = entries[idx]
                w.eliminate(pr[k2], c, prow, pv, p)
        out_cols = []
        out_rows = []
        for k in range(rank):
            c = pc[k]
            prow = &w.rows[pr[k]]
            if p == 0:
                idx = _row_find(prow, c)
                if prow.vals[idx] < 0:
                    for idx in range(prow.n):
                        prow.vals[idx] = -prow.vals[idx]
            d = {}
            for idx in range(prow.n):
                d[prow.cols[idx]] = prow.vals[idx]
            out_cols.append(c)
            out_rows.append(d)
        return out_cols, out_rows
    finally:
        if pivot_of_col != NULL:
            free(pivot_of_col)
        if count != NULL:
            free(count)
        if offs != NULL:
            free(offs)
        if entries != NULL:
            free(entries)


def _run(rows, long long p, bint want_rref):
    cdef _Workspace w = _Workspace(rows, p)
    cdef int* pc = <int*> malloc((w.n + 1) * sizeof(int))
    cdef int* pr = <int*> malloc((w.n + 1) * sizeof(int))
    cdef int rank
    if pc == NULL or pr == NULL:
        if pc != NULL:
            free(pc)
        if pr != NULL:
            free(pr)
        raise MemoryError()
    try:
        rank = _forward(w, p, pc, pr)
        if want_rref:
            return _back_substitute(w, p, rank, pc, pr)
        return rank
    finally:
        free(pc)
        free(pr)


def rank_fp(rows, p):
    return _run(rows, p, False)


def rank_int(rows):
    return _run(rows, 0, False)


def rref_fp(rows, p):
    return _run(rows, p, True)


def rref_int(rows):
    return _run(rows, 0, True)

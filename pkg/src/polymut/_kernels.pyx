# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice-point enumeration.

Same contract as ``polymut._kernels_py``; inputs must fit in int64 with
headroom (the Python wrapper checks this before dispatching here).
"""

from libc.stdlib cimport free, malloc


cdef inline long long _floordiv(long long a, long long b) nogil:
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline long long _ceildiv(long long a, long long b) nogil:
    return -_floordiv(-a, b)


cdef class _Walker:
    cdef int k, m
    cdef long long *A
    cdef long long *b
    cdef long long *lo
    cdef long long *hi
    cdef long long *rest
    cdef long long *s
    cdef long long *cur
    cdef long long *up

    def __cinit__(self, A, b, lo, hi):
        cdef int i, j
        cdef long long acc, a, t1, t2
        self.k = len(A)
        self.m = len(lo)
        k, m = self.k, self.m
        self.A = <long long *> malloc(max(k * m, 1) * sizeof(long long))
        self.b = <long long *> malloc(max(k, 1) * sizeof(long long))
        self.lo = <long long *> malloc(max(m, 1) * sizeof(long long))
        self.hi = <long long *> malloc(max(m, 1) * sizeof(long long))
        self.rest = <long long *> malloc(max(k * m, 1) * sizeof(long long))
        self.s = <long long *> malloc(max(k * (m + 1), 1) * sizeof(long long))
        self.cur = <long long *> malloc(max(m, 1) * sizeof(long long))
        self.up = <long long *> malloc(max(m, 1) * sizeof(long long))
        if not (self.A and self.b and self.lo and self.hi and self.rest
                and self.s and self.cur and self.up):
            raise MemoryError()
        for j in range(m):
            self.lo[j] = lo[j]
            self.hi[j] = hi[j]
        for i in range(k):
            self.b[i] = b[i]
            row = A[i]
            for j in range(m):
                self.A[i * m + j] = row[j]
            acc = 0
            for j in range(m - 1, -1, -1):
                self.rest[i * m + j] = acc
                a = self.A[i * m + j]
                t1 = a * self.lo[j]
                t2 = a * self.hi[j]
                acc += t1 if t1 < t2 else t2

    def __dealloc__(self):
        free(self.A)
        free(self.b)
        free(self.lo)
        free(self.hi)
        free(self.rest)
        free(self.s)
        free(self.cur)
        free(self.up)

    cdef bint _interval(self, int l, long long *low, long long *high) nogil:
        cdef int i
        cdef long long a, slack
        low[0] = self.lo[l]
        high[0] = self.hi[l]
        for i in range(self.k):
            a = self.A[i * self.m + l]
            slack = self.b[i] - self.s[l * self.k + i] - self.rest[i * self.m + l]
            if a > 0:
                slack = _floordiv(slack, a)
                if slack < high[0]:
                    high[0] = slack
            elif a < 0:
                slack = _ceildiv(slack, a)
                if slack > low[0]:
                    low[0] = slack
            elif slack < 0:
                return False
            if low[0] > high[0]:
                return False
        return low[0] <= high[0]

    cdef void _set_level(self, int l, long long x) nogil:
        cdef int i
        self.cur[l] = x
        for i in range(self.k):
            self.s[(l + 1) * self.k + i] = self.s[l * self.k + i] + self.A[i * self.m + l] * x

    cdef long long run(self, out) except -1:
        """Walk the feasible region; append points to ``out`` unless it is None."""
        cdef int i, j, l, m = self.m, k = self.k
        cdef long long low, high, x, total = 0
        cdef bint descend
        if m == 0:
            for i in range(k):
                if self.b[i] < 0:
                    return 0
            if out is not None:
                out.append(())
            return 1
        for i in range(k):
            self.s[i] = 0
        l = 0
        while True:
            descend = False
            if self._interval(l, &low, &high):
                if l == m - 1:
                    total += high - low + 1
                    if out is not None:
                        head = tuple([self.cur[j] for j in range(m - 1)])
                        for x in range(low, high + 1):
                            out.append(head + (x,))
                else:
                    self.up[l] = high
                    self._set_level(l, low)
                    l += 1
                    descend = True
            if descend:
                continue
            # backtrack to the deepest level with values left
            while True:
                l -= 1
                if l < 0:
                    return total
                if self.cur[l] < self.up[l]:
                    self._set_level(l, self.cur[l] + 1)
                    l += 1
                    break


def enumerate_points(A, b, lo, hi):
    out = []
    _Walker(A, b, lo, hi).run(out)
    return out


def count_points(A, b, lo, hi):
    return _Walker(A, b, lo, hi).run(None)

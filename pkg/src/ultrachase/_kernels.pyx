# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bitmask kernels; same contract as ``_kernels_py``."""


def down_violation(const unsigned char[::1] table, int n):
    cdef long m, b, low, size = 1 << n
    for m in range(size):
        if table[m]:
            b = m
            while b:
                low = b & -b
                if not table[m ^ low]:
                    return m, m ^ low
                b ^= low
    return -1, -1


def union_violation(const unsigned char[::1] table, int n):
    cdef long x, y, a, size = 1 << n
    for x in range(size):
        if not table[x]:
            continue
        for y in range(x + 1, size):
            if table[y] and not table[x | y]:
                return x, y
    return -1, -1


def bad_split(const unsigned char[::1] table, long m):
    cdef long s = 0
    while True:
        if not table[s] and not table[m ^ s]:
            return s
        if s == m:
            return -1
        s = (s - m) & m


cdef bint _dichotomy(const unsigned char[::1] table, long m):
    cdef long s = 0
    while True:
        if not (table[s] or table[m & ~s]):
            return False
        if s == m:
            return True
        s = (s - m) & m


def dichotomy_holds(const unsigned char[::1] table, long m):
    return _dichotomy(table, m)


def prime_masks(const unsigned char[::1] table, int n):
    cdef long m, size = 1 << n
    out = []
    for m in range(size):
        if not table[m] and _dichotomy(table, m):
            out.append(m)
    return out


def ultra_violation(const unsigned char[::1] ftable, int n):
    cdef long s, size = 1 << n, full = size - 1
    for s in range(size):
        if (ftable[s] != 0) == (ftable[full ^ s] != 0):
            return s
    return -1


def ideal_codes(int n):
    if n > 4:
        raise ValueError("ideal_codes scans 2**(2**n) families; n <= 4 only")
    cdef int size = 1 << n
    cdef int full = size - 1
    cdef unsigned long long code, ncodes = 1ULL << size
    cdef int m, m2, b, low
    cdef bint ok
    out = []
    for code in range(ncodes):
        if not (code & 1ULL) or (code >> full) & 1ULL:
            continue
        ok = True
        for m in range(size):
            if not (code >> m) & 1ULL:
                continue
            b = m
            while b:
                low = b & -b
                if not (code >> (m ^ low)) & 1ULL:
                    ok = False
                    break
                b ^= low
            if not ok:
                break
            for m2 in range(m + 1, size):
                if (code >> m2) & 1ULL and not (code >> (m | m2)) & 1ULL:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(code)
    return out

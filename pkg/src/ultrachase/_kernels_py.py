"""Pure-Python bitmask kernels for set systems on ``{0, ..., n-1}``.

A family is a membership table ``table[mask]`` of length ``2**n``. Every
function mirrors one in ``_kernels.pyx`` exactly, including tie-breaking.
"""


def down_violation(table, n):
    """First ``(member, submask)`` with the submask missing, or ``(-1, -1)``."""
    for m in range(1 << n):
        if table[m]:
            b = m
            while b:
                low = b & -b
                if not table[m ^ low]:
                    return m, m ^ low
                b ^= low
    return -1, -1


def union_violation(table, n):
    """First ``(a, b)`` with ``a | b`` missing, or ``(-1, -1)``."""
    members = [m for m in range(1 << n) if table[m]]
    for x in range(len(members)):
        a = members[x]
        for y in range(x + 1, len(members)):
            if not table[a | members[y]]:
                return a, members[y]
    return -1, -1


def bad_split(table, m):
    """Least ``s`` inside ``m`` with neither ``s`` nor ``m \\ s`` a member."""
    s = 0
    while True:
        if not table[s] and not table[m ^ s]:
            return s
        if s == m:
            return -1
        s = (s - m) & m


def dichotomy_holds(table, m):
    """Every subset ``s`` of ``m`` has ``s`` or ``m \\ s`` in the family."""
    s = 0
    while True:
        if not (table[s] or table[m & ~s]):
            return False
        if s == m:
            return True
        s = (s - m) & m


def prime_masks(table, n):
    return [m for m in range(1 << n) if not table[m] and dichotomy_holds(table, m)]


def ultra_violation(ftable, n):
    """First ``s`` where exactly-one-of ``s``, complement fails, or -1."""
    full = (1 << n) - 1
    for s in range(1 << n):
        if bool(ftable[s]) == bool(ftable[full ^ s]):
            return s
    return -1


def ideal_codes(n):
    """All proper ideals on ``n`` points as integer codes (bit ``m`` = member).

    Scans every one of the ``2**(2**n)`` families.
    """
    if n > 4:
        raise ValueError("ideal_codes scans 2**(2**n) families; n <= 4 only")
    size = 1 << n
    full = size - 1
    out = []
    for code in range(1 << size):
        if not code & 1 or (code >> full) & 1:
            continue
        ok = True
        for m in range(size):
            if not (code >> m) & 1:
                continue
            b = m
            while b:
                low = b & -b
                if not (code >> (m ^ low)) & 1:
                    ok = False
                    break
                b ^= low
            if not ok:
                break
            for m2 in range(m + 1, size):
                if (code >> m2) & 1 and not (code >> (m | m2)) & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(code)
    return out

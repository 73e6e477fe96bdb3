# cython: language_level=3
# cython: boundscheck=False
"""Compiled twin of homkit._pyred.

Same algorithms, same pivot rule (smallest nonzero absolute value, ties
by position), bit-identical outputs.  Entries stay arbitrary-precision
Python ints; the speedup comes from compiled loop and index handling.
"""

BACKEND = "cython"


def identity_rows(Py_ssize_t n):
    cdef Py_ssize_t i, j
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(list a, list b):
    """Product of list-of-list integer matrices (m*n times n*k)."""
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t n = len(a[0]) if m else 0
    cdef Py_ssize_t k = len(b[0]) if b else 0
    cdef Py_ssize_t i, j, t
    cdef list ai, oi, bt
    out = [[0] * k for _ in range(m)]
    for i in range(m):
        ai = a[i]
        oi = out[i]
        for t in range(n):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(k):
                    y = bt[j]
                    if y:
                        oi[j] = oi[j] + x * y
    return out


def hnf_with_transform(list a):
    """Column-style Hermite form: returns (h, u) with a*u = h."""
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t n = len(a[0]) if m else 0
    cdef Py_ssize_t r = 0
    cdef Py_ssize_t i, j, t, piv
    cdef bint clean
    h = [list(row) for row in a]
    u = identity_rows(n)
    for i in range(m):
        if r == n:
            break
        while True:
            piv = -1
            pa = 0
            for j in range(r, n):
                x = h[i][j]
                if x:
                    ax = -x if x < 0 else x
                    if piv < 0 or ax < pa:
                        piv = j
                        pa = ax
            if piv < 0:
                break
            clean = True
            for j in range(r, n):
                if j == piv:
                    continue
                x = h[i][j]
                if x:
                    q = x // h[i][piv]
                    if q:
                        for t in range(i, m):
                            h[t][j] = h[t][j] - q * h[t][piv]
                        for t in range(n):
                            u[t][j] = u[t][j] - q * u[t][piv]
                    if h[i][j]:
                        clean = False
            if not clean:
                continue
            if piv != r:
                for t in range(i, m):
                    h[t][piv], h[t][r] = h[t][r], h[t][piv]
                for t in range(n):
                    u[t][piv], u[t][r] = u[t][r], u[t][piv]
            if h[i][r] < 0:
                for t in range(i, m):
                    h[t][r] = -h[t][r]
                for t in range(n):
                    u[t][r] = -u[t][r]
            p = h[i][r]
            for j in range(r):
                x = h[i][j]
                q = x // p
                if q:
                    for t in range(i, m):
                        h[t][j] = h[t][j] - q * h[t][r]
                    for t in range(n):
                        u[t][j] = u[t][j] - q * u[t][r]
            r += 1
            break
    return h, u


def snf_with_transforms(list a):
    """Smith form with transforms: returns (u, d, v) with u*a*v = d."""
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t n = len(a[0]) if m else 0
    cdef Py_ssize_t t = 0
    cdef Py_ssize_t i, j, bi, bj, bad
    cdef bint restart
    cdef list d, u, v, dt, di, db, ut, ui, ub, row
    d = [list(row) for row in a]
    u = identity_rows(m)
    v = identity_rows(n)
    while True:
        bi = -1
        bj = -1
        ba = 0
        for i in range(t, m):
            di = d[i]
            for j in range(t, n):
                x = di[j]
                if x:
                    ax = -x if x < 0 else x
                    if bi < 0 or ax < ba:
                        bi = i
                        bj = j
                        ba = ax
        if bi < 0:
            break
        if bi != t:
            d[bi], d[t] = d[t], d[bi]
            u[bi], u[t] = u[t], u[bi]
        if bj != t:
            for row in d:
                row[bj], row[t] = row[t], row[bj]
            for row in v:
                row[bj], row[t] = row[t], row[bj]
        while True:
            restart = False
            for i in range(t + 1, m):
                x = d[i][t]
                if x:
                    q = x // d[t][t]
                    if q:
                        dt = d[t]
                        di = d[i]
                        for j in range(t, n):
                            di[j] = di[j] - q * dt[j]
                        ut = u[t]
                        ui = u[i]
                        for j in range(m):
                            ui[j] = ui[j] - q * ut[j]
                    if d[i][t]:
                        d[i], d[t] = d[t], d[i]
                        u[i], u[t] = u[t], u[i]
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, n):
                x = d[t][j]
                if x:
                    q = x // d[t][t]
                    if q:
                        for row in d:
                            row[j] = row[j] - q * row[t]
                        for row in v:
                            row[j] = row[j] - q * row[t]
                    if d[t][j]:
                        for row in d:
                            row[j], row[t] = row[t], row[j]
                        for row in v:
                            row[j], row[t] = row[t], row[j]
                        restart = True
                        break
            if restart:
                continue
            p = d[t][t]
            bad = -1
            for i in range(t + 1, m):
                di = d[i]
                for j in range(t + 1, n):
                    if di[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            dt = d[t]
            db = d[bad]
            for j in range(t, n):
                dt[j] = dt[j] + db[j]
            ut = u[t]
            ub = u[bad]
            for j in range(m):
                ut[j] = ut[j] + ub[j]
        if d[t][t] < 0:
            for j in range(t, n):
                d[t][j] = -d[t][j]
            for j in range(m):
                u[t][j] = -u[t][j]
        t += 1
        if t == m or t == n:
            break
    return u, d, v

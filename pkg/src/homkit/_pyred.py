"""Integer reduction kernels: Hermite and Smith forms with transforms.

These are the hot loops of the package; every kernel, cokernel, hom group
and saturation above reduces to them.  They operate on mutable
list-of-list matrices of arbitrary-precision Python integers and are
mirrored verbatim by the compiled twin ``homkit._fastred``.

Pivot rule everywhere: smallest nonzero absolute value, ties broken by
position (top-left first).  This makes every decomposition, and hence
every certificate produced downstream, reproducible across runs and
across the two backends.
"""

BACKEND = "python"


def identity_rows(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a, b):
    """Product of list-of-list integer matrices (m*n times n*k)."""
    m = len(a)
    n = len(a[0]) if m else 0
    k = len(b[0]) if b else 0
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
                        oi[j] += x * y
    return out


def hnf_with_transform(a):
    """Column-style Hermite form: returns (h, u) with a*u = h.

    u is unimodular (n*n).  h is in column echelon form: nonzero columns
    come first with strictly increasing pivot rows, pivots are positive,
    and in each pivot row the entries of earlier columns are reduced into
    [0, pivot).  Zero columns of h are exactly the kernel directions and
    the matching columns of u are a basis of the integer kernel of a.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    h = [row[:] for row in a]
    u = identity_rows(n)
    r = 0
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
                            h[t][j] -= q * h[t][piv]
                        for t in range(n):
                            u[t][j] -= q * u[t][piv]
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
                        h[t][j] -= q * h[t][r]
                    for t in range(n):
                        u[t][j] -= q * u[t][r]
            r += 1
            break
    return h, u


def snf_with_transforms(a):
    """Smith form with transforms: returns (u, d, v) with u*a*v = d.

    d is diagonal with nonnegative entries forming a divisibility chain
    d[0] | d[1] | ...; u (m*m) and v (n*n) are unimodular.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [row[:] for row in a]
    u = identity_rows(m)
    v = identity_rows(n)
    t = 0
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
                        bi, bj, ba = i, j, ax
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
                            di[j] -= q * dt[j]
                        ut = u[t]
                        ui = u[i]
                        for j in range(m):
                            ui[j] -= q * ut[j]
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
                            row[j] -= q * row[t]
                        for row in v:
                            row[j] -= q * row[t]
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
                dt[j] += db[j]
            ut = u[t]
            ub = u[bad]
            for j in range(m):
                ut[j] += ub[j]
        if d[t][t] < 0:
            for j in range(t, n):
                d[t][j] = -d[t][j]
            for j in range(m):
                u[t][j] = -u[t][j]
        t += 1
        if t == m or t == n:
            break
    return u, d, v

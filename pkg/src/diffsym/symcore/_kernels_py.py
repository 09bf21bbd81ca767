"""Pure-Python polynomial and rational linear algebra kernels.

A monomial is a flat tuple ``(id0, e0, id1, e1, ...)`` with strictly
increasing symbol ids and positive exponents.  A polynomial is a dict from
monomials to nonzero rational coefficients.  ``_kernels.pyx`` implements the
same functions; ``backend.py`` picks one at import time.
"""


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la = len(a)
    lb = len(b)
    while i < la and j < lb:
        va = a[i]
        vb = b[j]
        if va == vb:
            out.append(va)
            out.append(a[i + 1] + b[j + 1])
            i += 2
            j += 2
        elif va < vb:
            out.append(va)
            out.append(a[i + 1])
            i += 2
        else:
            out.append(vb)
            out.append(b[j + 1])
            j += 2
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return tuple(out)


def mono_div(a, b):
    """a / b if b divides a, else None."""
    out = []
    i = j = 0
    la = len(a)
    lb = len(b)
    while j < lb:
        if i >= la:
            return None
        va = a[i]
        vb = b[j]
        if va == vb:
            e = a[i + 1] - b[j + 1]
            if e < 0:
                return None
            if e:
                out.append(va)
                out.append(e)
            i += 2
            j += 2
        elif va < vb:
            out.append(va)
            out.append(a[i + 1])
            i += 2
        else:
            return None
    if i < la:
        out.extend(a[i:])
    return tuple(out)


def poly_add(p, q):
    if len(p) < len(q):
        p, q = q, p
    r = dict(p)
    for m, c in q.items():
        v = r.get(m)
        if v is None:
            r[m] = c
        else:
            v = v + c
            if v:
                r[m] = v
            else:
                del r[m]
    return r


def poly_sub(p, q):
    r = dict(p)
    for m, c in q.items():
        v = r.get(m)
        if v is None:
            r[m] = -c
        else:
            v = v - c
            if v:
                r[m] = v
            else:
                del r[m]
    return r


def poly_scale(p, c):
    if not c:
        return {}
    return {m: v * c for m, v in p.items()}


def poly_mul_mono(p, mono, c):
    return {mono_mul(m, mono): v * c for m, v in p.items()}


def poly_mul(p, q):
    if len(p) < len(q):
        p, q = q, p
    r = {}
    for mq, cq in q.items():
        for mp, cp in p.items():
            m = mono_mul(mp, mq)
            v = r.get(m)
            if v is None:
                r[m] = cp * cq
            else:
                r[m] = v + cp * cq
    return {m: v for m, v in r.items() if v}


def poly_diff(p, var):
    r = {}
    for m, c in p.items():
        n = len(m)
        i = 0
        while i < n:
            if m[i] == var:
                e = m[i + 1]
                if e == 1:
                    nm = m[:i] + m[i + 2:]
                else:
                    nm = m[:i + 1] + (e - 1,) + m[i + 2:]
                v = r.get(nm)
                r[nm] = c * e if v is None else v + c * e
                break
            if m[i] > var:
                break
            i += 2
    return {m: v for m, v in r.items() if v}


def poly_eval(p, point, one):
    """Evaluate at a point given as dict id -> rational.  Missing ids raise KeyError."""
    total = one - one
    for m, c in p.items():
        t = c
        for i in range(0, len(m), 2):
            t = t * point[m[i]] ** m[i + 1]
        total = total + t
    return total


def rref(rows, ncols):
    """Reduced row echelon form over a field.  Returns (rows, pivot_cols)."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(mat)
    for col in range(ncols):
        if r >= nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if mat[i][col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            mat[r], mat[piv] = mat[piv], mat[r]
        row = mat[r]
        inv = 1 / row[col]
        for k in range(col, ncols):
            if row[k]:
                row[k] = row[k] * inv
        for i in range(nrows):
            if i != r:
                f = mat[i][col]
                if f:
                    other = mat[i]
                    for k in range(col, ncols):
                        if row[k]:
                            other[k] = other[k] - f * row[k]
        pivots.append(col)
        r += 1
    return mat[:r], pivots

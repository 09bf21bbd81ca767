# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled polynomial and rational linear algebra kernels.

Same contract as ``_kernels_py``; monomials are flat (id, exp, ...) tuples.
"""


cpdef tuple mono_mul(tuple a, tuple b):
    cdef Py_ssize_t la = len(a), lb = len(b), i = 0, j = 0
    cdef long va, vb
    if la == 0:
        return b
    if lb == 0:
        return a
    out = []
    while i < la and j < lb:
        va = a[i]
        vb = b[j]
        if va == vb:
            out.append(va)
            out.append(<long>a[i + 1] + <long>b[j + 1])
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


cpdef object mono_div(tuple a, tuple b):
    cdef Py_ssize_t la = len(a), lb = len(b), i = 0, j = 0
    cdef long va, vb, e
    out = []
    while j < lb:
        if i >= la:
            return None
        va = a[i]
        vb = b[j]
        if va == vb:
            e = <long>a[i + 1] - <long>b[j + 1]
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


cpdef dict poly_add(dict p, dict q):
    cdef dict r
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


cpdef dict poly_sub(dict p, dict q):
    cdef dict r = dict(p)
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


cpdef dict poly_scale(dict p, object c):
    if not c:
        return {}
    return {m: v * c for m, v in p.items()}


cpdef dict poly_mul_mono(dict p, tuple mono, object c):
    return {mono_mul(m, mono): v * c for m, v in p.items()}


cpdef dict poly_mul(dict p, dict q):
    cdef dict r = {}
    cdef tuple mp, mq, m
    if len(p) < len(q):
        p, q = q, p
    for mq, cq in q.items():
        for mp, cp in p.items():
            m = mono_mul(mp, mq)
            v = r.get(m)
            if v is None:
                r[m] = cp * cq
            else:
                r[m] = v + cp * cq
    return {m: v for m, v in r.items() if v}


cpdef dict poly_diff(dict p, long var):
    cdef dict r = {}
    cdef tuple m, nm
    cdef Py_ssize_t n, i
    cdef long e, w
    for m, c in p.items():
        n = len(m)
        i = 0
        while i < n:
            w = m[i]
            if w == var:
                e = m[i + 1]
                if e == 1:
                    nm = m[:i] + m[i + 2:]
                else:
                    nm = m[:i + 1] + (e - 1,) + m[i + 2:]
                v = r.get(nm)
                r[nm] = c * e if v is None else v + c * e
                break
            if w > var:
                break
            i += 2
    return {m: v for m, v in r.items() if v}


cpdef object poly_eval(dict p, dict point, object one):
    cdef tuple m
    cdef Py_ssize_t i
    total = one - one
    for m, c in p.items():
        t = c
        for i in range(0, len(m), 2):
            t = t * point[m[i]] ** m[i + 1]
        total = total + t
    return total


def rref(rows, Py_ssize_t ncols):
    cdef list mat = [list(row_in) for row_in in rows]
    cdef list pivots = []
    cdef Py_ssize_t r = 0, nrows = len(mat), col, i, k, piv
    cdef list row, other
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
        nz = [k for k in range(col, ncols) if row[k]]
        for i in range(nrows):
            if i != r:
                other = mat[i]
                f = other[col]
                if f:
                    for k in nz:
                        other[k] = other[k] - f * row[k]
        pivots.append(col)
        r += 1
    return mat[:r], pivots

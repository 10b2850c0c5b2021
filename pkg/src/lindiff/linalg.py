"""
Gaussian elimination over Q(x).

Pivots are chosen by least total degree (numerator plus denominator) to keep
intermediate expressions small.
"""

from .field import ONE, ZERO


def _weight(f):
    return f.weight()


class IncrementalDependence:
    """Feed vectors one at a time; ``add`` returns the first linear relation.

    The relation is returned as a list ``c`` with ``c[-1] == 1`` and
    ``sum(c[i] * v_i) == 0``.
    """

    def __init__(self):
        self._rows = []  # (pivot, reduced vector, combination dict)
        self._count = 0

    def add(self, vec):
        idx = self._count
        self._count += 1
        v = list(vec)
        comb = {idx: ONE}
        for p, w, wc in self._rows:
            c = v[p]
            if c.is_zero():
                continue
            for j, wj in enumerate(w):
                if not wj.is_zero():
                    v[j] = v[j] - c * wj
            for k, ck in wc.items():
                comb[k] = comb.get(k, ZERO) - c * ck
        nz = [j for j, a in enumerate(v) if not a.is_zero()]
        if not nz:
            coeffs = [comb.get(k, ZERO) for k in range(idx + 1)]
            lead = coeffs[-1]
            if not lead.is_one():
                inv = lead.inverse()
                coeffs = [inv * c for c in coeffs]
            return coeffs
        p = min(nz, key=lambda j: (_weight(v[j]), j))
        inv = v[p].inverse()
        w = [inv * a if not a.is_zero() else ZERO for a in v]
        wc = {k: inv * ck for k, ck in comb.items() if not ck.is_zero()}
        self._rows.append((p, w, wc))
        return None

    @property
    def rank(self):
        return len(self._rows)

    def solve(self, rhs):
        """Solve v_k . z = rhs[k] for the independent vectors fed so far.

        Requires the vectors to span the whole space (square system).
        """
        rows = self._rows
        n = len(rows[0][1]) if rows else 0
        if len(rows) != n:
            raise ValueError("singular linear system")
        b = []
        for _, _, wc in rows:
            s = ZERO
            for k, ck in wc.items():
                if not rhs[k].is_zero():
                    s = s + ck * rhs[k]
            b.append(s)
        # row r vanishes on the pivots of earlier rows
        z = [ZERO] * n
        for r in range(n - 1, -1, -1):
            p, w, _ = rows[r]
            s = b[r]
            for q, _, _ in rows[r + 1:]:
                if not w[q].is_zero() and not z[q].is_zero():
                    s = s - w[q] * z[q]
            z[p] = s
        return z


def first_dependence(vecs):
    inc = IncrementalDependence()
    for v in vecs:
        dep = inc.add(v)
        if dep is not None:
            return dep
    raise ValueError("vectors are linearly independent")


def rref(rows, ncols=None):
    """Reduced row echelon form of a matrix over Q(x).

    Returns (reduced_rows, pivot_columns).
    """
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for col in range(ncols):
        cand = [i for i in range(r, len(M)) if not M[i][col].is_zero()]
        if not cand:
            continue
        i = min(cand, key=lambda k: (_weight(M[k][col]), k))
        M[r], M[i] = M[i], M[r]
        inv = M[r][col].inverse()
        M[r] = [inv * a if not a.is_zero() else ZERO for a in M[r]]
        for k in range(len(M)):
            if k != r and not M[k][col].is_zero():
                c = M[k][col]
                M[k] = [a - c * b if not b.is_zero() else a for a, b in zip(M[k], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def nullspace(rows, ncols):
    """Basis of the right kernel {v : rows * v = 0} over Q(x)."""
    R, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(rows, rhs):
    """Solve rows * v = rhs for a unique v (raises if singular)."""
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(aug, n)
    if len(pivots) < n:
        raise ValueError("singular linear system")
    return [R[i][n] for i in range(n)]


def det(rows):
    """Determinant by fraction elimination (small matrices only)."""
    M = [list(r) for r in rows]
    n = len(M)
    d = ONE
    for col in range(n):
        cand = [i for i in range(col, n) if not M[i][col].is_zero()]
        if not cand:
            return ZERO
        i = cand[0]
        if i != col:
            M[col], M[i] = M[i], M[col]
            d = -d
        piv = M[col][col]
        d = d * piv
        inv = piv.inverse()
        for k in range(col + 1, n):
            if not M[k][col].is_zero():
                c = M[k][col] * inv
                M[k] = [a - c * b for a, b in zip(M[k], M[col])]
    return d

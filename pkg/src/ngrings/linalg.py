"""
Exact linear algebra over the rationals.

Vectors are sparse dicts ``{column: Fraction}`` with zero entries absent.
Columns may be any mutually comparable keys (ints, exponent tuples).
"""

from fractions import Fraction


def sparse(vec):
    """Drop zero entries and coerce values to Fraction."""
    return {k: Fraction(v) for k, v in vec.items() if v != 0}


class Echelon:
    """Incrementally built row-echelon basis of a subspace.

    Each stored row has its smallest column as pivot, normalised to 1, and
    no two rows share a pivot.  ``add`` reduces a vector against the basis
    and keeps the remainder if it is nonzero.
    """

    def __init__(self):
        self.rows = {}

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec):
        v = dict(vec)
        out = {}
        while v:
            p = min(v)
            c = v.pop(p)
            row = self.rows.get(p)
            if row is None:
                out[p] = c
                continue
            for k, x in row.items():
                if k == p:
                    continue
                y = v.get(k, 0) - c * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        return out

    def add(self, vec):
        """Add ``vec`` to the span; return True if the rank went up."""
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        c = r[p]
        self.rows[p] = {k: Fraction(x) / c for k, x in r.items()}
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    def basis(self):
        return [dict(self.rows[p]) for p in sorted(self.rows)]


def rank(vectors):
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def span_contains(basis, vectors):
    """True if every vector in ``vectors`` lies in the span of ``basis``."""
    ech = Echelon()
    for v in basis:
        ech.add(v)
    return all(ech.contains(v) for v in vectors)


def determinant(matrix):
    """Exact determinant of a square integer/rational matrix (list of rows)."""
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def iter_leading_minors(matrix):
    """Yield leading principal minors lazily by fraction-free elimination."""
    m = [[int(x) for x in row] for row in matrix]
    n = len(m)
    prev = 1
    for k in range(n):
        if m[k][k] == 0:
            # the pivot is the k-th minor; Bareiss cannot go on, so the rest
            # come from direct determinants
            yield 0
            for i in range(k + 1, n):
                yield int(determinant([row[: i + 1] for row in matrix[: i + 1]]))
            return
        yield m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]


def leading_minors(matrix):
    """Leading principal minors, computed by fraction-free elimination."""
    return list(iter_leading_minors(matrix))


def in_integer_span(vec, generators):
    """Decide whether an integer vector lies in the Z-span of ``generators``.

    All vectors are equal-length lists of ints.  Uses a Hermite-style row
    reduction with extended gcd steps.
    """
    n = len(vec)
    rows = [list(g) for g in generators if any(g)]
    basis = []
    for col in range(n):
        nz = [r for r in rows if r[col] != 0]
        rows = [r for r in rows if r[col] == 0]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            head = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // head[col]
                r = [a - q * b for a, b in zip(r, head)]
                if r[col] != 0:
                    rest.append(r)
                elif any(r):
                    rows.append(r)
            nz = [head] + rest
        if nz:
            basis.append((col, nz[0]))
    v = list(vec)
    for col, row in basis:
        if v[col] % row[col]:
            return False
        q = v[col] // row[col]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)

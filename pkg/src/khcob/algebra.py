"""Exact integer linear algebra: Smith normal form, membership, homology.

Everything works over Python integers.  Matrices are stored sparsely; the
reductions convert to dense row lists internally, which is fine at the sizes
Khovanov gradings of small diagrams produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DimensionMismatch, NotAComplex, TargetExpressionFailed


class IntegerMatrix:
    """Sparse integer matrix; zero entries are never stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[Dict] = None):
        self.rows = int(rows)
        self.cols = int(cols)
        self.entries = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise DimensionMismatch(f"entry ({i},{j}) outside {rows}x{cols}")
            if v:
                self.entries[(i, j)] = int(v)

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        m = len(rows)
        n = len(rows[0]) if rows else 0
        return cls(m, n, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def dense(self) -> List[List[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def __eq__(self, other):
        return (
            isinstance(other, IntegerMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + v * w
        return IntegerMatrix(self.rows, other.cols, acc)

    def apply(self, vec: Sequence[int]) -> List[int]:
        if len(vec) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vec)} for {self.cols} columns")
        out = [0] * self.rows
        for (i, j), v in self.entries.items():
            out[i] += v * vec[j]
        return out

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def dump(self) -> str:
        """``rows cols`` then one ``r c value`` line per nonzero entry."""
        lines = [f"{self.rows} {self.cols}"]
        for (i, j) in sorted(self.entries):
            lines.append(f"{i} {j} {self.entries[(i, j)]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> "IntegerMatrix":
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        rows, cols = int(lines[0][0]), int(lines[0][1])
        return cls(rows, cols, {(int(a), int(b)): int(c) for a, b, c in lines[1:]})

    def __repr__(self):
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


# --------------------------------------------------------------- dense ops
def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul_dense(a, b):
    if not a:
        return []
    n = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * n
        for k, v in enumerate(row):
            if v:
                bk = b[k]
                for j in range(n):
                    if bk[j]:
                        acc[j] += v * bk[j]
        out.append(acc)
    return out


def det_dense(a) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank_fraction_free(a: IntegerMatrix) -> int:
    """Rank over the rationals by Bareiss elimination (no torsion data)."""
    m = a.dense()
    rows, cols = a.rows, a.cols
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, rows):
            mi = m[i]
            f = mi[c]
            mr = m[r]
            for j in range(c + 1, cols):
                mi[j] = (mi[j] * p - f * mr[j]) // prev
            mi[c] = 0
        prev = p
        r += 1
        if r == rows:
            break
    return r


# ---------------------------------------------------------------- Smith form
@dataclass
class SmithDecomposition:
    """``A = U·S·V`` with U, V unimodular and S diagonal.

    ``P = U⁻¹`` and ``Q = V⁻¹`` are kept as well, so ``P·A·Q = S``.
    """

    U: IntegerMatrix
    S: IntegerMatrix
    V: IntegerMatrix
    P: IntegerMatrix
    Q: IntegerMatrix
    diag: List[int]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)


def _snf_dense(a, rows, cols, track=True):
    """Reduce ``a`` in place.  Returns (P, Pinv, Q, Qinv) with P·A·Q = S."""
    P = _identity(rows) if track else None
    Pi = _identity(rows) if track else None
    Q = _identity(cols) if track else None
    Qi = _identity(cols) if track else None

    def row_add(i, j, k):  # row_i += k * row_j
        ai, aj = a[i], a[j]
        for c in range(cols):
            if aj[c]:
                ai[c] += k * aj[c]
        if track:
            pi_, pj = P[i], P[j]
            for c in range(rows):
                if pj[c]:
                    pi_[c] += k * pj[c]
            # inverse: column_j of Pinv -= k * column_i
            for r in range(rows):
                if Pi[r][i]:
                    Pi[r][j] -= k * Pi[r][i]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        if track:
            P[i], P[j] = P[j], P[i]
            for r in range(rows):
                Pi[r][i], Pi[r][j] = Pi[r][j], Pi[r][i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        if track:
            P[i] = [-x for x in P[i]]
            for r in range(rows):
                Pi[r][i] = -Pi[r][i]

    def col_add(i, j, k):  # col_i += k * col_j
        for r in range(rows):
            ar = a[r]
            if ar[j]:
                ar[i] += k * ar[j]
        if track:
            for r in range(cols):
                if Q[r][j]:
                    Q[r][i] += k * Q[r][j]
            # inverse: row_j of Qinv -= k * row_i
            qi_i, qi_j = Qi[i], Qi[j]
            for c in range(cols):
                if qi_i[c]:
                    qi_j[c] -= k * qi_i[c]

    def col_swap(i, j):
        for r in range(rows):
            ar = a[r]
            ar[i], ar[j] = ar[j], ar[i]
        if track:
            for r in range(cols):
                Q[r][i], Q[r][j] = Q[r][j], Q[r][i]
            Qi[i], Qi[j] = Qi[j], Qi[i]

    t = 0
    while t < rows and t < cols:
        # pivot: smallest |value| in the remaining block, ties by (row, col)
        best = None
        for i in range(t, rows):
            ai = a[i]
            for j in range(t, cols):
                v = ai[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            p = a[t][t]
            moved = False
            for i in range(t + 1, rows):
                v = a[i][t]
                if v:
                    row_add(i, t, -(v // p))
                    if a[i][t]:
                        row_swap(i, t)
                        moved = True
                        break
            if moved:
                continue
            p = a[t][t]
            for j in range(t + 1, cols):
                v = a[t][j]
                if v:
                    col_add(j, t, -(v // p))
                    if a[t][j]:
                        col_swap(j, t)
                        moved = True
                        break
            if moved:
                continue
            # divisibility of the remaining block
            p = a[t][t]
            bad = None
            for i in range(t + 1, rows):
                ai = a[i]
                for j in range(t + 1, cols):
                    if ai[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if a[t][t] < 0:
            row_neg(t)
        t += 1
    return P, Pi, Q, Qi


def smith_normal_form(A: IntegerMatrix) -> SmithDecomposition:
    rows, cols = A.rows, A.cols
    a = A.dense()
    P, Pi, Q, Qi = _snf_dense(a, rows, cols, track=True)
    diag = [a[i][i] for i in range(min(rows, cols))]
    S = IntegerMatrix(rows, cols, {(i, i): v for i, v in enumerate(diag) if v})
    return SmithDecomposition(
        U=IntegerMatrix.from_dense(Pi) if rows else IntegerMatrix(0, 0),
        S=S,
        V=IntegerMatrix.from_dense(Qi) if cols else IntegerMatrix(0, 0),
        P=IntegerMatrix.from_dense(P) if rows else IntegerMatrix(0, 0),
        Q=IntegerMatrix.from_dense(Q) if cols else IntegerMatrix(0, 0),
        diag=diag,
    )


def invariant_factors(A: IntegerMatrix) -> List[int]:
    a = A.dense()
    _snf_dense(a, A.rows, A.cols, track=False)
    return [a[i][i] for i in range(min(A.rows, A.cols))]


def in_image(A: IntegerMatrix, b: Sequence[int], snf: Optional[SmithDecomposition] = None):
    """Return ``(True, x)`` with ``A·x = b`` over the integers, else ``(False, None)``."""
    b = list(b)
    if len(b) != A.rows:
        raise DimensionMismatch(f"vector of length {len(b)} for {A.rows} rows")
    if not any(b):
        return True, [0] * A.cols
    if A.cols == 0:
        return False, None
    snf = snf or smith_normal_form(A)
    pb = snf.P.apply(b)
    y = [0] * A.cols
    for i, v in enumerate(pb):
        d = snf.diag[i] if i < len(snf.diag) else 0
        if d == 0:
            if v:
                return False, None
        else:
            if v % d:
                return False, None
            y[i] = v // d
    return True, snf.Q.apply(y)


# ------------------------------------------------------------------ homology
@dataclass
class HomologyPresentation:
    """ker(d_out)/im(d_in) as a sum of cyclic groups with generators.

    ``summands[i]`` is 0 for a copy of Z and m > 1 for Z/m.  ``vectors[i]`` is
    the generator as an integer vector over ``basis``; ``generators`` holds the
    same as chain elements when a basis of chain elements was supplied.
    """

    grading: Optional[Tuple[int, int]]
    summands: List[int]
    vectors: List[List[int]]
    generators: list
    boundary_basis: List[List[int]]
    basis: list
    _qinv_rows: list = field(default_factory=list, repr=False)
    _rank_out: int = 0
    _p2: list = field(default_factory=list, repr=False)
    _diag2: list = field(default_factory=list, repr=False)
    _keep: list = field(default_factory=list, repr=False)

    @property
    def free_rank(self) -> int:
        return sum(1 for s in self.summands if s == 0)

    @property
    def torsion(self) -> List[int]:
        return [s for s in self.summands if s > 1]

    def coordinates(self, z: Sequence[int]) -> List[int]:
        """Class of the cycle z in terms of the generators (torsion entries
        reduced modulo their order)."""
        z = list(z)
        if len(z) != len(self.basis):
            raise DimensionMismatch("cycle length does not match the basis")
        y = []
        for row in self._qinv_rows[self._rank_out:]:
            y.append(sum(a * b for a, b in zip(row, z) if a))
        # y must reproduce z exactly, otherwise z is not a cycle
        for row in self._qinv_rows[: self._rank_out]:
            if sum(a * b for a, b in zip(row, z) if a):
                raise TargetExpressionFailed("vector is not a cycle")
        w = [sum(a * b for a, b in zip(row, y) if a) for row in self._p2]
        out = []
        for idx in self._keep:
            s = self._diag2[idx] if idx < len(self._diag2) else 0
            out.append(w[idx] % s if s > 1 else w[idx])
        return out

    def as_dict(self):
        return {
            "grading": list(self.grading) if self.grading else None,
            "summands": list(self.summands),
            "free_rank": self.free_rank,
            "torsion": self.torsion,
        }


def homology(d_in: IntegerMatrix, d_out: IntegerMatrix, basis=None, grading=None,
             element_factory=None) -> HomologyPresentation:
    """Homology at the middle term of ``C_in --d_in--> C --d_out--> C_out``."""
    m = d_out.cols
    if d_in.rows != m:
        raise DimensionMismatch("d_in and d_out disagree on the middle dimension")
    if basis is not None and len(basis) != m:
        raise DimensionMismatch("basis size does not match the matrices")
    if not (d_out @ d_in).is_zero():
        raise NotAComplex("d_out · d_in is nonzero")
    # kernel of d_out
    if d_out.rows and d_out.cols:
        s1 = smith_normal_form(d_out)
        r1 = s1.rank
        Q = s1.Q.dense()
        Qi = s1.V.dense()
    else:
        r1 = 0
        Q = _identity(m)
        Qi = _identity(m)
    k = m - r1
    kernel_cols = [[Q[i][j] for i in range(m)] for j in range(r1, m)]
    # image of d_in in kernel coordinates
    a2 = [[0] * d_in.cols for _ in range(k)]
    for (i, c), v in d_in.entries.items():
        for r in range(k):
            w = Qi[r1 + r][i]
            if w:
                a2[r][c] += w * v
    if k and d_in.cols:
        snf2 = smith_normal_form(IntegerMatrix.from_dense(a2))
        diag2 = snf2.diag
        Pinv2 = snf2.U.dense()
        P2 = snf2.P.dense()
    else:
        diag2 = []
        Pinv2 = _identity(k)
        P2 = _identity(k)
    summands, vectors, keep = [], [], []
    for i in range(k):
        s = diag2[i] if i < len(diag2) else 0
        if s == 1:
            continue
        col = [Pinv2[r][i] for r in range(k)]
        vec = [sum(kernel_cols[r][t] * col[r] for r in range(k) if col[r]) for t in range(m)]
        summands.append(s)
        vectors.append(vec)
        keep.append(i)
    bnd = []
    for i, s in enumerate(diag2):
        if s:
            col = [Pinv2[r][i] for r in range(k)]
            bnd.append([s * sum(kernel_cols[r][t] * col[r] for r in range(k) if col[r])
                        for t in range(m)])
    gens = []
    if basis is not None and element_factory is not None:
        gens = [element_factory(vec) for vec in vectors]
    return HomologyPresentation(
        grading=grading, summands=summands, vectors=vectors, generators=gens,
        boundary_basis=bnd, basis=list(basis) if basis is not None else list(range(m)),
        _qinv_rows=Qi, _rank_out=r1, _p2=P2, _diag2=diag2, _keep=keep,
    )


def homology_with_generators(d_in: IntegerMatrix, d_out: IntegerMatrix, basis):
    """Homology with generators as integer combinations of ``basis``.

    When ``basis`` holds chain-element keys inside a ``(diagram, keys)`` pair
    the generators come back as chain elements.
    """
    factory = None
    diagram = None
    keys = basis
    if isinstance(basis, tuple) and len(basis) == 2 and hasattr(basis[0], "crossings"):
        diagram, keys = basis
        from .state import element_of

        def factory(vec):
            return element_of(diagram, keys, vec)

    return homology(d_in, d_out, basis=list(keys), element_factory=factory)


def smith_check(A: IntegerMatrix, snf: SmithDecomposition) -> bool:
    """Verify ``A = U·S·V``, diagonal shape and the divisibility chain."""
    if (snf.U @ snf.S @ snf.V) != A:
        return False
    for (i, j) in snf.S.entries:
        if i != j:
            return False
    diag = snf.diag
    nz = [d for d in diag if d]
    if any(d < 0 for d in diag):
        return False
    if nz != diag[: len(nz)]:
        return False
    return all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


def gcd_list(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g

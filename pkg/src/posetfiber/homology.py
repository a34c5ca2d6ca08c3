"""Exact integral simplicial homology.

Everything here works over Python integers, so entry growth during Smith
normal form reduction never overflows.  Orientation follows the sorted vertex
order of each simplex: the i-th face of ``(v0, ..., vd)`` (the one omitting
``vi``) enters the boundary with sign ``(-1)**i``.

Homology is always *reduced*: chain complexes are augmented by a copy of Z in
degree -1, so a point is acyclic and the empty complex has H_{-1} = Z.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from math import gcd
from typing import Optional

from .complex import SimplicialComplex, SimplicialMap, boundary_faces, simplex_key, vertex_key


class IntegerMatrix:
    """Dense integer matrix that remembers its shape even when it has no rows."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows: Iterable[Iterable[int]] = (), nrows: Optional[int] = None,
                 ncols: Optional[int] = None):
        rows = [list(map(int, r)) for r in rows]
        self.nrows = len(rows) if nrows is None else nrows
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        self.ncols = ncols
        if not rows:
            rows = [[0] * ncols for _ in range(self.nrows)]
        if len(rows) != self.nrows or any(len(r) != ncols for r in rows):
            raise ValueError("ragged or mis-sized matrix")
        self.rows = rows

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntegerMatrix:
        return cls(nrows=nrows, ncols=ncols)

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def copy(self) -> IntegerMatrix:
        return IntegerMatrix([r[:] for r in self.rows], self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows]
        return IntegerMatrix(out, self.nrows, other.ncols)

    def __neg__(self) -> IntegerMatrix:
        return IntegerMatrix([[-a for a in r] for r in self.rows], self.nrows, self.ncols)

    def transpose(self) -> IntegerMatrix:
        cols = [list(c) for c in zip(*self.rows)] if self.nrows else [[] for _ in range(self.ncols)]
        return IntegerMatrix(cols, self.ncols, self.nrows)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.rows}, shape={self.shape})"

    def dump(self) -> str:
        """Dense rows of integers, one row per line."""
        return "\n".join(" ".join(str(a) for a in r) for r in self.rows)


def block(blocks: Sequence[Sequence[IntegerMatrix]]) -> IntegerMatrix:
    """Assemble a block matrix; blocks in a row share nrows, in a column ncols."""
    heights = [row[0].nrows for row in blocks]
    widths = [m.ncols for m in blocks[0]]
    rows = []
    for bi, brow in enumerate(blocks):
        for i in range(heights[bi]):
            r = []
            for m in brow:
                r.extend(m.rows[i])
            rows.append(r)
    return IntegerMatrix(rows, sum(heights), sum(widths))


def determinant(M: IntegerMatrix) -> int:
    """Fraction-free (Bareiss) determinant."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [r[:] for r in M.rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# Smith normal form


@dataclass
class SnfDecomposition:
    """``U @ M @ V == S`` with U, V unimodular and S in Smith form."""

    S: IntegerMatrix
    U: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i, i] for i in range(min(self.S.shape)) if self.S[i, i] != 0]

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _normalize_diagonal(ds: list[int]) -> list[int]:
    """Turn nonzero diagonal entries into an invariant-factor chain."""
    ds = sorted(abs(d) for d in ds)
    n = len(ds)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = ds[i], ds[j]
            g = gcd(a, b)
            ds[i], ds[j] = g, a // g * b
    return ds


def smith_normal_form(M: IntegerMatrix) -> SnfDecomposition:
    """Smith normal form with unimodular transforms.

    Pivots on the smallest nonzero entry of the remaining block, clears its
    row and column with quotient steps, and restores divisibility by adding a
    offending row into the pivot row.
    """
    m, n = M.shape
    A = [r[:] for r in M.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):  # row dst += q * row src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                # a remainder smaller than |p| sits in row t or column t
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]

    return SnfDecomposition(IntegerMatrix(A, m, n), IntegerMatrix(U, m, m), IntegerMatrix(V, n, n))


def check_snf(M: IntegerMatrix, snf: SnfDecomposition) -> None:
    """Assert every postcondition of a Smith decomposition."""
    S, U, V = snf.S, snf.U, snf.V
    assert U @ M @ V == S, "U M V != S"
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1, "transform not unimodular"
    k = min(S.shape)
    for i in range(S.nrows):
        for j in range(S.ncols):
            assert i == j or S[i, j] == 0, "S not diagonal"
    d = [S[i, i] for i in range(k)]
    r = sum(1 for x in d if x)
    assert all(x > 0 for x in d[:r]) and all(x == 0 for x in d[r:]), "zeros not trailing or sign wrong"
    assert all(d[i + 1] % d[i] == 0 for i in range(r - 1)), "divisibility chain broken"


def invariant_factors(M: IntegerMatrix) -> list[int]:
    """Nonzero invariant factors of ``M`` (so ``len`` is the rank).

    Sparse elimination without transforms, for boundary matrices.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(M.rows):
        entries = {j: a for j, a in enumerate(r) if a}
        if entries:
            rows[i] = entries
            for j in entries:
                cols.setdefault(j, set()).add(i)

    def set_entry(i, j, a):
        if a:
            rows.setdefault(i, {})[j] = a
            cols.setdefault(j, set()).add(i)
        else:
            r = rows.get(i)
            if r is not None and j in r:
                del r[j]
                if not r:
                    del rows[i]
                cols[j].discard(i)
                if not cols[j]:
                    del cols[j]

    diag = []
    while rows:
        p_abs, pi, pj = None, None, None
        for i, r in rows.items():
            for j, a in r.items():
                if p_abs is None or abs(a) < p_abs:
                    p_abs, pi, pj = abs(a), i, j
                    if p_abs == 1:
                        break
            if p_abs == 1:
                break
        p = rows[pi][pj]
        for i in list(cols[pj]):
            if i == pi:
                continue
            q = rows[i][pj] // p
            for j, a in list(rows[pi].items()):
                set_entry(i, j, rows.get(i, {}).get(j, 0) - q * a)
        for j in list(rows[pi]):
            if j == pj:
                continue
            q = rows[pi][j] // p
            for i in list(cols[pj]):
                set_entry(i, j, rows.get(i, {}).get(j, 0) - q * rows[i][pj])
        if len(rows[pi]) == 1 and len(cols[pj]) == 1:
            diag.append(abs(p))
            set_entry(pi, pj, 0)
    return _normalize_diagonal(diag)


# chain complexes


@dataclass(frozen=True)
class HomologyGroup:
    """Z^betti + Z/t_1 + ... + Z/t_k in a given degree."""

    degree: int
    betti: int
    torsion: tuple[int, ...] = ()

    def is_trivial(self) -> bool:
        return self.betti == 0 and not self.torsion

    def __str__(self) -> str:
        parts = (["Z" if self.betti == 1 else f"Z^{self.betti}"] if self.betti else [])
        parts += [f"Z/{t}" for t in self.torsion]
        return f"H~{self.degree} = " + (" + ".join(parts) or "0")

    def to_json(self) -> dict:
        return {"degree": self.degree, "betti": self.betti, "torsion": list(self.torsion)}


def nontrivial(groups: Iterable[HomologyGroup]) -> tuple[HomologyGroup, ...]:
    """The nonzero groups only; two complexes have isomorphic homology iff these agree."""
    return tuple(g for g in groups if not g.is_trivial())


def chain_homology(dims: dict[int, int], diffs: dict[int, IntegerMatrix]) -> list[HomologyGroup]:
    """Homology of a chain complex of free modules.

    ``dims[d]`` is the rank of the degree-d module and ``diffs[d]`` the
    differential out of degree d (shape ``dims[d-1] x dims[d]``); missing
    differentials are zero.
    """
    factors = {d: invariant_factors(D) for d, D in diffs.items()}
    out = []
    for d in sorted(dims):
        rank_out = len(factors.get(d, ()))
        into = factors.get(d + 1, [])
        betti = dims[d] - rank_out - len(into)
        out.append(HomologyGroup(d, betti, tuple(t for t in into if t > 1)))
    return out


def _index(K: SimplicialComplex, d: int) -> dict:
    return {s: k for k, s in enumerate(K.simplices_of_dim(d))}


def boundary_matrices(K: SimplicialComplex, augmented: bool = True) -> dict[int, IntegerMatrix]:
    """Boundary maps keyed by source degree.

    ``result[d]`` maps d-chains to (d-1)-chains; rows and columns follow
    ``K.simplices_of_dim``.  With ``augmented`` the degree-0 entry is the
    1 x n0 augmentation row of ones.
    """
    out = {}
    if augmented:
        out[0] = IntegerMatrix([[1] * len(K.simplices_of_dim(0))], 1, len(K.simplices_of_dim(0)))
    for d in range(1, K.dimension + 1):
        rows_idx = _index(K, d - 1)
        cols = K.simplices_of_dim(d)
        M = IntegerMatrix.zeros(len(rows_idx), len(cols))
        for c, s in enumerate(cols):
            for i, f in enumerate(boundary_faces(s)):
                M.rows[rows_idx[f]][c] = -1 if i % 2 else 1
        out[d] = M
    return out


def chain_dims(K: SimplicialComplex) -> dict[int, int]:
    dims = {-1: 1}
    for d in range(K.dimension + 1):
        dims[d] = len(K.simplices_of_dim(d))
    return dims


def reduced_homology(K: SimplicialComplex) -> list[HomologyGroup]:
    """Reduced homology in degrees -1 .. dim K (degree -1 is nonzero only for the empty complex)."""
    return chain_homology(chain_dims(K), boundary_matrices(K))


def betti_unreduced(K: SimplicialComplex) -> list[int]:
    """Ordinary Betti numbers b_0 .. b_dim."""
    dims = {d: n for d, n in chain_dims(K).items() if d >= 0}
    diffs = {d: M for d, M in boundary_matrices(K, augmented=False).items()}
    return [g.betti for g in chain_homology(dims, diffs)]


# chain maps and the mapping cone


def _permutation_sign(seq: Sequence) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if vertex_key(seq[i]) > vertex_key(seq[j]):
                sign = -sign
    return sign


@dataclass
class ChainMap:
    """Per-degree matrices of a chain map between augmented simplicial chain complexes."""

    source: SimplicialComplex
    target: SimplicialComplex
    matrices: dict[int, IntegerMatrix]

    def check(self) -> None:
        """Assert commutation with the boundaries in every degree."""
        bs = boundary_matrices(self.source)
        bt = boundary_matrices(self.target)
        sd, td = chain_dims(self.source), chain_dims(self.target)
        for d, F in self.matrices.items():
            if d - 1 not in self.matrices:
                continue
            dt = bt.get(d, IntegerMatrix.zeros(td.get(d - 1, 0), td.get(d, 0)))
            ds = bs.get(d, IntegerMatrix.zeros(sd.get(d - 1, 0), sd.get(d, 0)))
            assert dt @ F == self.matrices[d - 1] @ ds, f"chain map does not commute in degree {d}"


def chain_map_of(phi: SimplicialMap) -> ChainMap:
    """Simplicial chain map; degenerate images go to zero, others carry the sorting sign."""
    K, L = phi.source, phi.target
    mats = {-1: IntegerMatrix([[1]], 1, 1)}
    for d in range(K.dimension + 1):
        rows_idx = _index(L, d)
        cols = K.simplices_of_dim(d)
        M = IntegerMatrix.zeros(len(rows_idx), len(cols))
        for c, s in enumerate(cols):
            img = [phi(v) for v in s]
            if len(set(img)) < len(img):
                continue
            t = tuple(sorted(img, key=vertex_key))
            M.rows[rows_idx[t]][c] = _permutation_sign(img)
        mats[d] = M
    cm = ChainMap(K, L, mats)
    cm.check()
    return cm


def mapping_cone(F: ChainMap) -> tuple[dict[int, int], dict[int, IntegerMatrix]]:
    """Algebraic mapping cone: degree d is target_d + source_{d-1}.

    The differential is [[dT, F], [0, -dS]].
    """
    sd, td = chain_dims(F.source), chain_dims(F.target)
    bs, bt = boundary_matrices(F.source), boundary_matrices(F.target)
    top = max(max(td), max(sd) + 1)

    def tdim(d):
        return td.get(d, 0)

    def sdim(d):
        return sd.get(d, 0)

    def dT(d):
        return bt.get(d, IntegerMatrix.zeros(tdim(d - 1), tdim(d)))

    def dS(d):
        return bs.get(d, IntegerMatrix.zeros(sdim(d - 1), sdim(d)))

    def Fm(d):
        return F.matrices.get(d, IntegerMatrix.zeros(tdim(d), sdim(d)))

    dims = {d: tdim(d) + sdim(d - 1) for d in range(-1, top + 1)}
    diffs = {}
    for d in range(0, top + 1):
        diffs[d] = block([
            [dT(d), Fm(d - 1)],
            [IntegerMatrix.zeros(sdim(d - 2), tdim(d)), -dS(d - 1)],
        ])
    return dims, diffs


def cone_homology(phi: SimplicialMap) -> list[HomologyGroup]:
    dims, diffs = mapping_cone(chain_map_of(phi))
    return chain_homology(dims, diffs)


def cone_trivial_up_to(phi: SimplicialMap, n: int) -> tuple[bool, Optional[HomologyGroup]]:
    """Whether the mapping cone of ``phi`` is acyclic through degree ``n + 1``.

    By the long exact sequence of the cone this holds exactly when ``phi``
    induces isomorphisms on reduced homology in degrees <= n and an
    epimorphism in degree n + 1.  The second item is the lowest nonzero cone
    group, if any.
    """
    for g in cone_homology(phi):
        if g.degree > n + 1:
            break
        if not g.is_trivial():
            return False, g
    return True, None


def homology_report(groups: Iterable[HomologyGroup]) -> dict:
    """JSON view: ``{degree: {"betti": b, "torsion": [...]}}`` for every listed degree."""
    return {str(g.degree): {"betti": g.betti, "torsion": list(g.torsion)} for g in groups}


__all__ = [
    "ChainMap", "HomologyGroup", "IntegerMatrix", "SnfDecomposition", "block", "boundary_matrices",
    "betti_unreduced", "chain_homology", "chain_map_of", "check_snf", "cone_homology",
    "cone_trivial_up_to", "determinant", "homology_report", "invariant_factors", "mapping_cone",
    "nontrivial", "reduced_homology", "smith_normal_form",
]

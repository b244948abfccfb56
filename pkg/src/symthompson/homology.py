"""Exact reduced simplicial homology over the integers.

Boundary matrices are kept sparse (one dict per column).  Integral ranks and
invariant factors come from unimodular elimination on +-1 pivots followed by
a dense Smith normal form of whatever is left; the rational rank is computed
separately by fraction elimination so the two can be compared.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import asdict, dataclass
from itertools import combinations

from .errors import InputError, ParseError


class InternalError(RuntimeError):
    """An internal consistency check failed; this indicates a bug."""


class SimplicialComplex:
    """A finite abstract simplicial complex on sortable vertex ids.

    The stored family always contains every face of every simplex.
    """

    def __init__(self, vertices, simplices=(), close: bool = True):
        self.vertices = sorted(set(vertices))
        faces = {frozenset([v]) for v in self.vertices}
        for s in simplices:
            s = frozenset(s)
            if not s:
                continue
            if close:
                items = sorted(s)
                for r in range(1, len(items) + 1):
                    faces.update(frozenset(c) for c in combinations(items, r))
            else:
                faces.add(s)
        known = set(self.vertices)
        for s in faces:
            if not s <= known:
                raise InputError(f"simplex {sorted(s)} uses an unlisted vertex")
        self.simplices = faces

    @classmethod
    def from_maximal(cls, maximal) -> "SimplicialComplex":
        maximal = [frozenset(s) for s in maximal]
        verts = set().union(*maximal) if maximal else set()
        return cls(verts, maximal)

    @property
    def dimension(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def by_dimension(self) -> list[list[tuple]]:
        out = [[] for _ in range(self.dimension + 1)]
        for s in self.simplices:
            out[len(s) - 1].append(tuple(sorted(s)))
        for layer in out:
            layer.sort()
        return out

    def counts(self) -> list[int]:
        return [len(layer) for layer in self.by_dimension()]

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * c for p, c in enumerate(self.counts()))

    def is_closed(self) -> bool:
        for s in self.simplices:
            if len(s) > 1 and any(s - {v} not in self.simplices for v in s):
                return False
        return True

    def maximal_simplices(self) -> list[tuple]:
        out = []
        for s in self.simplices:
            if not any(len(t) == len(s) + 1 and s < t for t in self._cofaces(s)):
                out.append(tuple(sorted(s)))
        return sorted(out)

    def _cofaces(self, s):
        verts = set(self.vertices) - s
        return (s | {v} for v in verts if (s | {v}) in self.simplices)

    def __contains__(self, simplex):
        return frozenset(simplex) in self.simplices

    def __len__(self):
        return len(self.simplices)


    def one_skeleton_components(self) -> int:
        """Connected components by union-find over the edges."""
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for s in self.simplices:
            if len(s) == 2:
                a, b = tuple(s)
                parent[find(a)] = find(b)
        return len({find(v) for v in self.vertices})


# ---------------------------------------------------------------------------
# boundary matrices

@dataclass
class ChainBoundary:
    """The boundary map from p-chains to (p-1)-chains.

    ``columns[j]`` maps row indices to the nonzero entries of column j.  For
    ``dimension == 0`` this is the augmentation C_0 -> Z (one row of ones).
    """

    dimension: int
    shape: tuple[int, int]
    columns: list[dict[int, int]]

    def to_dense(self) -> list[list[int]]:
        rows, cols = self.shape
        out = [[0] * cols for _ in range(rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def compose_is_zero(self, lower: "ChainBoundary") -> bool:
        """True iff ``lower`` applied after ``self`` is the zero map."""
        rows_of = [dict() for _ in range(lower.shape[0])]
        for j, col in enumerate(lower.columns):
            for i, v in col.items():
                rows_of[i][j] = v
        for col in self.columns:
            image = {}
            for mid, v in col.items():
                for i, w in lower.columns[mid].items():
                    image[i] = image.get(i, 0) + v * w
            if any(image.values()):
                return False
        return True


def boundary_matrices(K: SimplicialComplex) -> list[ChainBoundary]:
    """Augmentation followed by the boundary maps of positive dimension.

    Simplices of each dimension are ordered lexicographically by their sorted
    vertex tuples, and the face omitting the i-th vertex gets sign (-1)^i.
    """
    layers = K.by_dimension()
    out = []
    if layers:
        out.append(ChainBoundary(0, (1, len(layers[0])), [{0: 1} for _ in layers[0]]))
    for p in range(1, len(layers)):
        index = {s: i for i, s in enumerate(layers[p - 1])}
        cols = []
        for s in layers[p]:
            col = {}
            for i in range(len(s)):
                col[index[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
            cols.append(col)
        out.append(ChainBoundary(p, (len(layers[p - 1]), len(layers[p])), cols))
    return out


# ---------------------------------------------------------------------------
# Smith normal form

def smith_normal_form(matrix) -> tuple[list[int], int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix, and the rank.

    Dense elimination with Python integers; at every stage the entry of least
    absolute value is used as pivot.
    """
    A = [[int(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A):
        raise InputError("ragged matrix")
    diag = []
    t = 0
    while t < m and t < n:
        pivot = _least_entry(A, t, range(t, m), range(t, n))
        if pivot is None:
            break
        _move_pivot(A, t, *pivot)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    f = A[i][t] // p
                    if f:
                        Ai, At = A[i], A[t]
                        for j in range(t, n):
                            Ai[j] -= f * At[j]
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    f = A[t][j] // p
                    if f:
                        for row in A[t:]:
                            row[j] -= f * row[t]
                    dirty = dirty or A[t][j] != 0
            if dirty:
                cand = [(i, t) for i in range(t, m) if A[i][t]] + \
                       [(t, j) for j in range(t + 1, n) if A[t][j]]
                i, j = min(cand, key=lambda ij: abs(A[ij[0]][ij[1]]))
                _move_pivot(A, t, i, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            # fold the offending row into the pivot row and go again
            Ai, At = A[bad[0]], A[t]
            for j in range(t, n):
                At[j] += Ai[j]
        diag.append(abs(A[t][t]))
        t += 1
    return diag, len(diag)


def _least_entry(A, t, rows, cols):
    best = None
    for i in rows:
        row = A[i]
        for j in cols:
            v = row[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return best[1], best[2]
    return None if best is None else (best[1], best[2])


def _move_pivot(A, t, i, j):
    if i != t:
        A[t], A[i] = A[i], A[t]
    if j != t:
        for row in A:
            row[t], row[j] = row[j], row[t]


# ---------------------------------------------------------------------------
# sparse elimination

def integral_invariants(boundary: ChainBoundary) -> tuple[int, list[int]]:
    """Rank and invariant factors greater than one of a sparse integer matrix.

    Pivots of absolute value one are eliminated sparsely (each contributes an
    invariant factor 1); the remainder goes through :func:`smith_normal_form`.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for j, col in enumerate(boundary.columns):
        if col:
            cols[j] = set(col)
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    rank = 0
    # Markowitz-style order: the shortest live column first, re-queued
    # whenever elimination changes its length.
    heap = [(len(rs), j) for j, rs in cols.items()]
    heapq.heapify(heap)
    stuck: set[int] = set()
    while heap:
        length, c = heapq.heappop(heap)
        if c not in cols or len(cols[c]) != length:
            continue
        units = [r for r in cols[c] if abs(rows[r][c]) == 1]
        if not units:
            stuck.add(c)
            continue
        r = min(units, key=lambda i: (len(rows[i]), i))
        touched = _eliminate(rows, cols, r, c)
        rank += 1
        for j in touched:
            if j in cols:
                stuck.discard(j)
                heapq.heappush(heap, (len(cols[j]), j))
    if not cols:
        return rank, []
    rest_cols = sorted(cols)
    reduced = _row_echelon([rows[i] for i in sorted(rows)], rest_cols)
    dense = [[row.get(j, 0) for j in rest_cols] for row in reduced]
    diag, r = smith_normal_form(dense)
    return rank + r, [x for x in diag if x > 1]


def _row_echelon(rows: list[dict[int, int]], col_order) -> list[dict[int, int]]:
    """Unimodular row reduction (Euclid on each column); returns the nonzero rows."""
    live = [dict(r) for r in rows if r]
    done = []
    for j in col_order:
        hits = [r for r in live if r.get(j)]
        if not hits:
            continue
        while len(hits) > 1:
            hits.sort(key=lambda r: abs(r[j]))
            piv = hits[0]
            p = piv[j]
            nxt = [piv]
            for row in hits[1:]:
                f = row[j] // p
                for k, v in piv.items():
                    w = row.get(k, 0) - f * v
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
                if row.get(j):
                    nxt.append(row)
            hits = nxt
        pivot = hits[0]
        done.append(pivot)
        live = [r for r in live if r is not pivot and r]
    return done


def _eliminate(rows, cols, r, c):
    """Clear column c with the unit pivot at (r, c); return the columns touched."""
    pivot_row = rows.pop(r)
    p = pivot_row[c]  # +-1, so p is its own inverse
    for j in pivot_row:
        cols[j].discard(r)
    for i in list(cols[c]):
        row = rows[i]
        f = row[c] * p
        for j, v in pivot_row.items():
            w = row.get(j, 0) - f * v
            if w:
                if j not in row:
                    cols[j].add(i)
                row[j] = w
            elif j in row:
                del row[j]
                cols[j].discard(i)
        if not row:
            del rows[i]
    # column c is now zero outside the pivot row; drop it and the pivot row
    for j in pivot_row:
        if not cols[j]:
            del cols[j]
    cols.pop(c, None)
    return pivot_row.keys()


RANK_PRIME = (1 << 61) - 1


def rational_rank(boundary: ChainBoundary) -> int:
    """Rank over a large prime field, by left-looking column reduction.

    Equals the rank over Q unless the prime divides every maximal nonzero
    minor, which cannot happen for matrices of this size with small entries
    unless the torsion itself involves the prime.
    """
    p = RANK_PRIME
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for col in boundary.columns:
        vec = {i: v % p for i, v in col.items() if v % p}
        while vec:
            lead = max(vec)
            piv = pivots.get(lead)
            if piv is None:
                inv = pow(vec[lead], -1, p)
                pivots[lead] = {i: v * inv % p for i, v in vec.items()}
                rank += 1
                break
            f = vec[lead]
            for i, v in piv.items():
                w = (vec.get(i, 0) - f * v) % p
                if w:
                    vec[i] = w
                else:
                    vec.pop(i, None)
    return rank


# ---------------------------------------------------------------------------
# homology

@dataclass
class HomologyProfile:
    """Reduced homology: free rank and torsion coefficients per dimension."""

    betti: list[int]
    torsion: list[list[int]]
    simplex_counts: list[int]
    euler_characteristic: int
    components: int
    rational_ranks_agree: bool = True
    boundary_squares_zero: bool = True

    def connectivity(self) -> int:
        """Largest k >= -1 with reduced H_i = 0 for all i <= k.

        Homological only; simple connectivity is not certified.
        """
        k = -1
        for b, t in zip(self.betti, self.torsion):
            if b or t:
                break
            k += 1
        return k

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def reduced_homology(K: SimplicialComplex, check_rational: bool = True) -> HomologyProfile:
    """Reduced integral homology of K with built-in cross-checks.

    Raises :class:`InternalError` if the Euler characteristic, the union-find
    component count, boundary-squared-zero or (optionally) the rational ranks
    disagree with the integral computation.
    """
    if not K.vertices:
        raise InputError("the empty complex has no reduced homology here")
    mats = boundary_matrices(K)
    counts = [m.shape[1] for m in mats]
    results = [integral_invariants(m) for m in mats]
    ranks = [r for r, _ in results]
    top = len(counts)
    betti, torsion = [], []
    for p in range(top):
        upper = ranks[p + 1] if p + 1 < top else 0
        betti.append(counts[p] - ranks[p] - upper)
        torsion.append(results[p + 1][1] if p + 1 < top else [])
    squares = all(mats[p + 1].compose_is_zero(mats[p]) for p in range(top - 1))
    if not squares:
        raise InternalError("boundary of boundary is not zero")
    euler = sum((-1) ** p * c for p, c in enumerate(counts))
    if sum((-1) ** p * b for p, b in enumerate(betti)) != euler - 1:
        raise InternalError("Euler characteristic disagrees with the Betti numbers")
    components = K.one_skeleton_components()
    if betti[0] + 1 != components or torsion and torsion[0]:
        raise InternalError("reduced H_0 disagrees with the component count")
    agree = True
    if check_rational:
        agree = all(rational_rank(m) == r for m, r in zip(mats, ranks))
        if not agree:
            raise InternalError("rational and integral ranks differ")
    return HomologyProfile(betti, torsion, counts, euler, components, agree, squares)


# ---------------------------------------------------------------------------
# text format: one maximal simplex per line

def parse_complex(text: str) -> SimplicialComplex:
    maximal = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        verts = line.split()
        if len(set(verts)) != len(verts):
            raise ParseError("repeated vertex in simplex", lineno, 1)
        maximal.append(verts)
    if not maximal:
        raise ParseError("no simplices given", 1, 1)
    return SimplicialComplex.from_maximal(maximal)


def format_complex(K: SimplicialComplex) -> str:
    return "".join(" ".join(map(str, s)) + "\n" for s in K.maximal_simplices())

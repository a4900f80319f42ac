"""Points, hyperplanes, lines and codimension-2 flats of PG(N, q).

Points and hyperplanes share one table: the normalized vectors of
GF(q)^(N+1) (leftmost nonzero coordinate 1) in lexicographic order of their
coordinate indices.  A point P lies on the hyperplane H iff P . H = 0, so the
incidence matrix over this shared table is symmetric and the same bitmap row
serves as "points on H" and "hyperplanes through P".
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .field import FieldSpec, dot, rref

BITMAP_POINT_BOUND = 2**16
CODE_BOUND = 2**26


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def popcount_rows(packed: np.ndarray) -> np.ndarray:
    """Set bits per row of a packed uint8 bitmap."""
    return np.bitwise_count(packed).sum(axis=-1, dtype=np.int64)


@dataclass(frozen=True)
class CodimTwoFlat:
    """A codimension-2 flat, stored by its reduced-echelon dual basis."""

    dual_basis: tuple[tuple[int, ...], tuple[int, ...]]
    pencil: tuple[int, ...]


@dataclass(frozen=True)
class SubspaceTable:
    """All 2-dimensional vector subspaces of GF(q)^(N+1).

    Read dually, a row is a codimension-2 flat (``members`` = its pencil of
    hyperplanes); read directly, it is a line (``members`` = its points).
    """

    bases: np.ndarray    # (m, 2, N+1), reduced echelon
    members: np.ndarray  # (m, q+1) table indices, ascending per row

    def __len__(self) -> int:
        return len(self.members)


class ProjectiveSpace:
    def __init__(self, N: int, field: FieldSpec, *, bitmap_bound: int = BITMAP_POINT_BOUND,
                 workers: int = 1):
        if N < 1:
            raise ValueError("dimension must be at least 1")
        q = field.q
        if q ** (N + 1) > CODE_BOUND:
            raise MemoryError(f"PG({N},{q}) exceeds the table bound")
        self.N = N
        self.field = field
        self.q = q
        self.workers = max(1, int(workers))
        self.bitmap_bound = bitmap_bound

        codes = np.arange(q ** (N + 1), dtype=np.int64)
        weights = q ** np.arange(N, -1, -1, dtype=np.int64)
        vecs = (codes[:, None] // weights[None, :]) % q
        nonzero = vecs != 0
        first = np.argmax(nonzero, axis=1)
        lead = vecs[np.arange(len(vecs)), first]
        keep = lead == 1
        self.points = vecs[keep]
        self._weights = weights
        self._code_to_index = np.full(len(codes), -1, dtype=np.int64)
        self._code_to_index[codes[keep]] = np.arange(int(keep.sum()))
        self.n_points = len(self.points)
        if self.n_points != (q ** (N + 1) - 1) // (q - 1):
            raise AssertionError("point count disagrees with the Gaussian binomial")

    def __repr__(self) -> str:
        return f"ProjectiveSpace(N={self.N}, q={self.q})"

    @property
    def hyperplanes(self) -> np.ndarray:
        return self.points

    @property
    def n_hyperplanes(self) -> int:
        return self.n_points

    @property
    def points_per_hyperplane(self) -> int:
        return (self.q**self.N - 1) // (self.q - 1)

    # -- coordinates --------------------------------------------------------------

    def normalize(self, vecs) -> np.ndarray:
        F = self.field
        v = np.atleast_2d(np.asarray(vecs, dtype=np.int64)) % F.q
        nonzero = v != 0
        if not nonzero.any(axis=1).all():
            raise ValueError("the zero vector is not a projective point")
        first = np.argmax(nonzero, axis=1)
        lead = v[np.arange(len(v)), first]
        return np.asarray(F.mul(v, np.asarray(F.inv(lead))[:, None]), dtype=np.int64)

    def index_of(self, vecs) -> np.ndarray:
        """Table indices of (not necessarily normalized) vectors."""
        v = self.normalize(vecs)
        if v.shape[1] != self.N + 1:
            raise ValueError(f"expected vectors of length {self.N + 1}")
        return self._code_to_index[v @ self._weights]

    def point_index(self, vec) -> int:
        return int(self.index_of([vec])[0])

    def incident(self, point: int, hyperplane: int) -> bool:
        return int(dot(self.field, self.points[point], self.hyperplanes[hyperplane])) == 0

    def mask(self, indices) -> np.ndarray:
        m = np.zeros(self.n_points, dtype=bool)
        m[np.asarray(list(indices), dtype=np.int64)] = True
        return m

    # -- incidence ------------------------------------------------------------------

    def _incidence_rows(self, rows: np.ndarray) -> np.ndarray:
        """Boolean incidence of the given hyperplanes against every point."""
        return dot(self.field, self.hyperplanes[rows][:, None, :], self.points[None, :, :]) == 0

    def _chunks(self) -> list[np.ndarray]:
        step = max(1, 4_000_000 // max(1, self.n_points * (self.N + 1)))
        return [np.arange(s, min(s + step, self.n_points)) for s in range(0, self.n_points, step)]

    @property
    def has_bitmaps(self) -> bool:
        return self.n_points <= self.bitmap_bound

    @cached_property
    def incidence(self) -> np.ndarray:
        """Packed incidence bitmaps, one row per hyperplane (and, by symmetry, per point)."""
        if not self.has_bitmaps:
            raise MemoryError("incidence bitmaps are disabled for a space this large")
        chunks = self._chunks()

        def build(rows):
            return np.packbits(self._incidence_rows(rows), axis=1)

        if self.workers > 1:
            with ThreadPoolExecutor(self.workers) as pool:
                parts = list(pool.map(build, chunks))
        else:
            parts = [build(rows) for rows in chunks]
        return np.concatenate(parts, axis=0)

    def pack(self, mask: np.ndarray) -> np.ndarray:
        return np.packbits(np.asarray(mask, dtype=bool))

    def points_on(self, hyperplane: int) -> np.ndarray:
        if self.has_bitmaps:
            return np.unpackbits(self.incidence[hyperplane], count=self.n_points).astype(bool)
        return self._incidence_rows(np.array([hyperplane]))[0]

    def hyperplanes_through(self, point: int) -> np.ndarray:
        return self.points_on(point)

    def meet_counts(self, mask: np.ndarray) -> np.ndarray:
        """|S cap H| for every hyperplane H, with S given as a point mask.

        By symmetry of incidence this is also, for a hyperplane family mask,
        the number of family members through every point.
        """
        mask = np.asarray(mask, dtype=bool)
        if self.has_bitmaps:
            return popcount_rows(self.incidence & self.pack(mask)[None, :])
        out = np.empty(self.n_points, dtype=np.int64)
        for rows in self._chunks():
            out[rows] = (self._incidence_rows(rows) & mask[None, :]).sum(axis=1)
        return out

    def flat_meet_counts(self, mask: np.ndarray, flats: SubspaceTable, chunk: int = 20000) -> np.ndarray:
        """|S cap pi| for every codimension-2 flat pi of ``flats``."""
        mask = np.asarray(mask, dtype=bool)
        a, b = flats.members[:, 0], flats.members[:, 1]
        out = np.empty(len(flats), dtype=np.int64)
        if self.has_bitmaps:
            packed = self.pack(mask)
            inc = self.incidence
            for s in range(0, len(flats), chunk):
                sl = slice(s, s + chunk)
                out[sl] = popcount_rows(inc[a[sl]] & inc[b[sl]] & packed[None, :])
            return out
        for s in range(0, len(flats), chunk // 50 or 1):
            sl = slice(s, s + (chunk // 50 or 1))
            both = self._incidence_rows(a[sl]) & self._incidence_rows(b[sl])
            out[sl] = (both & mask[None, :]).sum(axis=1)
        return out

    # -- two-dimensional subspaces ----------------------------------------------------

    def _two_spaces(self) -> SubspaceTable:
        F, q, N = self.field, self.q, self.N
        n = N + 1
        bases, members = [], []
        for i in range(n):
            for j in range(i + 1, n):
                free1 = [k for k in range(i + 1, n) if k != j]
                free2 = list(range(j + 1, n))
                f = len(free1) + len(free2)
                codes = np.arange(q**f, dtype=np.int64)
                digits = (codes[:, None] // (q ** np.arange(f - 1, -1, -1, dtype=np.int64))[None, :]) % q
                B = np.zeros((len(codes), 2, n), dtype=np.int64)
                B[:, 0, i] = 1
                B[:, 1, j] = 1
                B[:, 0, free1] = digits[:, : len(free1)]
                B[:, 1, free2] = digits[:, len(free1):]
                r1, r2 = B[:, 0, :], B[:, 1, :]
                combos = [r1] + [np.asarray(F.add(r2, F.mul(c, r1))) for c in range(q)]
                idx = np.stack(
                    [self._code_to_index[self.normalize(v) @ self._weights] for v in combos], axis=1)
                bases.append(B)
                members.append(np.sort(idx, axis=1))
        return SubspaceTable(np.concatenate(bases), np.concatenate(members))

    @cached_property
    def codim2(self) -> SubspaceTable:
        """Every codimension-2 flat with its pencil of q+1 hyperplanes."""
        table = self._two_spaces()
        if len(table) != gaussian_binomial(self.N + 1, 2, self.q):
            raise AssertionError("flat count disagrees with the Gaussian binomial")
        return table

    @property
    def lines(self) -> SubspaceTable:
        """Every line with its q+1 points (same table as codim2, read primally)."""
        return self.codim2

    def enumerate_codim2(self) -> Iterator[CodimTwoFlat]:
        table = self.codim2
        for basis, pencil in zip(table.bases, table.members):
            yield CodimTwoFlat(
                (tuple(int(x) for x in basis[0]), tuple(int(x) for x in basis[1])),
                tuple(int(x) for x in pencil))

    def pencil(self, flat: CodimTwoFlat | np.ndarray) -> np.ndarray:
        """Indices of the q+1 hyperplanes containing the flat."""
        basis = np.asarray(flat.dual_basis if isinstance(flat, CodimTwoFlat) else flat, dtype=np.int64)
        return self._span_members(basis)

    def _span_members(self, basis: np.ndarray) -> np.ndarray:
        F = self.field
        R, piv = rref(F, basis)
        if len(piv) != 2:
            raise ValueError("basis must have rank 2")
        r1, r2 = R[0], R[1]
        vecs = [r1] + [np.asarray(F.add(r2, F.mul(c, r1))) for c in range(self.q)]
        return np.sort(self.index_of(np.stack(vecs)))

    def flat_points(self, flat: CodimTwoFlat | np.ndarray) -> np.ndarray:
        """Point indices of a codimension-2 flat."""
        pencil = self.pencil(flat)
        return np.nonzero(self.points_on(int(pencil[0])) & self.points_on(int(pencil[1])))[0]

    def line_through(self, p1: int, p2: int) -> np.ndarray:
        if p1 == p2:
            raise ValueError("a line needs two distinct points")
        return self._span_members(np.stack([self.points[p1], self.points[p2]]))

    def lines_through(self, point: int) -> np.ndarray:
        """(k, q+1) array of the lines through ``point``, in table order."""
        F, q = self.field, self.q
        P = self.points[point]
        others = np.delete(np.arange(self.n_points), point)
        cands = [others]
        for c in range(1, q):
            shifted = np.asarray(F.add(self.points[others], F.mul(c, P)[None, :]))
            cands.append(self.index_of(shifted))
        key = np.min(np.stack(cands, axis=1), axis=1)
        reps = np.unique(key)
        lines = []
        for r in reps:
            pts = np.sort(np.concatenate([[point], others[key == r]]))
            lines.append(pts)
        return np.array(lines, dtype=np.int64)


def flats_from_hyperplane_pairs(space: ProjectiveSpace) -> set[tuple[int, ...]]:
    """Independent enumeration of codimension-2 flats: canonicalize the span of
    every pair of distinct hyperplanes and de-duplicate.  Quadratic in the
    number of hyperplanes, so meant for small spaces and tests."""
    F = space.field
    seen: set[tuple[int, ...]] = set()
    H = space.hyperplanes
    for a in range(space.n_hyperplanes):
        for b in range(a + 1, space.n_hyperplanes):
            R, _ = rref(F, H[[a, b]])
            seen.add(tuple(int(x) for x in R.ravel()))
    return seen

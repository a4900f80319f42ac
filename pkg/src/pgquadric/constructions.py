"""Hyperovals and their disjoint-solid families, quasi-quadric verification,
and the nucleus-line switching search."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from .families import (
    HyperplaneFamily, check_condition_I, check_condition_II, colour_points,
)
from .field import FieldSpec
from .quadrics import (
    fit_quadric, nucleus, point_set, size_parabolic, size_pm, standard_parabolic,
)
from .space import ProjectiveSpace


@dataclass(frozen=True)
class Hyperoval:
    """q+2 points of the plane x3 = x4 = 0 of PG(4, q), no three collinear."""

    q: int
    kind: str
    plane_coords: tuple[tuple[int, int, int], ...]

    def __len__(self) -> int:
        return len(self.plane_coords)

    def embedded(self, space: ProjectiveSpace) -> np.ndarray:
        if space.N != 4 or space.q != self.q:
            raise ValueError("hyperovals embed in PG(4, q) with matching q")
        coords = np.zeros((len(self), 5), dtype=np.int64)
        coords[:, :3] = self.plane_coords
        return np.sort(space.index_of(coords))


def _check_hyperoval(field: FieldSpec, coords: Sequence[tuple[int, int, int]]) -> None:
    plane = ProjectiveSpace(2, field)
    idx = plane.index_of(np.array(coords))
    if len(set(idx.tolist())) != field.q + 2:
        raise ValueError("hyperoval must have q+2 distinct points")
    if plane.meet_counts(plane.mask(idx)).max() > 2:
        raise ValueError("three points of the set are collinear")


def _hyperoval(field: FieldSpec, exponent: int, kind: str) -> Hyperoval:
    if not field.is_even:
        raise ValueError("hyperovals exist only for even q")
    coords = [(1, t, int(field.pow(t, exponent))) for t in field.elements()]
    coords += [(0, 1, 0), (0, 0, 1)]
    _check_hyperoval(field, coords)
    return Hyperoval(field.q, kind, tuple(coords))


def hyperoval_regular(field: FieldSpec) -> Hyperoval:
    """Conic {(1, t, t^2)} plus its nucleus (0,1,0) and the point (0,0,1)."""
    return _hyperoval(field, 2, "regular")


def hyperoval_translation(field: FieldSpec, k: int) -> Hyperoval:
    """{(1, t, t^(2^k))} plus (0,1,0) and (0,0,1); needs gcd(k, h) = 1."""
    if not field.is_even:
        raise ValueError("hyperovals exist only for even q")
    if k < 1 or gcd(k, field.h) != 1:
        raise ValueError(f"translation exponent 2^{k} needs gcd({k}, {field.h}) = 1")
    return _hyperoval(field, 2**k, f"translation(k={k})")


def solids_disjoint_from(oval: Hyperoval, space: ProjectiveSpace) -> HyperplaneFamily:
    red = space.mask(oval.embedded(space))
    return HyperplaneFamily(space, space.meet_counts(red) == 0, "H-(hyperoval)")


# -- quasi-quadrics ---------------------------------------------------------------

@dataclass
class QuasiQuadricCandidate:
    K: np.ndarray
    nucleus: int
    size_ok: bool
    nucleus_lines_ok: bool
    spectrum_ok: bool
    hyperplane_spectrum: dict[int, int]
    condition_I: dict[int, bool | None] = field(default_factory=dict)  # None: empty family

    @property
    def passed(self) -> bool:
        return self.size_ok and self.nucleus_lines_ok and self.spectrum_ok


def nucleus_lines(space: ProjectiveSpace, N: int) -> np.ndarray:
    return space.lines_through(N)


def verify_quasi_quadric(space: ProjectiveSpace, K: np.ndarray, N: int, n: int) -> QuasiQuadricCandidate:
    q = space.q
    K = np.asarray(K, dtype=bool)
    lines = nucleus_lines(space, N)
    meets = space.meet_counts(K)
    off_nucleus = ~space.hyperplanes_through(N)
    spectrum = dict(sorted(Counter(meets[off_nucleus].tolist()).items()))
    legal = {size_pm(n, q, -1), size_pm(n, q, 1)}
    cand = QuasiQuadricCandidate(
        K=K, nucleus=N,
        size_ok=int(K.sum()) == size_parabolic(n, q),
        nucleus_lines_ok=bool((K[lines].sum(axis=1) == 1).all()),
        spectrum_ok=set(spectrum) <= legal,
        hyperplane_spectrum=spectrum,
    )
    if q % 2 == 0:
        for sign in (1, -1):
            fam = HyperplaneFamily(space, meets == size_pm(n, q, sign))
            cand.condition_I[sign] = (bool(check_condition_I(colour_points(fam, n, sign)).passed)
                                      if len(fam) else None)
    return cand


def nucleus_line_switch(space: ProjectiveSpace, K: np.ndarray, N: int,
                        selection: Iterable[int | Sequence[int]], offset: int = 1) -> np.ndarray:
    """Move the K-point on each selected nucleus line to another non-nucleus point.

    A selected line is either a position in ``nucleus_lines(space, N)`` or the
    point indices of a line.  The new point is ``offset`` places further along
    the line's non-nucleus points in table order.
    """
    q = space.q
    if not 1 <= offset < q:
        raise ValueError(f"offset must lie in 1..{q - 1}")
    K = np.asarray(K, dtype=bool)
    lines = nucleus_lines(space, N)
    if not (K[lines].sum(axis=1) == 1).all():
        raise ValueError("K does not meet every nucleus line exactly once")
    by_points = {tuple(line.tolist()): i for i, line in enumerate(lines)}
    out = K.copy()
    for sel in selection:
        if isinstance(sel, (int, np.integer)):
            if not 0 <= sel < len(lines):
                raise ValueError(f"no nucleus line at position {sel}")
            line = lines[int(sel)]
        else:
            key = tuple(sorted(int(x) for x in sel))
            if key not in by_points:
                raise ValueError(f"{key} is not a line through the nucleus {N}")
            line = lines[by_points[key]]
        rest = line[line != N]
        pos = int(np.nonzero(K[rest])[0][0])
        out[rest[pos]] = False
        out[rest[(pos + offset) % q]] = True
    return out


# -- exhaustive search in PG(4, 2) ------------------------------------------------

@dataclass
class SwitchSearchReport:
    candidates: int
    nucleus: int
    lines: list[list[int]]
    standard_mask: int
    standard_passes: bool
    passing: list[int]
    quadric: dict[int, bool]
    non_quadric_conditions: dict[int, dict] = field(default_factory=dict)

    @property
    def n_passing(self) -> int:
        return len(self.passing)

    @property
    def n_quadrics(self) -> int:
        return sum(self.quadric.values())

    def summary(self) -> dict:
        return {
            "candidates": self.candidates,
            "nucleus": self.nucleus,
            "standard_mask": self.standard_mask,
            "standard_passes": self.standard_passes,
            "passing": self.n_passing,
            "passing_quadrics": self.n_quadrics,
            "passing_non_quadrics": self.n_passing - self.n_quadrics,
            "non_quadric_conditions": {str(k): v for k, v in self.non_quadric_conditions.items()},
        }

    def verdict_lines(self) -> Iterator[dict]:
        passing = set(self.passing)
        for mask in range(self.candidates):
            ok = mask in passing
            yield {"mask": mask, "spectrum_ok": ok, "quadric": self.quadric.get(mask) if ok else None}

    def write_jsonl(self, fh: IO[str]) -> None:
        for row in self.verdict_lines():
            fh.write(json.dumps(row, sort_keys=True) + "\n")


def switch_candidate(space: ProjectiveSpace, lines: np.ndarray, N: int, mask: int) -> np.ndarray:
    """Point set choosing, on nucleus line i, its second non-nucleus point iff bit i is set."""
    K = np.zeros(space.n_points, dtype=bool)
    for i, line in enumerate(lines):
        rest = line[line != N]
        K[rest[(mask >> i) & 1]] = True
    return K


def exhaustive_switch_search(space: ProjectiveSpace) -> SwitchSearchReport:
    """Every one-point-per-nucleus-line set of PG(4,2), screened by the
    quasi-quadric hyperplane spectrum and then tested for being a quadric."""
    if (space.N, space.q) != (4, 2):
        raise ValueError("the exhaustive switch search runs in PG(4,2) only")
    n = 2
    form = standard_parabolic(n, space.field)
    N = nucleus(form, space)
    lines = nucleus_lines(space, N)
    rest = np.array([line[line != N] for line in lines])  # (15, 2), ascending
    off = np.nonzero(~space.hyperplanes_through(N))[0]
    # bit i of code[H] is set iff the second point of line i lies on H
    on = np.stack([space.points_on(int(h)) for h in off])
    weights = 1 << np.arange(len(lines), dtype=np.int64)
    codes = (on[:, rest[:, 1]] * weights).sum(axis=1)
    n_lines = len(lines)
    masks = np.arange(1 << n_lines, dtype=np.int64)
    meets = n_lines - np.bitwise_count(masks[:, None] ^ codes[None, :])
    legal = np.isin(meets, [size_pm(n, 2, -1), size_pm(n, 2, 1)]).all(axis=1)
    passing = [int(m) for m in np.nonzero(legal)[0]]

    Q = point_set(form, space)
    standard = int(sum(1 << i for i in range(n_lines) if Q[rest[i, 1]]))
    quadric: dict[int, bool] = {}
    extra: dict[int, dict] = {}
    for m in passing:
        K = switch_candidate(space, lines, N, m)
        quadric[m] = fit_quadric(space, K) is not None
        if not quadric[m]:
            kmeets = space.meet_counts(K)
            info = {}
            for sign in (1, -1):
                fam = HyperplaneFamily(space, kmeets == size_pm(n, 2, sign))
                info["+" if sign == 1 else "-"] = {
                    "I": bool(check_condition_I(colour_points(fam, n, sign)).passed),
                    "II": bool(check_condition_II(fam)[0].passed),
                }
            extra[m] = info
    return SwitchSearchReport(
        candidates=1 << n_lines, nucleus=N, lines=[l.tolist() for l in lines],
        standard_mask=standard, standard_passes=bool(legal[standard]),
        passing=passing, quadric=quadric, non_quadric_conditions=extra,
    )


def sampled_switch_search(space: ProjectiveSpace, n: int, samples: int, seed: int = 0) -> dict:
    """Random one-point-per-nucleus-line sets around the standard quadric (any even q)."""
    form = standard_parabolic(n, space.field)
    N = nucleus(form, space)
    lines = nucleus_lines(space, N)
    rng = np.random.default_rng(seed)
    tally = Counter()
    for _ in range(samples):
        K = np.zeros(space.n_points, dtype=bool)
        for line in lines:
            rest = line[line != N]
            K[rest[rng.integers(len(rest))]] = True
        cand = verify_quasi_quadric(space, K, N, n)
        if cand.passed:
            tally["quadric" if fit_quadric(space, K) is not None else "non_quadric"] += 1
        else:
            tally["fail"] += 1
    return {"samples": samples, "seed": seed, **dict(sorted(tally.items()))}

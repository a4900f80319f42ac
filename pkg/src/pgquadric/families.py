"""Hyperplane families: point colouring, the two intersection conditions,
codimension-2 spectra, double-counting identities and the conclusion check.

Every quantity is an exact integer; nothing here uses floating point.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .field import rank
from .quadrics import (
    classify_hyperplanes, fit_quadric, form_type, perp_lines,
    size_cone_over, size_parabolic, size_pm,
)
from .space import ProjectiveSpace

DEFAULT_VIOLATION_CAP = 100

RED, WHITE, BLACK, OTHER = "red", "white", "black", "other"


@dataclass
class HyperplaneFamily:
    space: ProjectiveSpace
    mask: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.mask.shape != (self.space.n_hyperplanes,):
            raise ValueError("family mask must cover every hyperplane")

    def __len__(self) -> int:
        return int(self.mask.sum())

    @property
    def members(self) -> np.ndarray:
        return np.nonzero(self.mask)[0]

    def without(self, hyperplane: int, label: str | None = None) -> "HyperplaneFamily":
        m = self.mask.copy()
        m[hyperplane] = False
        return HyperplaneFamily(self.space, m, label or f"{self.label}-{{{hyperplane}}}")


@dataclass
class Verdict:
    name: str
    passed: bool | None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.passed)


@dataclass
class SpectrumReport:
    context: str
    values: dict[int, int]
    tallies: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.values.values())

    def support(self) -> set[int]:
        return set(self.values)


def _spectrum(context: str, arr) -> SpectrumReport:
    return SpectrumReport(context, dict(sorted(Counter(int(x) for x in np.asarray(arr)).items())))


def colour_values(n: int, q: int, sign: int) -> dict[str, int]:
    if q % 2:
        raise ValueError("point colours are defined for even q only")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return {RED: 0, WHITE: q ** (2 * n - 1) // 2, BLACK: q**n * (q ** (n - 1) + sign) // 2}


@dataclass
class ColouringReport:
    family: HyperplaneFamily
    n: int
    sign: int
    counts: np.ndarray
    colours: np.ndarray        # object array of colour names
    values: dict[str, int]
    r: int
    w: int
    b: int
    n_violations: int
    violations: list[int]      # capped
    histogram: dict[int, int]
    h: int | None

    @property
    def q(self) -> int:
        return self.family.space.q

    def mask(self, colour: str) -> np.ndarray:
        return self.colours == colour


def colour_points(F: HyperplaneFamily, n: int, sign: int,
                  cap: int = DEFAULT_VIOLATION_CAP) -> ColouringReport:
    space = F.space
    q = space.q
    if space.N != 2 * n:
        raise ValueError(f"family lives in PG({space.N},{q}), not PG({2 * n},{q})")
    vals = colour_values(n, q, sign)
    counts = space.meet_counts(F.mask)
    colours = np.full(space.n_points, OTHER, dtype=object)
    for name, v in vals.items():
        colours[counts == v] = name
    bad = np.nonzero(colours == OTHER)[0]
    half = q**n // 2
    size = len(F)
    return ColouringReport(
        family=F, n=n, sign=sign, counts=counts, colours=colours, values=vals,
        r=int((colours == RED).sum()), w=int((colours == WHITE).sum()),
        b=int((colours == BLACK).sum()),
        n_violations=int(bad.size), violations=[int(x) for x in bad[:cap]],
        histogram=dict(sorted(Counter(int(c) for c in counts).items(), reverse=True)),
        h=size // half if size % half == 0 else None,
    )


def check_condition_I(report: ColouringReport) -> Verdict:
    return Verdict("condition_I", report.n_violations == 0, {
        "allowed": sorted(set(report.values.values())),
        "histogram": report.histogram,
        "n_violations": report.n_violations,
        "violating_points": report.violations,
    })


def pencil_counts(F: HyperplaneFamily) -> np.ndarray:
    """Number of family members through each codimension-2 flat."""
    return F.mask[F.space.codim2.members].sum(axis=1)


def check_condition_II(F: HyperplaneFamily, cap: int = DEFAULT_VIOLATION_CAP) -> tuple[Verdict, SpectrumReport]:
    """Flats lying in some member must lie in at least q/2 members (q even).

    For odd q only the spectrum is reported; the verdict is None.
    """
    q = F.space.q
    counts = pencil_counts(F)
    spectrum = _spectrum("per-flat", counts)
    if q % 2:
        return Verdict("condition_II", None, {"spectrum": spectrum.values}), spectrum
    bad = np.nonzero((counts >= 1) & (counts * 2 < q))[0]
    return Verdict("condition_II", bad.size == 0, {
        "threshold": q // 2,
        "spectrum": spectrum.values,
        "n_violations": int(bad.size),
        "violating_flats": [int(x) for x in bad[:cap]],
    }), spectrum


def sampled_condition_II(F: HyperplaneFamily, samples: int, seed: int = 0) -> tuple[Verdict, SpectrumReport]:
    """Condition (II) on uniformly sampled flats (sampling with replacement)."""
    q = F.space.q
    table = F.space.codim2
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(table), size=samples)
    counts = F.mask[table.members[idx]].sum(axis=1)
    spectrum = _spectrum("per-flat (sampled)", counts)
    bad = int(((counts >= 1) & (counts * 2 < q)).sum())
    return Verdict("condition_II_sampled", bad == 0 if q % 2 == 0 else None,
                   {"samples": samples, "seed": seed, "n_violations": bad,
                    "spectrum": spectrum.values}), spectrum


def family_from_classification(space: ProjectiveSpace, Q: np.ndarray, n: int,
                               sign: int) -> tuple[HyperplaneFamily, HyperplaneFamily, HyperplaneFamily]:
    """(H, T, M): the sign-classified hyperplanes, the singular ones, the rest."""
    kinds = classify_hyperplanes(space, Q, n)
    s = "+" if sign == 1 else "-"
    return (HyperplaneFamily(space, kinds == sign, f"H{s}"),
            HyperplaneFamily(space, kinds == 0, "T"),
            HyperplaneFamily(space, kinds == -sign, f"M{s}"))


def codim2_black_spectrum(space: ProjectiveSpace, B: np.ndarray) -> SpectrumReport:
    return _spectrum("black-per-flat", space.flat_meet_counts(B, space.codim2))


def black_flat_values(n: int, q: int) -> set[int]:
    """|Q(2n-2,q)|, |pQ+(2n-3,q)|, |pQ-(2n-3,q)|."""
    return {size_parabolic(n - 1, q),
            size_cone_over(size_pm(n - 1, q, 1), q),
            size_cone_over(size_pm(n - 1, q, -1), q)}


def section_tallies(report: ColouringReport, *families: HyperplaneFamily) -> dict[str, dict[str, dict[int, int]]]:
    """White/black counts inside each member of each family."""
    space = report.family.space
    white = space.meet_counts(report.mask(WHITE))
    black = space.meet_counts(report.mask(BLACK))
    out = {}
    for fam in families:
        out[fam.label] = {
            "white": _spectrum("white-per-member", white[fam.mask]).values,
            "black": _spectrum("black-per-member", black[fam.mask]).values,
        }
    return out


# -- odd characteristic -------------------------------------------------------------

@dataclass
class OddSpectrum:
    spectrum: SpectrumReport
    crosstab: dict[int, dict[int, int]]   # |perp line cap Q| -> pencil count -> flats
    verdict: Verdict


def odd_q_spectrum(space: ProjectiveSpace, Q: np.ndarray, n: int, sign: int) -> OddSpectrum:
    q = space.q
    if q % 2 == 0:
        raise ValueError("odd_q_spectrum needs odd q")
    form = fit_quadric(space, Q)
    if form is None:
        raise ValueError("point set is not a quadric")
    H, _, _ = family_from_classification(space, Q, n, sign)
    counts = pencil_counts(H)
    perp_meet = Q[perp_lines(form, space, space.codim2)].sum(axis=1)
    crosstab: dict[int, dict[int, int]] = {}
    for k in sorted(set(perp_meet.tolist())):
        crosstab[k] = dict(sorted(Counter(counts[perp_meet == k].tolist()).items()))
    allowed = {0, (q - 1) // 2, (q + 1) // 2, q}
    spectrum = _spectrum("per-flat", counts)
    expected = {0: {(q + 1) // 2}, 2: {(q - 1) // 2}, q + 1: {0}}
    cross_ok = all(set(crosstab.get(k, {})) <= v for k, v in expected.items())
    verdict = Verdict("odd_spectrum", spectrum.support() <= allowed and cross_ok, {
        "allowed": sorted(allowed), "spectrum": spectrum.values, "crosstab": crosstab,
        "crosstab_consistent": cross_ok,
    })
    return OddSpectrum(spectrum, crosstab, verdict)


# -- identities --------------------------------------------------------------------------

def verify_counting_identities(report: ColouringReport) -> Verdict:
    """Double-counting identities for a family satisfying condition (I)."""
    if report.n_violations:
        raise ValueError("identities presuppose condition (I)")
    F = report.family
    space = F.space
    n, q, sign = report.n, report.q, report.sign
    W, K = report.values[WHITE], report.values[BLACK]
    w, b = report.w, report.b
    size = len(F)
    theta = (q ** (2 * n) - 1) // (q - 1)
    theta2 = (q ** (2 * n - 1) - 1) // (q - 1)
    white_in = space.meet_counts(report.mask(WHITE))[F.mask]
    black_in = space.meet_counts(report.mask(BLACK))[F.mask]
    eqs: dict[str, dict] = {}

    def record(name, lhs, rhs):
        eqs[name] = {"lhs": int(lhs), "rhs": int(rhs), "holds": int(lhs) == int(rhs)}

    record("OP", w * W + b * K, size * theta)
    record("pairs", w * W * (W - 1) + b * K * (K - 1), size * (size - 1) * theta2)
    constant = len(set(white_in.tolist())) <= 1 and len(set(black_in.tolist())) <= 1
    s = int(white_in[0]) if size else 0
    t = int(black_in[0]) if size else 0
    eqs["members_uniform"] = {"s": sorted(set(white_in.tolist())), "t": sorted(set(black_in.tolist())),
                              "holds": constant}
    record("eqb", b * K, size * t)
    record("eqw", w * W, size * s)
    record("s_plus_t", s + t, theta)
    half = q**n // 2
    divisible = size % half == 0
    details = {"equations": eqs, "family_size": size, "s": s, "t": t, "h_divisible": divisible}
    if divisible:
        h = size // half
        mod = q ** (n - 1)
        residue = h % mod
        details.update(h=h, h_mod=residue, h_congruence=residue in {0, sign % mod})
        record("h_from_t", h * (q ** (2 * n - 1) - 1),
               q ** (3 * n - 1) - 2 * q**n + q ** (n - 1) + sign * t * (q - 1))
        record("w_from_h", w * q ** (n - 1) * (q - 1),
               h * (q ** (2 * n) - 1 + sign * (h - h * q ** (2 * n - 1) - 2 * q**n
                                              + q ** (3 * n - 1) + q ** (n - 1))))
    passed = divisible and details.get("h_congruence", False) and all(e["holds"] for e in eqs.values())
    details["failed"] = [k for k, e in eqs.items() if not e["holds"]]
    return Verdict("counting_identities", passed, details)


# -- hyperoval line census -----------------------------------------------------------------

def red_line_census(report: ColouringReport) -> Verdict:
    """For every line through a red point: u whites and v blacks satisfy
    u*W + v*K = |family|; tangents carry q blacks, secants q-1 whites."""
    space = report.family.space
    q = space.q
    red_mask = report.mask(RED)
    red = np.nonzero(red_mask)[0]
    white, black = report.mask(WHITE), report.mask(BLACK)
    W, K = report.values[WHITE], report.values[BLACK]
    size = len(report.family)
    seen: set[tuple[int, ...]] = set()
    census: Counter = Counter()
    bad_eq = bad_tangent = bad_secant = 0
    for r in red:
        for line in space.lines_through(int(r)):
            key = tuple(line.tolist())
            if key in seen:
                continue
            seen.add(key)
            nred = int(red_mask[line].sum())
            u, v = int(white[line].sum()), int(black[line].sum())
            census[(nred, u, v)] += 1
            bad_eq += u * W + v * K != size
            if nred == 1:
                bad_tangent += (v, u) != (q, 0)
            elif nred == 2:
                bad_secant += (u, v) != (q - 1, 0)
            else:
                bad_secant += 1
    passed = bad_eq == 0 and bad_tangent == 0 and bad_secant == 0
    return Verdict("red_line_census", passed, {
        "lines": len(seen),
        "census": {f"red={k[0]},white={k[1]},black={k[2]}": c for k, c in sorted(census.items())},
        "equation_failures": bad_eq, "tangent_failures": bad_tangent,
        "secant_failures": bad_secant,
    })


# -- conclusion -----------------------------------------------------------------------------

class CounterexampleAlert(Exception):
    """A family satisfying both conditions whose black/red points fit neither
    the quadric nor the hyperoval description."""

    def __init__(self, details: dict):
        self.details = details
        super().__init__(f"family fits neither conclusion branch: {details}")


def _is_hyperoval(space: ProjectiveSpace, red: np.ndarray) -> dict:
    F = space.field
    q = space.q
    pts = space.points[red]
    info = {"size": int(red.size), "expected_size": q + 2}
    info["plane_rank"] = rank(F, pts) if red.size else 0
    info["no_three_collinear"] = all(rank(F, pts[list(t)]) == 3 for t in combinations(range(len(pts)), 3))
    info["ok"] = (red.size == q + 2 and info["plane_rank"] == 3 and info["no_three_collinear"])
    return info


def theorem_conclusion_check(F: HyperplaneFamily, n: int, sign: int) -> Verdict:
    """Which branch of the characterisation the family lands in.

    Quadric branch: the black points are exactly the zero set of a
    non-singular parabolic form, and the family is exactly the sign-classified
    hyperplanes of it.  Hyperoval branch (n=2, sign=-1): the red points form
    a hyperoval in a plane and the family is exactly the solids missing it.
    """
    space = F.space
    report = colour_points(F, n, sign)
    cI = check_condition_I(report)
    cII, _ = check_condition_II(F)
    if not len(F) or not cI.passed or not cII.passed:
        raise ValueError("conclusion check presupposes a non-empty family satisfying (I) and (II)")
    black = report.mask(BLACK)
    red = report.mask(RED)
    details: dict = {"r": report.r, "w": report.w, "b": report.b, "family_size": len(F)}

    form = fit_quadric(space, black)
    if form is not None:
        details["fitted_form"] = form.coeffs[np.triu_indices(space.N + 1)].tolist()
        details["fitted_type"] = form_type(form)
        if details["fitted_type"] == "parabolic" and int(black.sum()) == size_parabolic(n, space.q):
            kinds = classify_hyperplanes(space, black, n)
            details["family_matches"] = bool(np.array_equal(kinds == sign, F.mask))
            if details["family_matches"]:
                return Verdict("conclusion", True, {"branch": "quadric", **details})

    if n == 2 and sign == -1:
        red_idx = np.nonzero(red)[0]
        oval = _is_hyperoval(space, red_idx)
        details["hyperoval"] = oval
        if oval["ok"]:
            disjoint = space.meet_counts(red) == 0
            details["family_matches_disjoint_solids"] = bool(np.array_equal(disjoint, F.mask))
            if details["family_matches_disjoint_solids"]:
                return Verdict("conclusion", True, {"branch": "hyperoval", **details})
    raise CounterexampleAlert(details)

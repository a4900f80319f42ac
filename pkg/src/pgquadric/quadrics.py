"""Quadratic forms over GF(q): normal forms, zero sets, nucleus, polarity,
hyperplane-section classification and quadric fitting."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .field import FieldSpec, dot, kernel_basis, matmul, rank, rref
from .space import ProjectiveSpace, SubspaceTable


class UnclassifiableSection(ValueError):
    """A hyperplane meets the point set in a number of points that no
    hyperplane section of a non-singular parabolic quadric has."""

    def __init__(self, hyperplane: int, count: int, expected: dict[str, int]):
        self.hyperplane = hyperplane
        self.count = count
        self.expected = expected
        super().__init__(f"hyperplane {hyperplane} meets the set in {count} points; "
                         f"expected one of {expected}")


# -- closed-form sizes -----------------------------------------------------------

def size_parabolic(n: int, q: int) -> int:
    """|Q(2n, q)|."""
    return (q ** (2 * n) - 1) // (q - 1)


def size_pm(n: int, q: int, eps: int) -> int:
    """|Q+(2n-1, q)| for eps=+1, |Q-(2n-1, q)| for eps=-1."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    return (q**n - eps) * (q ** (n - 1) + eps) // (q - 1)


def size_cone_over(base: int, q: int) -> int:
    """Points of a point-cone whose base has ``base`` points."""
    return 1 + q * base


def size_tangent_section(n: int, q: int) -> int:
    """|P Q(2n-2, q)|, a hyperplane section through the nucleus/vertex."""
    return (q ** (2 * n - 1) - 1) // (q - 1)


class SectionClass(enum.IntEnum):
    ELLIPTIC = -1
    SINGULAR_CONE = 0
    HYPERBOLIC = 1


@dataclass(frozen=True)
class Section:
    kind: SectionClass
    count: int


# -- forms ---------------------------------------------------------------------------

class QuadraticForm:
    """f(x) = sum_{i<=j} a_ij x_i x_j with an upper-triangular coefficient matrix."""

    def __init__(self, field: FieldSpec, coeffs):
        A = np.triu(np.asarray(coeffs, dtype=np.int64) % field.q)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("coefficient matrix must be square")
        if not A.any():
            raise ValueError("the zero form defines no quadric")
        self.field = field
        self.coeffs = A
        self.coeffs.setflags(write=False)

    @property
    def n_vars(self) -> int:
        return self.coeffs.shape[0]

    def __repr__(self) -> str:
        terms = []
        for i, j in zip(*np.nonzero(self.coeffs)):
            c = int(self.coeffs[i, j])
            mono = f"x{i}^2" if i == j else f"x{i}x{j}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
        return f"QuadraticForm({' + '.join(terms)} over GF({self.field.q}))"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, QuadraticForm) and self.field == other.field
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs.tobytes()))

    def evaluate(self, x) -> np.ndarray:
        F = self.field
        x = np.asarray(x, dtype=np.int64)
        out = np.zeros(x.shape[:-1], dtype=np.int64)
        for i, j in zip(*np.nonzero(self.coeffs)):
            term = F.mul(int(self.coeffs[i, j]), F.mul(x[..., i], x[..., j]))
            out = np.asarray(F.add(out, term))
        return out

    @property
    def bilinear(self) -> np.ndarray:
        """B = A + A^T, so that f(x+y) - f(x) - f(y) = x^T B y."""
        F = self.field
        return np.asarray(F.add(self.coeffs, self.coeffs.T), dtype=np.int64)

    def polar(self, x, y) -> np.ndarray:
        return dot(self.field, matmul(self.field, np.atleast_2d(x), self.bilinear), y)

    def normalized(self) -> "QuadraticForm":
        """The scalar multiple whose first nonzero coefficient (row-major) is 1."""
        F = self.field
        flat = self.coeffs.ravel()
        lead = int(flat[np.nonzero(flat)[0][0]])
        return QuadraticForm(F, F.mul(self.coeffs, F.inv(lead)))

    def same_up_to_scalar(self, other: "QuadraticForm") -> bool:
        return self.normalized() == other.normalized()

    def restrict(self, basis) -> "QuadraticForm":
        """The form y -> f(sum_k y_k b_k) in the coordinates of ``basis`` (rows)."""
        F = self.field
        basis = np.asarray(basis, dtype=np.int64)
        k = len(basis)
        gram = matmul(F, matmul(F, basis, self.bilinear), basis.T)
        A = np.triu(gram, 1)
        diag = self.evaluate(basis)
        A[np.arange(k), np.arange(k)] = diag
        return QuadraticForm(F, A)


def _block_form(field: FieldSpec, n_vars: int) -> np.ndarray:
    return np.zeros((n_vars, n_vars), dtype=np.int64)


def standard_parabolic(n: int, field: FieldSpec) -> QuadraticForm:
    """x0^2 + x1 x2 + ... + x_{2n-1} x_{2n} on 2n+1 coordinates."""
    if n < 1:
        raise ValueError("n must be at least 1")
    A = _block_form(field, 2 * n + 1)
    A[0, 0] = 1
    for k in range(n):
        A[2 * k + 1, 2 * k + 2] = 1
    return QuadraticForm(field, A)


def standard_hyperbolic(n: int, field: FieldSpec) -> QuadraticForm:
    """x0 x1 + x2 x3 + ... + x_{2n-2} x_{2n-1}."""
    if n < 1:
        raise ValueError("n must be at least 1")
    A = _block_form(field, 2 * n)
    for k in range(n):
        A[2 * k, 2 * k + 1] = 1
    return QuadraticForm(field, A)


def elliptic_constant(field: FieldSpec) -> int:
    """First element (by index) making the leading binary block anisotropic:
    trace 1 in characteristic 2, a non-square otherwise."""
    for c in range(1, field.q):
        if field.is_even:
            if field.trace(c) == 1:
                return c
        elif not field.is_square(c):
            return c
    raise ValueError("no anisotropic constant exists")  # pragma: no cover


def standard_elliptic(n: int, field: FieldSpec) -> QuadraticForm:
    """x0^2 + x0 x1 + c x1^2 (char 2) or x0^2 - d x1^2 (odd), then hyperbolic pairs."""
    if n < 1:
        raise ValueError("n must be at least 1")
    F = field
    c = elliptic_constant(F)
    A = _block_form(F, 2 * n)
    A[0, 0] = 1
    if F.is_even:
        A[0, 1] = 1
        A[1, 1] = c
    else:
        A[1, 1] = F.neg(c)
    for k in range(1, n):
        A[2 * k, 2 * k + 1] = 1
    return QuadraticForm(F, A)


def point_set(form: QuadraticForm, space: ProjectiveSpace) -> np.ndarray:
    """Boolean mask over the space's points where the form vanishes."""
    if form.n_vars != space.N + 1 or form.field != space.field:
        raise ValueError("form and space do not match")
    return form.evaluate(space.points) == 0


def radical(form: QuadraticForm) -> np.ndarray:
    return kernel_basis(form.field, form.bilinear)


def nucleus(form: QuadraticForm, space: ProjectiveSpace) -> int:
    """Index of the nucleus: the point spanning the radical of the polar form."""
    if not form.field.is_even:
        raise ValueError("a quadric has a nucleus only in even characteristic")
    rad = radical(form)
    if len(rad) != 1:
        raise ValueError(f"radical has dimension {len(rad)}, not 1")
    return space.point_index(rad[0])


# -- classification --------------------------------------------------------------------

def section_sizes(n: int, q: int) -> dict[SectionClass, int]:
    return {
        SectionClass.ELLIPTIC: size_pm(n, q, -1),
        SectionClass.HYPERBOLIC: size_pm(n, q, 1),
        SectionClass.SINGULAR_CONE: size_tangent_section(n, q),
    }


def classify_counts(counts: np.ndarray, n: int, q: int) -> np.ndarray:
    """Map per-hyperplane intersection sizes to SectionClass values."""
    counts = np.asarray(counts)
    kinds = np.full(counts.shape, 99, dtype=np.int64)
    sizes = section_sizes(n, q)
    for kind, size in sizes.items():
        kinds[counts == size] = int(kind)
    bad = np.nonzero(kinds == 99)[0]
    if bad.size:
        h = int(bad[0])
        raise UnclassifiableSection(h, int(counts[h]), {k.name: v for k, v in sizes.items()})
    return kinds


def classify_section(space: ProjectiveSpace, Q: np.ndarray, hyperplane: int, n: int) -> Section:
    count = int((Q & space.points_on(hyperplane)).sum())
    kind = SectionClass(int(classify_counts(np.array([count]), n, space.q)[0]))
    return Section(kind, count)


def classify_hyperplanes(space: ProjectiveSpace, Q: np.ndarray, n: int) -> np.ndarray:
    return classify_counts(space.meet_counts(Q), n, space.q)


def _arf_trace(form: QuadraticForm) -> int:
    """Trace of the Arf invariant of a non-singular form in characteristic 2."""
    F = form.field
    B = form.bilinear
    vecs = [np.eye(form.n_vars, dtype=np.int64)[i] for i in range(form.n_vars)]

    def b(x, y):
        return int(dot(F, matmul(F, x[None, :], B)[0], y))

    total = 0
    while vecs:
        e = vecs.pop(0)
        partner = next((k for k, v in enumerate(vecs) if b(e, v)), None)
        if partner is None:
            raise ValueError("polar form is degenerate")
        f = vecs.pop(partner)
        f = np.asarray(F.mul(f, F.inv(b(e, f))))
        total = F.add(total, F.mul(int(form.evaluate(e)), int(form.evaluate(f))))
        new = []
        for v in vecs:
            v = np.asarray(F.add(v, F.add(F.mul(b(v, f), e), F.mul(b(v, e), f))))
            new.append(v)
        vecs = new
    return F.trace(total)


def form_type(form: QuadraticForm) -> str:
    """'hyperbolic', 'elliptic' or 'parabolic' for non-singular forms, else 'singular'.

    Decided from rank and discriminant (odd q) or Arf invariant (even q),
    never by counting points.
    """
    F = form.field
    m = form.n_vars
    B = form.bilinear
    r = rank(F, B)
    if F.is_even:
        if m % 2 == 0:
            if r < m:
                return "singular"
            return "hyperbolic" if _arf_trace(form) == 0 else "elliptic"
        if r != m - 1:
            return "singular"
        rad = kernel_basis(F, B)
        return "parabolic" if int(form.evaluate(rad[0])) != 0 else "singular"
    if r < m:
        return "singular"
    if m % 2 == 1:
        return "parabolic"
    disc = _determinant(F, B)
    if m // 2 % 2 == 1:
        disc = F.neg(disc)
    return "hyperbolic" if F.is_square(disc) else "elliptic"


def _determinant(F: FieldSpec, M) -> int:
    M = np.array(M, dtype=np.int64)
    n = len(M)
    det = 1
    for c in range(n):
        nz = np.nonzero(M[c:, c])[0]
        if nz.size == 0:
            return 0
        k = c + int(nz[0])
        if k != c:
            M[[c, k]] = M[[k, c]]
            det = F.neg(det)
        piv = int(M[c, c])
        det = F.mul(det, piv)
        inv = F.inv(piv)
        for r in range(c + 1, n):
            if M[r, c]:
                M[r] = F.sub(M[r], F.mul(F.mul(int(M[r, c]), inv), M[c]))
    return det


def classify_by_restriction(form: QuadraticForm, space: ProjectiveSpace, hyperplane: int) -> SectionClass:
    """Independent classifier: type of the form restricted to a basis of H."""
    basis = kernel_basis(space.field, space.hyperplanes[hyperplane][None, :])
    kind = form_type(form.restrict(basis))
    return {"elliptic": SectionClass.ELLIPTIC, "hyperbolic": SectionClass.HYPERBOLIC,
            "singular": SectionClass.SINGULAR_CONE}[kind]


# -- polarity ----------------------------------------------------------------------------

def perp(form: QuadraticForm, subspace) -> np.ndarray:
    """Basis (reduced echelon rows) of {x : B(x, u) = 0 for all u in subspace}.

    ``subspace`` is given by spanning vectors (rows).
    """
    F = form.field
    U = np.atleast_2d(np.asarray(subspace, dtype=np.int64))
    rad = radical(form)
    if len(rad):
        # in even characteristic every perp contains the radical
        if rank(F, np.concatenate([U, rad])) == rank(F, U):
            raise ValueError("the radical of the form lies inside the subspace")
    return kernel_basis(F, matmul(F, U, form.bilinear))


def flat_point_basis(space: ProjectiveSpace, dual_basis) -> np.ndarray:
    """Vector basis of the codimension-2 flat cut out by two dual vectors."""
    return kernel_basis(space.field, np.asarray(dual_basis, dtype=np.int64))


def poles(form: QuadraticForm, space: ProjectiveSpace) -> np.ndarray:
    """pole[h] = index of the point B^{-1} h (non-degenerate polar form only)."""
    F = form.field
    B = form.bilinear
    if rank(F, B) < form.n_vars:
        raise ValueError("polar form is degenerate")
    # rows x with x B = h, i.e. B^T x^T = h^T; B is symmetric
    n = form.n_vars
    aug = np.concatenate([B, np.eye(n, dtype=np.int64)], axis=1)
    R, _ = rref(F, aug)
    Binv = R[:, n:]
    return space.index_of(matmul(F, space.hyperplanes, Binv.T))


def perp_lines(form: QuadraticForm, space: ProjectiveSpace, flats: SubspaceTable) -> np.ndarray:
    """Point indices of the perp line of every codimension-2 flat.

    The perp of the flat cut out by hyperplanes of a pencil is spanned by
    their poles, so the perp line is the image of the pencil under ``poles``.
    """
    return np.sort(poles(form, space)[flats.members], axis=1)


# -- fitting -------------------------------------------------------------------------------

def monomial_rows(field: FieldSpec, points: np.ndarray) -> np.ndarray:
    """Values of x_i x_j (i <= j, row-major) at each point."""
    m = points.shape[1]
    cols = [np.asarray(field.mul(points[:, i], points[:, j])) for i in range(m) for j in range(i, m)]
    return np.stack(cols, axis=1)


def fit_quadric(space: ProjectiveSpace, S: np.ndarray) -> QuadraticForm | None:
    """The unique (up to scalar) quadric whose zero set is exactly S, or None."""
    S = np.asarray(S, dtype=bool)
    if not S.any():
        return None
    F = space.field
    m = space.N + 1
    K = kernel_basis(F, monomial_rows(F, space.points[S]))
    if len(K) != 1:
        return None
    A = np.zeros((m, m), dtype=np.int64)
    A[np.triu_indices(m)] = K[0]
    form = QuadraticForm(F, A).normalized()
    if not np.array_equal(point_set(form, space), S):
        return None
    return form

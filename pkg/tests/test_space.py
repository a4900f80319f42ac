from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pgquadric.field import dot, field_of_order
from pgquadric.space import ProjectiveSpace, flats_from_hyperplane_pairs, gaussian_binomial

from conftest import space


def brute_points(N, q):
    """Every nonzero vector whose first nonzero coordinate is 1, lexicographically."""
    return [v for v in product(range(q), repeat=N + 1) if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]


@pytest.mark.parametrize("N,q", [(2, 2), (2, 3), (3, 2), (2, 4), (4, 2), (3, 3), (4, 3)])
def test_point_table_is_normalized_lex_order(N, q):
    S = space(N, q)
    assert S.points.tolist() == [list(v) for v in brute_points(N, q)]
    assert S.n_points == (q ** (N + 1) - 1) // (q - 1)
    assert np.array_equal(S.index_of(S.points), np.arange(S.n_points))


def test_counts():
    assert space(4, 2).n_points == 31
    assert space(4, 4).n_points == 341
    assert space(6, 2).n_points == 127
    assert space(4, 2).points_per_hyperplane == 15


def test_gaussian_binomial():
    assert gaussian_binomial(5, 2, 2) == 155
    assert gaussian_binomial(5, 2, 4) == 5797
    assert gaussian_binomial(7, 2, 2) == 2667
    assert gaussian_binomial(3, 0, 5) == 1
    assert gaussian_binomial(2, 3, 5) == 0
    for n, q in [(5, 3), (6, 2), (4, 7)]:
        # symmetry
        assert gaussian_binomial(n, 2, q) == gaussian_binomial(n, n - 2, q)


def test_incident_example():
    S = space(4, 2)
    e0 = S.point_index([1, 0, 0, 0, 0])
    x0 = S.point_index([1, 0, 0, 0, 0])
    x1 = S.point_index([0, 1, 0, 0, 0])
    assert not S.incident(e0, x0)
    assert S.incident(e0, x1)


def test_normalize_scales_to_leading_one():
    S = space(3, 5)
    assert S.normalize([[0, 3, 1, 4]]).tolist() == [[0, 1, 2, 3]]
    assert S.point_index([0, 2, 4, 1]) == S.point_index([0, 1, 2, 3])


@pytest.mark.parametrize("N,q", [(2, 2), (3, 3), (4, 2), (2, 4)])
def test_incidence_matches_dot_products(N, q):
    S = space(N, q)
    F = S.field
    for h in range(S.n_hyperplanes):
        expect = np.asarray(dot(F, S.points, S.hyperplanes[h][None, :])) == 0
        assert np.array_equal(S.points_on(h), expect)
    # symmetric incidence, q^(N-1)+...+1 points per hyperplane
    inc = np.stack([S.points_on(h) for h in range(S.n_hyperplanes)])
    assert np.array_equal(inc, inc.T)
    assert set(inc.sum(axis=1).tolist()) == {S.points_per_hyperplane}


def test_bitmap_and_dense_paths_agree():
    F = field_of_order(3)
    big = ProjectiveSpace(4, F)
    small = ProjectiveSpace(4, F, bitmap_bound=10)
    assert big.has_bitmaps and not small.has_bitmaps
    rng = np.random.default_rng(0)
    mask = rng.random(big.n_points) < 0.3
    assert np.array_equal(big.meet_counts(mask), small.meet_counts(mask))
    flats = big.codim2
    assert np.array_equal(big.flat_meet_counts(mask, flats), small.flat_meet_counts(mask, flats))


def test_worker_threads_give_same_incidence():
    F = field_of_order(4)
    assert np.array_equal(ProjectiveSpace(4, F, workers=3).incidence, space(4, 4).incidence)


@pytest.mark.parametrize("N,q", [(2, 2), (3, 2), (4, 2), (3, 3)])
def test_codim2_matches_hyperplane_pair_oracle(N, q):
    S = space(N, q)
    table = S.codim2
    assert len(table) == gaussian_binomial(N + 1, 2, q)
    assert {tuple(r) for r in table.bases.reshape(len(table), -1).tolist()} == flats_from_hyperplane_pairs(S)


def test_codim2_counts_larger():
    assert len(space(4, 4).codim2) == 5797
    assert len(space(6, 2).codim2) == 2667


@pytest.mark.parametrize("N,q", [(4, 2), (3, 3), (4, 4)])
def test_pencil_double_counting(N, q):
    """Every pair of hyperplanes lies in exactly one pencil."""
    S = space(N, q)
    members = S.codim2.members
    assert members.shape[1] == q + 1
    per_hyperplane = np.bincount(members.ravel(), minlength=S.n_hyperplanes)
    assert set(per_hyperplane.tolist()) == {gaussian_binomial(N, 1, q)}
    if S.n_hyperplanes <= 200:
        pairs = {pair for row in members.tolist() for pair in combinations(row, 2)}
        assert len(pairs) == S.n_hyperplanes * (S.n_hyperplanes - 1) // 2


def test_flat_points_lie_on_whole_pencil():
    S = space(4, 3)
    for flat in list(S.enumerate_codim2())[::97]:
        pencil = S.pencil(flat)
        assert pencil.tolist() == list(flat.pencil)
        pts = S.flat_points(flat)
        assert len(pts) == 13  # points of a plane of PG(4,3)
        for h in pencil:
            assert S.points_on(int(h))[pts].all()
        # a point off the flat lies on exactly one pencil hyperplane
        off = np.setdiff1d(np.arange(S.n_points), pts)
        on_count = np.stack([S.points_on(int(h))[off] for h in pencil]).sum(axis=0)
        assert set(on_count.tolist()) == {1}


def test_lines_through_point():
    S = space(4, 4)
    for P in (0, 17, 340):
        L = S.lines_through(P)
        assert L.shape == ((S.n_points - 1) // 4, 5)
        assert (L == P).any(axis=1).all()
        others = L[L != P]
        assert np.array_equal(np.sort(others), np.delete(np.arange(S.n_points), P))
        for line in L[:5]:
            assert np.array_equal(S.line_through(int(line[0]), int(line[-1])), line)


def test_line_through_errors_and_rank():
    S = space(3, 2)
    with pytest.raises(ValueError):
        S.line_through(3, 3)
    with pytest.raises(ValueError):
        S.pencil(np.array([[1, 0, 0, 0], [1, 0, 0, 0]]))


@given(st.sampled_from([(2, 3), (3, 2), (3, 4), (4, 3)]), st.data())
@settings(max_examples=40, deadline=None)
def test_line_through_contains_both_points(case, data):
    S = space(*case)
    p1 = data.draw(st.integers(0, S.n_points - 1))
    p2 = data.draw(st.integers(0, S.n_points - 1).filter(lambda x: x != p1))
    line = S.line_through(p1, p2)
    assert p1 in line and p2 in line and len(set(line.tolist())) == S.q + 1
    # the line is a row of the line table
    rows = {tuple(r) for r in S.lines.members.tolist()}
    assert tuple(line.tolist()) in rows


@given(st.sampled_from([(3, 2), (4, 2), (2, 5)]), st.data())
@settings(max_examples=30, deadline=None)
def test_meet_counts_by_brute_force(case, data):
    S = space(*case)
    bits = data.draw(st.lists(st.booleans(), min_size=S.n_points, max_size=S.n_points))
    mask = np.array(bits)
    counts = S.meet_counts(mask)
    for h in range(0, S.n_hyperplanes, 3):
        assert counts[h] == int((S.points_on(h) & mask).sum())

"""Core q-matroid behavior: axioms, closure, duality, minors, isomorphism.

Derived values are checked against a second, independent route wherever
one exists (definitional dual vs certificate-transform dual, full vs
local axiom checkers, certificate-backed vs table-backed ranks).
"""

import itertools
import random

import pytest

from qmatroids.errors import BudgetError, InputError
from qmatroids.qmatroid import (
    QMatroid,
    check_cyclic_flat_axioms,
    check_independence_axioms,
    check_rank_axioms,
    cyclic_flats_by_scan,
    dual_by_definition,
    enumerate_qmatroids,
    full_rank_table,
    is_isomorphic,
    phi_dual,
    rank_tables_equal,
    transport,
)
from qmatroids.subspace import (
    Subspace,
    codim1_subspaces,
    enumerate_subspaces,
    invert_matrix,
    orthogonal_complement,
    pack_vector,
    subspaces_of,
)

U = QMatroid.uniform


def span(q, n, *rows):
    return Subspace.from_coeff_rows(q, n, rows)


def one_loop(q=2):
    """Rank-1 matroid on F_q^2 whose single loop line is the diagonal."""
    table = {}
    loop = span(q, 2, (1,) * 2)
    for s in enumerate_subspaces(q, 2):
        table[s] = 0 if s.dim == 0 or s == loop else 1
    return QMatroid.from_rank_table(q, 2, table, validate=True)


def diagonal_flat_matroid():
    """Four-line example: both coordinate planes and the diagonal plane
    are rank-1 cyclic flats, everything else is as free as possible."""
    return QMatroid.from_cyclic_flats(2, 4, [
        (span(2, 4), 0),
        (span(2, 4, (1, 0, 0, 0), (0, 1, 0, 0)), 1),
        (span(2, 4, (0, 0, 1, 0), (0, 0, 0, 1)), 1),
        (span(2, 4, (1, 0, 1, 0), (0, 1, 0, 1)), 1),
        (Subspace.full(2, 4), 2),
    ])


def small_corpus():
    return [
        U(2, 2, 1), U(2, 3, 2), U(2, 3, 0), U(2, 3, 3),
        one_loop(), diagonal_flat_matroid(), U(3, 2, 1),
    ]


def test_uniform_rank_is_clamped_dimension():
    for q, n in ((2, 4), (3, 3)):
        for k in range(n + 1):
            m = U(q, n, k)
            for s in enumerate_subspaces(q, n):
                assert m.rank(s) == min(s.dim, k)
            assert m.uniform_parameters() == k
            assert m.is_uniform()


def test_uniform_parameters_none_for_non_uniform():
    assert one_loop().uniform_parameters() is None
    assert diagonal_flat_matroid().uniform_parameters() is None


def test_rank_helpers_are_consistent():
    for m in small_corpus():
        full = Subspace.full(m.q, m.n)
        top = m.rank(full)
        for s in enumerate_subspaces(m.q, m.n):
            assert m.nullity(s) == s.dim - m.rank(s)
            assert m.rank_lack(s) == top - m.rank(s)
            assert m.is_independent(s) == (m.rank(s) == s.dim)


def test_rank_table_validation_flags_submodularity():
    table = dict(full_rank_table(U(2, 4, 2)))
    table[span(2, 4, (0, 1, 0, 0))] = 0  # a single deflated line
    verdict = check_rank_axioms(2, 4, table)
    assert not verdict.ok
    assert "(R3)" in verdict.failed_axioms()
    with pytest.raises(InputError):
        QMatroid.from_rank_table(2, 4, table, validate=True)


def test_rank_table_validation_flags_range_and_monotonicity():
    table = dict(full_rank_table(U(2, 2, 1)))
    table[Subspace.zero(2, 2)] = 1
    assert "(R1)" in check_rank_axioms(2, 2, table).failed_axioms()
    table = dict(full_rank_table(U(2, 2, 1)))
    table[Subspace.full(2, 2)] = 0  # below the rank of its lines
    assert "(R2)" in check_rank_axioms(2, 2, table).failed_axioms()


def test_full_and_local_rank_checkers_agree():
    rng = random.Random(41)
    base = full_rank_table(U(2, 3, 2))
    spaces = list(base)
    for trial in range(80):
        table = dict(base)
        for _ in range(rng.randrange(1, 3)):
            s = rng.choice(spaces)
            bump = rng.choice((-1, 1))
            table[s] = max(0, min(s.dim, table[s] + bump))
        ok_full = check_rank_axioms(2, 3, table, method="full").ok
        ok_local = check_rank_axioms(2, 3, table, method="local").ok
        assert ok_full == ok_local


def test_independence_axioms_positive():
    for m in (U(2, 4, 2), one_loop(), diagonal_flat_matroid()):
        verdict = check_independence_axioms(m.q, m.n, m.independent_spaces())
        assert verdict.ok, verdict.message()


def test_independence_axioms_negative_witnesses():
    full = {s for s, r in full_rank_table(U(2, 4, 2)).items() if r == s.dim}
    line = span(2, 4, (0, 1, 0, 0))
    v = check_independence_axioms(2, 4, full - {line})
    assert not v.ok and "(I2)" in v.failed_axioms()
    v = check_independence_axioms(
        2, 4, {s for s in full if not (s.dim == 2 and s.contains(line))})
    assert not v.ok and "(I3)" in v.failed_axioms()
    assert not check_independence_axioms(2, 4, set()).ok  # (I1)


def test_independence_axiom_i4_is_not_implied_by_the_rest():
    # all lines independent, planes independent iff they contain <e1>:
    # downward closed, one-dim extensions always exist, but two maximal
    # independents of a plane without <e1> cannot both be grown, which
    # only (I4'') notices
    fam = {s for s in enumerate_subspaces(2, 3) if s.dim <= 1}
    e1 = span(2, 3, (1, 0, 0))
    fam |= {s for s in enumerate_subspaces(2, 3) if s.dim == 2 and s.contains(e1)}
    v = check_independence_axioms(2, 3, fam)
    assert not v.ok
    assert v.failed_axioms() == {"(I4'')"}


def test_closure_is_a_closure_operator():
    for m in (U(2, 4, 2), diagonal_flat_matroid(), one_loop()):
        subs = list(enumerate_subspaces(m.q, m.n))
        for a in subs:
            c = m.closure(a)
            assert c.contains(a)
            assert m.rank(c) == m.rank(a)
            assert m.closure(c) == c
            assert m.is_flat(c)
        for a, b in itertools.product(subs[:20], repeat=2):
            if b.contains(a):
                assert m.closure(b).contains(m.closure(a))


def test_is_cyclic_matches_hyperplane_definition():
    for m in (U(2, 4, 2), diagonal_flat_matroid(), one_loop()):
        for a in enumerate_subspaces(m.q, m.n):
            if a.dim == 0:
                continue
            literal = all(m.rank(h) == m.rank(a) for h in codim1_subspaces(a))
            assert m.is_cyclic(a) == literal


def test_cyclic_core_is_the_largest_cyclic_subspace():
    for m in (diagonal_flat_matroid(), one_loop()):
        for a in enumerate_subspaces(m.q, m.n):
            core = m.cyclic_core(a)
            assert a.contains(core)
            assert core.dim == 0 or m.is_cyclic(core)
            for b in subspaces_of(a):
                if b.dim and m.is_cyclic(b):
                    assert core.contains(b)


def test_cyclic_flats_scan_matches_lattice():
    for m in (U(2, 4, 2), diagonal_flat_matroid(), one_loop(), U(2, 3, 0)):
        lat = {(s, r) for s, r in m.cyclic_flats().pairs}
        scan = set(cyclic_flats_by_scan(m))
        assert lat == scan


def test_certificate_and_table_backings_agree():
    for m in small_corpus():
        rebuilt = QMatroid.from_cyclic_flats(
            m.q, m.n, m.cyclic_flats().pairs, validate=False)
        assert rank_tables_equal(m, rebuilt)
        assert rank_tables_equal(m, m.as_cyclic_flat_backed())


def test_from_cyclic_flats_validates():
    # the diagonal plane alone is not join-closed with the coordinate planes
    with pytest.raises(InputError):
        QMatroid.from_cyclic_flats(2, 4, [
            (span(2, 4), 0),
            (span(2, 4, (1, 0, 0, 0), (0, 1, 0, 0)), 1),
            (span(2, 4, (0, 0, 1, 0), (0, 0, 0, 1)), 1),
        ])
    v = check_cyclic_flat_axioms(2, 2, [(Subspace.zero(2, 2), 0),
                                        (Subspace.full(2, 2), 2)])
    assert not v.ok  # (Z2) needs rank increase strictly below dim increase
    assert "(Z2)" in v.failed_axioms()


def test_dual_matches_definitional_route():
    for m in small_corpus():
        d = m.dual()
        assert rank_tables_equal(d, dual_by_definition(m))
        assert rank_tables_equal(d.dual(), m)


def test_dual_rank_formula_pointwise():
    for m in (U(2, 4, 1), one_loop(), diagonal_flat_matroid()):
        d = m.dual()
        top = m.rank(Subspace.full(m.q, m.n))
        for a in enumerate_subspaces(m.q, m.n):
            assert d.rank(a) == a.dim - top + m.rank(orthogonal_complement(a))


def test_dual_of_uniform():
    for q, n in ((2, 4), (3, 3)):
        for k in range(n + 1):
            assert rank_tables_equal(U(q, n, k).dual(), U(q, n, n - k))


def test_dual_swaps_loops_and_coloops():
    for m in small_corpus():
        d = m.dual()
        assert m.has_loops() == d.has_coloops()
        assert m.has_coloops() == d.has_loops()
        loop_dims = sorted(s.rows for s in m.loops())
        coloop_dims = sorted(orthogonal_complement(s).rows for s in d.coloops())
        assert (not m.has_loops()) or loop_dims == coloop_dims


def test_phi_dual_is_an_involution_and_isomorphic_to_dual():
    m = diagonal_flat_matroid()
    pd = phi_dual(m)
    assert rank_tables_equal(phi_dual(pd), m)
    assert is_isomorphic(pd, m.dual())
    lop = one_loop()
    assert rank_tables_equal(phi_dual(phi_dual(lop)), lop)


def test_minor_identities():
    m = diagonal_flat_matroid()
    E = Subspace.full(2, 4)
    zero = Subspace.zero(2, 4)
    assert m.restriction(E) is m or rank_tables_equal(m.restriction(E), m)
    assert rank_tables_equal(m.contraction(zero), m)
    seam = span(2, 4, (1, 0, 0, 0), (0, 1, 0, 0))
    res = m.restriction(seam)
    assert res.n == 2 and res.rank(Subspace.full(2, 2)) == 1
    con = m.contraction(seam)
    assert con.n == 2 and con.rank(Subspace.full(2, 2)) == 1


def test_minor_rank_formula():
    m = U(2, 4, 2)
    sub = span(2, 4, (1, 0, 0, 0))
    sup = span(2, 4, (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))
    piece, qmap = m.minor_with_map(sub, sup)
    assert piece.n == 2
    for x in enumerate_subspaces(2, piece.n):
        lifted = qmap.preimage(x)
        assert piece.rank(x) == m.rank(lifted) - m.rank(sub)


def test_contraction_dual_is_restriction_of_dual():
    for m in (U(2, 3, 1), U(2, 3, 2), one_loop(), diagonal_flat_matroid()):
        for a in enumerate_subspaces(m.q, m.n):
            if a.dim in (0, m.n):
                continue
            lhs = m.contraction(a).dual()
            rhs = m.dual().restriction(orthogonal_complement(a))
            assert is_isomorphic(lhs, rhs)


def test_transport_by_identity_and_round_trip():
    rng = random.Random(57)
    for m in (U(2, 3, 2), diagonal_flat_matroid()):
        n, q = m.n, m.q
        ident = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
        assert rank_tables_equal(transport(m, ident), m)
        for _ in range(10):
            packed = None
            while packed is None:
                cand = [pack_vector(q, n, [rng.randrange(q) for _ in range(n)])
                        for _ in range(n)]
                try:
                    inv = invert_matrix(q, n, cand)
                except InputError:
                    continue
                packed = cand
            from qmatroids.subspace import unpack_vector
            rows = [unpack_vector(q, n, v) for v in packed]
            inv_rows = [unpack_vector(q, n, v) for v in inv]
            moved = transport(m, rows)
            assert rank_tables_equal(transport(moved, inv_rows), m)
            assert is_isomorphic(moved, m)


def test_is_isomorphic_reports_usable_images():
    m = diagonal_flat_matroid()
    images = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    moved = transport(m, images)
    verdict = is_isomorphic(m, moved)
    assert verdict.kind == "yes"
    assert rank_tables_equal(transport(m, verdict.images), moved)


def test_is_isomorphic_negatives():
    v = is_isomorphic(U(2, 2, 1), one_loop())
    assert v.kind == "no" and v.reason
    with pytest.raises(InputError):
        is_isomorphic(U(2, 2, 1), U(2, 3, 1))  # mismatched ground spaces


def test_enumerate_qmatroids_counts():
    for n, count in ((1, 2), (2, 4), (3, 8)):
        ms = list(enumerate_qmatroids(2, n))
        assert len(ms) == count
        for m in ms:
            assert check_rank_axioms(2, n, full_rank_table(m)).ok
        for a, b in itertools.combinations(ms, 2):
            assert is_isomorphic(a, b).kind == "no"


def test_enumerate_qmatroids_budget():
    with pytest.raises(BudgetError):
        list(enumerate_qmatroids(2, 4))
    with pytest.raises(BudgetError):
        list(enumerate_qmatroids(3, 2))


def test_dict_round_trips():
    for m in small_corpus():
        doc = m.to_dict()
        again = QMatroid.from_dict(doc)
        assert rank_tables_equal(m, again)
    table_doc = U(2, 2, 1).as_cyclic_flat_backed().to_dict()
    assert "cyclic_flats" in table_doc
    raw = {"q": 2, "n": 1, "ranks": [
        {"basis": [], "r": 0}, {"basis": [[1]], "r": 1}]}
    assert QMatroid.from_dict(raw).rank(Subspace.full(2, 1)) == 1
    bad = {"q": 2, "n": 1, "ranks": [
        {"basis": [], "r": 1}, {"basis": [[1]], "r": 1}]}
    with pytest.raises(InputError):
        QMatroid.from_dict(bad)


def test_lattice_navigation():
    m = diagonal_flat_matroid()
    lat = m.cyclic_flats()
    assert len(lat) == 5
    assert lat.bottom() == Subspace.zero(2, 4)
    assert lat.top() == Subspace.full(2, 4)
    planes = [s for s in lat.spaces() if s.dim == 2]
    assert len(planes) == 3
    for a, b in itertools.combinations(planes, 2):
        assert lat.join(a, b) == lat.top()
        assert lat.meet(a, b) == lat.bottom()
    edges = lat.hasse_edges()
    assert len(edges) == 6
    nodes, esig = lat.shape_signature()
    assert nodes == ((0, 0), (2, 1), (2, 1), (2, 1), (4, 2))
    assert esig == (((0, 0), (2, 1)),) * 3 + (((2, 1), (4, 2)),) * 3


def test_loops_and_coloops_known_cases():
    assert U(2, 2, 0).has_loops() and not U(2, 2, 0).has_coloops()
    assert U(2, 2, 2).has_coloops() and not U(2, 2, 2).has_loops()
    assert not U(2, 2, 1).has_loops() and not U(2, 2, 1).has_coloops()
    lop = one_loop()
    assert [s.coeff_rows() for s in lop.loops()] == [[[1, 1]]]
    # the loop line is a hyperplane of rank 0 < 1, so E is not cyclic
    # and the matroid has a coloop as well
    assert lop.has_coloops()

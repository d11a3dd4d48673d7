"""Subspace lattice sweeps: canonical forms, lattice identities, budgets."""

import itertools
import random

import pytest

from qmatroids.errors import BudgetError, InputError
from qmatroids.subspace import (
    DirectSumContext,
    QuotientMap,
    Subspace,
    atoms,
    codim1_subspaces,
    covers,
    enumerate_subspaces,
    gaussian_binomial,
    intersect_subspaces,
    invert_matrix,
    lattice_size,
    map_by_matrix,
    orthogonal_complement,
    pack_vector,
    phi,
    quotient_map,
    reverse,
    subspaces_of,
    sum_subspaces,
    unpack_vector,
    vector_index,
)


def span(q, n, *rows):
    return Subspace.from_coeff_rows(q, n, rows)


def test_pack_unpack_round_trip():
    for q, n in ((2, 5), (3, 3), (5, 2)):
        for idx in range(q**n):
            coeffs = []
            t = idx
            for _ in range(n):
                coeffs.append(t % q)
                t //= q
            v = pack_vector(q, n, coeffs)
            assert unpack_vector(q, n, v) == coeffs
            assert vector_index(q, n, v) == idx


def test_rref_canonical_under_spanning_set_changes():
    rng = random.Random(17)
    for q, n in ((2, 4), (3, 3)):
        for _ in range(60):
            k = rng.randrange(1, n + 1)
            basis = [[rng.randrange(q) for _ in range(n)] for _ in range(k)]
            a = Subspace.from_coeff_rows(q, n, basis)
            # shuffled, rescaled, and pairwise-mixed spanning sets
            mixed = [row[:] for row in basis]
            for _ in range(6):
                i, j = rng.randrange(k), rng.randrange(k)
                if i == j:
                    c = rng.randrange(1, q)
                    mixed[i] = [(c * x) % q for x in mixed[i]]
                else:
                    c = rng.randrange(q)
                    mixed[i] = [(x + c * y) % q for x, y in zip(mixed[i], mixed[j])]
            rng.shuffle(mixed)
            assert Subspace.from_coeff_rows(q, n, mixed) == a
            assert hash(Subspace.from_coeff_rows(q, n, mixed)) == hash(a)


def test_dim_codim_contains_elements():
    a = span(2, 4, (1, 0, 1, 0), (0, 1, 0, 1))
    assert a.dim == 2 and a.codim == 2
    assert a.contains(span(2, 4, (1, 1, 1, 1)))
    assert not a.contains(span(2, 4, (1, 0, 0, 0)))
    assert len(a.elements()) == 4
    assert bin(a.element_mask()).count("1") == 4
    b = span(3, 3, (1, 0, 2))
    assert len(b.elements()) == 3


def test_extend_and_contains_vector():
    a = Subspace.zero(2, 4)
    v = pack_vector(2, 4, (1, 1, 0, 0))
    b = a.extend(v)
    assert b.dim == 1 and b.contains_vector(v)
    assert b.extend(v) == b


def test_modular_law_exhaustive_gf2():
    all_subs = list(enumerate_subspaces(2, 3))
    assert len(all_subs) == lattice_size(2, 3) == 16
    for a in all_subs:
        for b in all_subs:
            s = sum_subspaces(a, b)
            i = intersect_subspaces(a, b)
            assert a.dim + b.dim == s.dim + i.dim
            assert s.contains(a) and s.contains(b)
            assert a.contains(i) and b.contains(i)


def test_modular_law_seeded_gf3():
    rng = random.Random(23)
    subs = list(enumerate_subspaces(3, 3))
    for _ in range(300):
        a, b = rng.choice(subs), rng.choice(subs)
        s = sum_subspaces(a, b)
        i = intersect_subspaces(a, b)
        assert a.dim + b.dim == s.dim + i.dim


def test_orthogonal_complement_laws():
    for q, n in ((2, 3), (3, 2)):
        subs = list(enumerate_subspaces(q, n))
        for a in subs:
            c = orthogonal_complement(a)
            assert c.dim == n - a.dim
            assert orthogonal_complement(c) == a
        for a, b in itertools.product(subs, repeat=2):
            lhs = orthogonal_complement(sum_subspaces(a, b))
            rhs = intersect_subspaces(orthogonal_complement(a), orthogonal_complement(b))
            assert lhs == rhs


def test_reverse_and_phi_are_involutions():
    for q, n in ((2, 4), (3, 3)):
        for a in enumerate_subspaces(q, n):
            assert reverse(reverse(a)) == a
            assert phi(phi(a)) == a
            assert phi(a).dim == n - a.dim


def test_phi_is_inclusion_reversing():
    subs = list(enumerate_subspaces(2, 3))
    for a, b in itertools.product(subs, repeat=2):
        assert phi(sum_subspaces(a, b)) == intersect_subspaces(phi(a), phi(b))
        if a.contains(b):
            assert phi(b).contains(phi(a))


def test_atoms_codim1_covers_counts():
    a = Subspace.full(2, 4)
    assert len(list(atoms(a))) == gaussian_binomial(4, 1, 2) == 15
    assert len(list(codim1_subspaces(a))) == gaussian_binomial(4, 3, 2) == 15
    line = span(3, 3, (1, 2, 0))
    ups = list(covers(line))
    assert len(ups) == gaussian_binomial(2, 1, 3)  # planes over a line in F_3^3
    assert all(u.dim == 2 and u.contains(line) for u in ups)


def test_enumerate_subspaces_counts_and_order():
    for q, n in ((2, 4), (3, 3)):
        seen = list(enumerate_subspaces(q, n))
        assert len(seen) == len(set(seen)) == lattice_size(q, n)
        dims = [s.dim for s in seen]
        assert dims == sorted(dims)
        for k in range(n + 1):
            assert dims.count(k) == gaussian_binomial(n, k, q)


def test_subspaces_of_matches_filter():
    everything = list(enumerate_subspaces(2, 4))
    for a in everything:
        if a.dim > 3:
            continue
        inside = set(subspaces_of(a))
        assert inside == {s for s in everything if a.contains(s)}


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(3, 1, 3) == 13
    assert gaussian_binomial(8, 4, 2) == 200787
    assert lattice_size(2, 4) == 67
    assert lattice_size(2, 5) == 374
    for q, n in ((2, 8), (3, 4)):
        assert lattice_size(q, n) == sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def test_dict_round_trip_and_rref_rejection():
    a = span(2, 4, (1, 1, 0, 0), (0, 0, 1, 1))
    assert Subspace.from_dict(a.to_dict()) == a
    doc = {"q": 2, "n": 4, "basis": [[1, 1, 0, 0], [1, 1, 1, 1]]}
    with pytest.raises(InputError) as err:
        Subspace.from_dict(doc)
    # the message carries the canonical form so the doc can be repaired
    assert "[[1, 1, 0, 0], [0, 0, 1, 1]]" in str(err.value)


def test_quotient_map_round_trips():
    sub = span(2, 4, (1, 0, 1, 0))
    sup = Subspace.full(2, 4)
    qm = quotient_map(sub, sup)
    for v in sup.elements():
        w = qm.to_quotient(v)
        lifted = qm.lift(w)
        assert qm.to_quotient(lifted) == w
        # lift differs from v by an element of the kernel
        assert sub.contains_vector(v ^ lifted)
    img = qm.map_subspace(span(2, 4, (0, 1, 0, 0), (1, 0, 1, 0)))
    assert img.dim == 1
    pre = qm.preimage(img)
    assert pre.contains(sub) and pre.dim == img.dim + sub.dim


def test_quotient_map_respects_inclusion():
    sub = span(3, 3, (1, 1, 0))
    qm = QuotientMap(sub, Subspace.full(3, 3))
    for a in enumerate_subspaces(3, 3):
        if not a.contains(sub):
            continue
        img = qm.map_subspace(a)
        assert img.dim == a.dim - 1
        assert qm.preimage(img) == a


def test_direct_sum_context_identities():
    ctx = DirectSumContext(2, 2, 3)
    subs1 = list(enumerate_subspaces(2, 2))
    subs2 = list(enumerate_subspaces(2, 3))
    for a in subs1:
        for b in subs2:
            s = sum_subspaces(ctx.embed1(a), ctx.embed2(b))
            assert ctx.project1(s) == a and ctx.project2(s) == b
            left, right = ctx.slice(s)
            assert (left, right) == (a, b)
    back = DirectSumContext(2, 3, 2)
    for a in subs1:
        e = ctx.embed1(a)
        assert back.swap(ctx.swap(e)) == e


def test_slice_dims_add_up():
    ctx = DirectSumContext(2, 2, 2)
    for a in enumerate_subspaces(2, 4):
        left, right = ctx.slice(a)
        assert a.dim == left.dim + right.dim


def test_map_by_matrix_and_inverse():
    rng = random.Random(31)
    for q, n in ((2, 4), (3, 3)):
        ident = [pack_vector(q, n, [1 if j == i else 0 for j in range(n)])
                 for i in range(n)]
        subs = list(enumerate_subspaces(q, n))
        for a in subs:
            assert map_by_matrix(a, ident) == a
        for _ in range(20):
            images = None
            while images is None:
                cand = [pack_vector(q, n, [rng.randrange(q) for _ in range(n)])
                        for _ in range(n)]
                try:
                    inv = invert_matrix(q, n, cand)
                except InputError:
                    continue
                images = cand
            for a in rng.sample(subs, 8):
                moved = map_by_matrix(a, images)
                assert moved.dim == a.dim
                assert map_by_matrix(moved, inv) == a


def test_invert_matrix_rejects_singular():
    with pytest.raises(InputError):
        invert_matrix(2, 2, [0b01, 0b01])
    with pytest.raises(InputError):
        invert_matrix(3, 2, [(1, 2), (2, 1)])  # second row is twice the first


def test_budget_guards():
    with pytest.raises(BudgetError):
        list(enumerate_subspaces(2, 11))
    with pytest.raises(BudgetError):
        Subspace.full(2, 14).element_mask()
    with pytest.raises(InputError):
        sum_subspaces(span(2, 3, (1, 0, 0)), span(2, 4, (1, 0, 0, 0)))
    with pytest.raises(InputError):
        span(2, 3, (1, 0, 0, 1))

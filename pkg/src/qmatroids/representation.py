"""q-matroids represented by matrices over an extension field.

A full-row-rank k x n matrix G over GF(q^m) assigns to every
F_q-subspace U of F_q^n the GF(q^m)-rank of G * A^U, where A^U is the
transpose of U's canonical basis.  That assignment is a q-matroid rank
function.  This module materializes it, profiles the linear set cut out
by the column system on the projective line, tests evasivity against
the hyperplanes that avoid a distinguished coordinate block, and
searches for coupling blocks X that make the stacked matrix
(G1 X; 0 G2) represent a free product of uniform q-matroids.
"""

from __future__ import annotations

import itertools
import multiprocessing
from dataclasses import dataclass
from typing import Optional, Sequence

from .constructions import free_product
from .errors import BudgetError, InputError
from .gf import BaseField, ExtField, Matrix, matrix_rank
from .qmatroid import QMatroid
from .subspace import Subspace, enumerate_subspaces

# Hyperplane enumeration is (q^{mk}-1)/(q^m-1) normals; the checks this
# module exists for only ever need k = 2.
EVASIVE_DIM_LIMIT = 3
EVASIVE_ORDER_LIMIT = 1 << 10

# Candidate coupling blocks tried by search_x.  The largest worked case,
# one free row over GF(2^7) with two unknown entries, sits exactly at
# this bound.
SEARCH_X_LIMIT = 1 << 14

# Vectors streamed while profiling a linear set (q^n of them).
PROFILE_VECTOR_LIMIT = 1 << 16


def _span_rank(field, vectors) -> int:
    """Dimension of the F_{q^m}-span of row vectors, by online elimination."""
    basis: list[tuple[int, ...]] = []
    pivots: list[int] = []
    for v in vectors:
        v = list(v)
        for p, b in zip(pivots, basis):
            c = v[p]
            if c:
                v = [field.sub(x, field.mul(c, y)) for x, y in zip(v, b)]
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            continue
        inv = field.inv(v[p])
        basis.append(tuple(field.mul(inv, x) for x in v))
        pivots.append(p)
    return len(basis)


def _columns(G: Matrix) -> list[tuple[int, ...]]:
    return [tuple(r[j] for r in G.rows) for j in range(G.ncols)]


def _combine(field, cols: Sequence[tuple[int, ...]], coeffs: Sequence[int]):
    """The system vector with the given prime-field coordinates."""
    k = len(cols[0]) if cols else 0
    acc = [field.zero] * k
    for c, col in zip(coeffs, cols):
        if c:
            acc = [field.add(a, field.smul(c, x)) for a, x in zip(acc, col)]
    return tuple(acc)


class QSystem:
    """An F_q-subspace of F_{q^m}^k, given by an independent generating set.

    The generators are the columns of a representing matrix: they must
    be linearly independent over the prime field F_q and must span the
    full ambient space over F_{q^m}.
    """

    __slots__ = ("field", "k", "generators")

    def __init__(self, field: ExtField, k: int, generators):
        if not isinstance(field, ExtField):
            raise InputError("a q-system lives in an extension field; use GF(q^1) for the prime field itself")
        gens = tuple(tuple(int(x) for x in g) for g in generators)
        for g in gens:
            if len(g) != k:
                raise InputError(f"generator length {len(g)} != ambient dimension {k}")
            for x in g:
                if not 0 <= x < field.order:
                    raise InputError(f"entry {x} out of range for a field of order {field.order}")
        # Independence over F_q is rank of the q-ary coordinate expansion.
        expanded = [[c for x in g for c in field.coeffs(x)] for g in gens]
        if matrix_rank(Matrix(BaseField(field.q), expanded)) != len(gens):
            raise InputError("generators are linearly dependent over the prime field")
        if matrix_rank(Matrix(field, gens)) != k:
            raise InputError("generators do not span the ambient space over the extension field")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "generators", gens)

    def __setattr__(self, name, value):
        raise AttributeError("QSystem is immutable")

    @classmethod
    def from_matrix(cls, G: Matrix) -> "QSystem":
        return cls(G.field, G.nrows, _columns(G))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def n(self) -> int:
        return len(self.generators)

    def __repr__(self):
        f = self.field
        return f"QSystem(GF({f.q}^{f.m}), k={self.k}, n={self.n})"

    def image(self, coeffs: Sequence[int]):
        """The system vector with the given F_q-coordinates."""
        return _combine(self.field, self.generators, coeffs)


def qmatroid_from_matrix(G: Matrix, q: int | None = None) -> QMatroid:
    """The q-matroid on F_q^n whose rank of U is the field rank of G * A^U.

    q defaults to the prime of G's field and must match it when given.
    The whole rank table is materialized, one small elimination per
    subspace of F_q^n.
    """
    fq = G.field.q
    if q is None:
        q = fq
    elif q != fq:
        raise InputError(f"requested base field GF({q}) but the matrix lives over a field of characteristic {fq}")
    k, n = G.nrows, G.ncols
    if matrix_rank(G) != k:
        raise InputError("matrix does not have full row rank")
    cols = _columns(G)
    field = G.field
    table = {}
    for s in enumerate_subspaces(q, n):
        vecs = [_combine(field, cols, row) for row in s.coeff_rows()]
        table[s] = _span_rank(field, vecs)
    return QMatroid.from_rank_table(q, n, table)


def system_rank(system: QSystem, space: Subspace) -> int:
    """Span dimension of the system vectors indexed by a whole subspace.

    Streams every vector of the subspace rather than just a basis, so it
    is an independent cross-check of the matrix route.
    """
    if space.q != system.q or space.n != system.n:
        raise InputError("subspace ambient does not match the system")
    from .subspace import unpack_vector

    vecs = (system.image(unpack_vector(space.q, space.n, v)) for v in space.elements())
    return _span_rank(system.field, vecs)


def qmatroid_from_system(system: QSystem) -> QMatroid:
    """The same q-matroid as qmatroid_from_matrix, by the vector-span route."""
    q, n = system.q, system.n
    table = {s: system_rank(system, s) for s in enumerate_subspaces(q, n)}
    return QMatroid.from_rank_table(q, n, table)


def block_rep(G1: Matrix, G2: Matrix, X: Matrix) -> Matrix:
    """Stack two representations with a coupling block: (G1 X; 0 G2)."""
    if not (G1.field == G2.field == X.field):
        raise InputError("block assembly needs all three matrices over one field")
    if X.nrows != G1.nrows or X.ncols != G2.ncols:
        raise InputError(
            f"coupling block must be {G1.nrows}x{G2.ncols}, got {X.nrows}x{X.ncols}"
        )
    field = G1.field
    top = [tuple(r1) + tuple(rx) for r1, rx in zip(G1.rows, X.rows)]
    bottom = [(field.zero,) * G1.ncols + tuple(r2) for r2 in G2.rows]
    return Matrix(field, top + bottom)


@dataclass(frozen=True)
class LinearSetProfile:
    """Points of PG(1, q^m) met by a system, with their weights.

    Each point is a normalized representative (first nonzero coordinate
    scaled to 1); its weight is the F_q-dimension of the system's
    intersection with the point viewed as an m-dimensional F_q-space.
    The weights partition the nonzero system vectors.
    """

    field: ExtField
    rank: int
    points: tuple

    def __post_init__(self):
        q = self.field.q
        total = sum(q**w - 1 for _, w in self.points)
        if total != q**self.rank - 1:
            raise InputError("profile weights do not partition the nonzero system vectors")

    def weights(self) -> list[int]:
        return sorted(w for _, w in self.points)

    def to_dict(self) -> dict:
        f = self.field
        return {
            "rank": self.rank,
            "points": [
                {"point": [f.format_element(x) for x in pt], "weight": w}
                for pt, w in self.points
            ],
        }


def linear_set_profile(system: QSystem) -> LinearSetProfile:
    """Profile the linear set of a rank-n system on the projective line."""
    if system.k != 2:
        raise InputError(f"linear-set profiles are computed on PG(1, q^m); ambient dimension is {system.k}")
    field, q, n = system.field, system.q, system.n
    if q**n > PROFILE_VECTOR_LIMIT:
        raise BudgetError(f"profiling streams q^n = {q**n} vectors, over the budget {PROFILE_VECTOR_LIMIT}")
    counts: dict[tuple[int, int], int] = {}
    for coeffs in itertools.product(range(q), repeat=n):
        if not any(coeffs):
            continue
        y0, y1 = system.image(coeffs)
        pt = (1, field.mul(field.inv(y0), y1)) if y0 else (0, 1)
        counts[pt] = counts.get(pt, 0) + 1
    points = []
    for pt in sorted(counts):
        size = counts[pt] + 1
        w = 0
        while size % q == 0:
            size //= q
            w += 1
        # |S meet P| is an F_q-subspace, so the count must be q^w - 1.
        assert size == 1 and w >= 1, "point count is not a power of q"
        points.append((pt, w))
    return LinearSetProfile(field=field, rank=n, points=tuple(points))


def is_i_club(system: QSystem) -> Optional[int]:
    """The club index of the system's linear set, if it has one.

    Returns i when all points have weight 1 except exactly one of
    weight i >= 2, and None otherwise (in particular for scattered
    sets, where every weight is 1).
    """
    profile = linear_set_profile(system)
    heavy = [w for _, w in profile.points if w >= 2]
    if len(heavy) == 1:
        return heavy[0]
    return None


def is_evasive(system: QSystem, k1: int, h: int) -> bool:
    """Whether every hyperplane avoiding F_{q^m}^{k1} + 0 meets the system thinly.

    The family consists of the hyperplanes of F_{q^m}^k that do not
    contain the span of the first k1 coordinates; evasivity holds when
    each of them intersects the system in F_q-dimension at most h.
    """
    field, k = system.field, system.k
    if not 1 <= k1 <= k:
        raise InputError(f"distinguished block dimension {k1} out of range for ambient {k}")
    if h < 0:
        raise InputError("intersection bound must be nonnegative")
    if k > EVASIVE_DIM_LIMIT or field.order > EVASIVE_ORDER_LIMIT:
        raise BudgetError(
            f"hyperplane scan supports k <= {EVASIVE_DIM_LIMIT} and q^m <= {EVASIVE_ORDER_LIMIT}"
        )
    base = BaseField(field.q)
    n = system.n
    for pos in range(k):
        for tail in itertools.product(range(field.order), repeat=k - pos - 1):
            u = (field.zero,) * pos + (field.one,) + tail
            if not any(u[i] for i in range(k1)):
                continue  # this hyperplane contains the distinguished block
            # dim over F_q of (hyperplane meet system) = n - rank of the
            # functional's coordinate matrix on the generators.
            rows = []
            for g in system.generators:
                val = field.zero
                for ui, gi in zip(u, g):
                    val = field.add(val, field.mul(ui, gi))
                rows.append(field.coeffs(val))
            if n - matrix_rank(Matrix(base, rows)) > h:
                return False
    return True


def _split_seam(q: int, n: int, n1: int) -> Subspace:
    rows = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n1)]
    return Subspace.from_coeff_rows(q, n, rows)


def verify_free_product_rep(G: Matrix, q: int, n1: int, k1: int) -> bool:
    """Whether G represents the free product of two uniform q-matroids.

    Builds the q-matroid of G and tests that its cyclic flats are
    exactly 0, F_q^{n1} + 0 and F_q^n with ranks 0, k1 and k.  That
    profile characterizes U_{k1,n1} free-product U_{k-k1,n-n1} when
    both factors are proper uniforms.
    """
    k, n = G.nrows, G.ncols
    if not 0 < n1 < n:
        raise InputError(f"split position {n1} must be strictly inside 0..{n}")
    if not 0 < k1 < k:
        raise InputError(f"left rank {k1} must be strictly inside 0..{k}")
    m = qmatroid_from_matrix(G, q)
    expected = {
        Subspace.zero(q, n): 0,
        _split_seam(q, n, n1): k1,
        Subspace.full(q, n): k,
    }
    return dict(m.cyclic_flats().pairs) == expected


def _search_candidates(order: int, k1: int, n2: int, leads=None):
    """Coupling blocks as flat entry tuples, lexicographic in encoding.

    With a single row the first entry is pinned to zero: scaling the
    new column block by a unit of the extension field changes nothing,
    so one entry can always be normalized away.  `leads` restricts the
    first free entry, which is how the space splits across workers.
    """
    free = k1 * n2 - 1 if k1 == 1 else k1 * n2
    prefix = (0,) if k1 == 1 else ()
    if leads is None:
        leads = range(order)
    for first in leads:
        for rest in itertools.product(range(order), repeat=free - 1):
            yield prefix + (first,) + rest


def _rank_matches(field, cols, rows, want: int, k: int) -> bool:
    """Whether the images of `rows` span dimension exactly `want`.

    Combines rows lazily and stops as soon as the answer is decided:
    a rank above `want` fails outright, and hitting `want` with the
    ambient dimension `k` cannot be undone by more rows.
    """
    basis: list[tuple[int, ...]] = []
    pivots: list[int] = []
    for row in rows:
        v = list(_combine(field, cols, row))
        for p, b in zip(pivots, basis):
            c = v[p]
            if c:
                v = [field.sub(x, field.mul(c, y)) for x, y in zip(v, b)]
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            continue
        if len(basis) == want:
            return False
        inv = field.inv(v[p])
        basis.append(tuple(field.mul(inv, x) for x in v))
        pivots.append(p)
        if len(basis) == want == k:
            return True
    return len(basis) == want


def _as_block(field, entries, k1: int, n2: int) -> Matrix:
    return Matrix(field, [entries[i * n2:(i + 1) * n2] for i in range(k1)])


def _scan_chunk(args):
    """One worker's share of the coupling search: filter by rank table."""
    (q, mdeg, modulus, g1rows, g2rows, leads) = args
    field = ExtField(q, mdeg, modulus)
    G1 = Matrix(field, g1rows)
    G2 = Matrix(field, g2rows)
    k1, n1 = G1.nrows, G1.ncols
    k2, n2 = G2.nrows, G2.ncols
    n, k = n1 + n2, k1 + k2
    target = free_product(QMatroid.uniform(q, n1, k1), QMatroid.uniform(q, n2, k2))
    checks = []
    for s in enumerate_subspaces(q, n):
        if s.dim:
            checks.append((s.coeff_rows(), target.rank(s)))
    g1cols = _columns(G1)
    g2cols = _columns(G2)
    hits = []
    for entries in _search_candidates(field.order, k1, n2, leads=leads):
        cols = [g1col + (field.zero,) * k2 for g1col in g1cols]
        for j in range(n2):
            xcol = tuple(entries[i * n2 + j] for i in range(k1))
            cols.append(xcol + g2cols[j])
        if all(_rank_matches(field, cols, rows, w, k) for rows, w in checks):
            hits.append(entries)
    return hits


def coupling_search_size(G1: Matrix, G2: Matrix) -> int:
    """Number of coupling blocks search_x enumerates for this pair.

    One entry is normalized away when G1 has a single row, so the
    count is order**(k1*n2 - 1) in that case and order**(k1*n2)
    otherwise.
    """
    if G1.field != G2.field:
        raise InputError("both factors must be represented over one field")
    k1 = G1.nrows
    n2 = G2.ncols
    free = k1 * n2 - 1 if k1 == 1 else k1 * n2
    if free < 1:
        raise InputError("no coupling entries to search")
    return G1.field.order**free


def search_x(G1: Matrix, G2: Matrix, q: int | None = None, *, workers: int = 1,
             limit: int = SEARCH_X_LIMIT) -> list[Matrix]:
    """All coupling blocks X making (G1 X; 0 G2) represent a uniform free product.

    Exhaustive over the whole entry space (first entry normalized to
    zero when G1 has one row), in lexicographic order of the entry
    encodings.  A candidate passes when its full rank table equals the
    free-product target's; that is equivalent to the cyclic-flat test
    of verify_free_product_rep, which this function confirms by scanning
    the target's flats once per call and re-verifying the first hit
    literally.
    """
    if G1.field != G2.field:
        raise InputError("both factors must be represented over one field")
    field = G1.field
    fq = field.q
    if q is None:
        q = fq
    elif q != fq:
        raise InputError(f"requested base field GF({q}) but the matrices live over a field of characteristic {fq}")
    k1, n1 = G1.nrows, G1.ncols
    k2, n2 = G2.nrows, G2.ncols
    if matrix_rank(G1) != k1 or matrix_rank(G2) != k2:
        raise InputError("factor matrices must have full row rank")
    if not (k1 < n1 and k2 < n2):
        raise InputError("a uniform free product with this cyclic-flat profile needs k_i < n_i on both sides")
    count = coupling_search_size(G1, G2)
    if count > limit:
        raise BudgetError(f"search space has {count} candidates, over the budget {limit}")
    n, k = n1 + n2, k1 + k2
    # Scan-route anchor: the target's cyclic flats must be the exact
    # profile the literal verifier tests for.  Given that, rank-table
    # equality with the target decides membership.
    target = free_product(QMatroid.uniform(q, n1, k1), QMatroid.uniform(q, n2, k2))
    anchor = QMatroid.from_rank_table(q, n, {s: target.rank(s) for s in enumerate_subspaces(q, n)})
    expected = {
        Subspace.zero(q, n): 0,
        _split_seam(q, n, n1): k1,
        Subspace.full(q, n): k,
    }
    assert dict(anchor.cyclic_flats().pairs) == expected
    task = (q, field.m, field.modulus, G1.rows, G2.rows)
    if workers > 1:
        # contiguous lead ranges, one task per worker
        step = -(-field.order // workers)
        parts = [range(lo, min(lo + step, field.order)) for lo in range(0, field.order, step)]
        with multiprocessing.Pool(len(parts)) as pool:
            chunks = pool.map(_scan_chunk, [task + (part,) for part in parts])
        hits = sorted(e for chunk in chunks for e in chunk)
    else:
        hits = _scan_chunk(task + (None,))
    if hits:
        first = _as_block(field, hits[0], k1, n2)
        assert verify_free_product_rep(block_rep(G1, G2, first), q, n1, k1)
    return [_as_block(field, entries, k1, n2) for entries in hits]

"""Splitting q-matroids into free products.

A subspace is a free separator when every cyclic flat is comparable to
it.  Closing the cyclic flats under sums and intersections (plus the
zero and full spaces, the empty-family sum and intersection) gives a
small sublattice whose pinchpoints, the elements comparable to
everything, line up in a chain: the primary flag.  Interval minors
between consecutive flag entries are the primary factors, each uniform
or irreducible, and their free product rebuilds the original q-matroid
after the change of basis that straightens the flag into coordinate
blocks.

The Vámos q-matroid lives here too, as the stock example of an
irreducible q-matroid, together with a streaming full-lattice scan of
its cyclic flats that does not trust the certificate construction.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass

from .errors import BudgetError, InputError
from .constructions import free_product_chain
from .qmatroid import QMatroid, rank_tables_equal, transport
from .subspace import (
    Subspace,
    codim1_subspaces,
    covers,
    enumerate_subspaces,
    gaussian_binomial,
    intersect_subspaces,
    lattice_size,
    rref_rows_for_pattern,
    sum_subspaces,
    unpack_vector,
)

# The sum/intersection closure is computed by pairwise fixpoint, which
# stays tractable only for small cyclic-flat families.
DM_FLATS_LIMIT = 24


def _comparable(a: Subspace, b: Subspace) -> bool:
    return a.contains(b) or b.contains(a)


def is_free_separator(m: QMatroid, a: Subspace) -> bool:
    """True when every cyclic flat of m is comparable to a."""
    if (a.q, a.n) != (m.q, m.n):
        raise InputError("separator candidate lives in the wrong ambient")
    return all(_comparable(a, z) for z, _ in m.certificates())


def free_separators(m: QMatroid):
    """All free separators, streamed in dimension order (budgeted)."""
    for a in enumerate_subspaces(m.q, m.n):
        if is_free_separator(m, a):
            yield a


class DmLattice:
    """The cyclic flats closed under sums and intersections.

    Always contains the zero and full spaces (the empty sum and the
    empty intersection), and is closed under both operations by
    construction.
    """

    def __init__(self, m: QMatroid):
        certs = m.certificates()
        if len(certs) > DM_FLATS_LIMIT:
            raise BudgetError(
                f"sum/intersection closure of {len(certs)} cyclic flats "
                f"exceeds the budget of {DM_FLATS_LIMIT}"
            )
        self.q, self.n = m.q, m.n
        current = {z for z, _ in certs}
        current.add(Subspace.zero(m.q, m.n))
        current.add(Subspace.full(m.q, m.n))
        while True:
            new = set()
            members = list(current)
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    s = sum_subspaces(members[i], members[j])
                    if s not in current:
                        new.add(s)
                    t = intersect_subspaces(members[i], members[j])
                    if t not in current:
                        new.add(t)
            if not new:
                break
            current |= new
        self.spaces = tuple(sorted(current, key=Subspace.sort_key))
        self._members = frozenset(self.spaces)

    def __len__(self):
        return len(self.spaces)

    def __contains__(self, a: Subspace) -> bool:
        return a in self._members

    def pinchpoints(self) -> list[Subspace]:
        """Elements comparable to every member, sorted by inclusion.

        They always form a chain through the zero and full spaces.
        """
        out = [
            x
            for x in self.spaces
            if all(_comparable(x, y) for y in self.spaces)
        ]
        out.sort(key=lambda s: s.dim)
        for a, b in zip(out, out[1:]):
            if not b.contains(a):
                raise AssertionError("pinchpoints failed to form a chain")
        return out


def dm_lattice(m: QMatroid) -> DmLattice:
    return DmLattice(m)


def pinchpoints(d: DmLattice) -> list[Subspace]:
    return d.pinchpoints()


# ---------------------------------------------------------------------------
# Irreducibility and the primary factorization.

def irreducibility_verdict(m: QMatroid):
    """(is_irreducible, witness separator when reducible).

    Uniform q-matroids on n >= 2 are reducible with any atom as a
    witness; otherwise reducibility is the existence of a non-trivial
    pinchpoint.
    """
    if m.n == 0:
        return True, None
    if m.is_uniform():
        if m.n <= 1:
            return True, None
        witness = Subspace(m.q, m.n, [next(iter(Subspace.full(m.q, m.n).rows))])
        return False, witness
    pts = dm_lattice(m).pinchpoints()
    for x in pts:
        if 0 < x.dim < m.n:
            return False, x
    return True, None


def is_irreducible(m: QMatroid) -> bool:
    return irreducibility_verdict(m)[0]


@dataclass
class FactorizationReport:
    """Primary flag, interval-minor factors, and the basis that aligns
    the flag with coordinate blocks (rows listed bottom factor first)."""

    flag: list
    factors: list
    factor_kinds: list
    adapted_basis: list
    verified: bool

    def to_dict(self) -> dict:
        q, n = self.flag[-1].q, self.flag[-1].n
        return {
            "flag": [t.to_dict() for t in self.flag],
            "factors": [f.to_dict() for f in self.factors],
            "factor_kinds": list(self.factor_kinds),
            "adapted_basis": [unpack_vector(q, n, r) for r in self.adapted_basis],
            "verified": self.verified,
        }


def primary_factorization(m: QMatroid, validate: bool | None = None) -> FactorizationReport:
    """Split m along the pinchpoints of its sum/intersection closure.

    validate=None checks the reconstruction (free product of the factors
    equals m after the adapted change of basis) whenever the ambient
    lattice is small enough to sweep.
    """
    if m.n == 0:
        raise InputError("cannot factorize a q-matroid on a zero space")
    flag = dm_lattice(m).pinchpoints()
    factors = []
    kinds = []
    adapted: list = []
    for lo, hi in zip(flag, flag[1:]):
        factor, qm = m.minor_with_map(lo, hi)
        factors.append(factor)
        kinds.append("uniform" if factor.is_uniform() else "irreducible")
        adapted.extend(qm.kept)
    if validate is None:
        validate = lattice_size(m.q, m.n) <= 4096
    verified = False
    if validate and len(factors) >= 1:
        rebuilt = free_product_chain(factors)
        if not rank_tables_equal(rebuilt, transport(m, adapted)):
            raise AssertionError(
                "primary factors failed to reproduce the q-matroid"
            )
        verified = True
    return FactorizationReport(
        flag=flag,
        factors=factors,
        factor_kinds=kinds,
        adapted_basis=adapted,
        verified=verified,
    )


# ---------------------------------------------------------------------------
# The Vámos q-matroid.

def vamos_designated_spaces(q: int = 2) -> list[Subspace]:
    """The five designated 4-dim spaces, in pairs of coordinate planes."""
    blocks = [(0, 1), (2, 3), (4, 5), (6, 7)]
    picks = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
    out = []
    for i, j in picks:
        coords = list(blocks[i]) + list(blocks[j])
        if q == 2:
            rows = [1 << c for c in coords]
        else:
            rows = [tuple(1 if t == c else 0 for t in range(8)) for c in coords]
        out.append(Subspace(q, 8, rows))
    return out


def vamos_rank(q: int = 2):
    """The defining rank function: dimension up to 3, then 4, except
    that the five designated spaces stay at rank 3."""
    designated = set(vamos_designated_spaces(q))

    def rank_of(a: Subspace) -> int:
        if a.dim <= 3:
            return a.dim
        if a in designated:
            return 3
        return 4

    return rank_of


def vamos_qmatroid(q: int = 2) -> QMatroid:
    """Certificate-backed: cyclic flats are zero, the five designated
    spaces at rank 3, and the full space at rank 4."""
    pairs = [(Subspace.zero(q, 8), 0), (Subspace.full(q, 8), 4)]
    pairs += [(c, 3) for c in vamos_designated_spaces(q)]
    return QMatroid.from_cyclic_flats(q, 8, pairs, validate=True)


def _vamos_scan_chunk(args):
    q, k, pattern_lo, pattern_hi = args
    designated = set(vamos_designated_spaces(q))

    def rank_of(a):
        if a.dim <= 3:
            return a.dim
        return 3 if a in designated else 4

    found = []
    count = 0
    patterns = list(itertools.combinations(range(8), k))[pattern_lo:pattern_hi]
    for pattern in patterns:
        for rows in rref_rows_for_pattern(q, 8, pattern):
            s = Subspace._make(q, 8, rows)
            count += 1
            r = rank_of(s)
            cyclic = all(rank_of(b) == r for b in codim1_subspaces(s))
            if not cyclic:
                continue
            if all(rank_of(c) > r for c in covers(s)):
                found.append((s, r))
    return k, found, count


def vamos_cyclic_flats_scan(q: int = 2, workers: int = 1, progress: bool = False):
    """Find every cyclic flat of the Vámos q-matroid by sweeping the
    whole lattice of F_q^8 with the defining rank function.

    Returns the sorted (space, rank) list.  Independent of the
    certificate constructor; positives are re-verified against it, and
    per-dimension subspace counts are checked against the Gaussian
    binomials.
    """
    tasks = []
    for k in range(9):
        npat = len(list(itertools.combinations(range(8), k)))
        step = max(1, npat // max(workers * 4, 1))
        lo = 0
        while lo < npat:
            hi = min(npat, lo + step)
            tasks.append((q, k, lo, hi))
            lo = hi
    found: list = []
    per_dim = [0] * 9
    done = 0
    if workers > 1:
        import multiprocessing as mp

        with mp.Pool(workers) as pool:
            for k, part, count in pool.imap_unordered(_vamos_scan_chunk, tasks):
                found.extend(part)
                per_dim[k] += count
                done += 1
                if progress:
                    print(f"scan: {done}/{len(tasks)} chunks, {sum(per_dim)} subspaces", file=sys.stderr)
    else:
        for t in tasks:
            k, part, count = _vamos_scan_chunk(t)
            found.extend(part)
            per_dim[k] += count
            done += 1
            if progress and done % 8 == 0:
                print(f"scan: {done}/{len(tasks)} chunks, {sum(per_dim)} subspaces", file=sys.stderr)
    for k in range(9):
        expect = gaussian_binomial(8, k, q)
        if per_dim[k] != expect:
            raise AssertionError(
                f"scan visited {per_dim[k]} subspaces of dim {k}, expected {expect}"
            )
    oracle = vamos_qmatroid(q)
    for s, r in found:
        if oracle.rank(s) != r or not oracle.is_cyclic(s) or not oracle.is_flat(s):
            raise AssertionError(f"scan positive {s.coeff_rows()} failed re-verification")
    found.sort(key=lambda p: p[0].sort_key())
    return found

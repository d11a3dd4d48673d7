"""Rank functions on the subspace lattice of F_q^n.

A q-matroid is stored either as a full rank table (one integer per
subspace of the ground space) or as a certificate: the cyclic flats
together with their ranks, from which every other rank value follows by
the minimization

    r(A) = min{ f(Z) + dim(A + Z) - dim(Z) : Z certified }.

The certificate form is what keeps products of products tractable; the
table form is what brute-force cross-checks produce.  Everything here
treats the two backings as interchangeable oracles, and the test suite
holds them to that.

Axiom checkers for the three cryptomorphisms in use (rank axioms,
independence axioms, cyclic-flat axioms) return verdicts carrying the
violated axiom tag and a witness instead of raising.

A QMatroid value is immutable except for its internal rank memo, whose
writes are idempotent (same key always gets the same value), so
concurrent readers need no coordination.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BudgetError, InputError
from .subspace import (
    Subspace,
    atom_vectors,
    atoms,
    codim1_subspaces,
    enumerate_subspaces,
    intersect_subspaces,
    invert_matrix,
    lattice_size,
    map_by_matrix,
    orthogonal_complement,
    pack_vector,
    phi,
    quotient_coords,
    require_materialize_budget,
    sum_subspaces,
    vector_index,
)

# Exhaustive GL(n, q) isomorphism search is attempted only below this
# group order; larger groups yield an "unknown" verdict.
GL_SEARCH_LIMIT = 2 * 10**7


@dataclass
class AxiomVerdict:
    """Outcome of an axiom suite: ok, or a list of tagged witnesses."""

    ok: bool
    failures: list = field(default_factory=list)

    def failed_axioms(self) -> set[str]:
        return {f["axiom"] for f in self.failures}

    def message(self) -> str:
        if self.ok:
            return "all axioms hold"
        f = self.failures[0]
        return f"{f['axiom']} violated at {f['witness']}"


def _fail(failures: list, axiom: str, witness) -> None:
    failures.append({"axiom": axiom, "witness": witness})


class QMatroid:
    """A q-matroid on F_q^n, backed by a rank table or by cyclic flats."""

    __slots__ = ("q", "n", "E", "_table", "_certs", "_memo")

    def __init__(self, q: int, n: int, *, table=None, certs=None):
        if (table is None) == (certs is None):
            raise InputError("exactly one backing (table or certs) is required")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "E", Subspace.full(q, n))
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_certs", certs)
        object.__setattr__(self, "_memo", {})

    def __setattr__(self, name, value):
        raise AttributeError("QMatroid is immutable")

    def __repr__(self):
        backing = "table" if self._table is not None else f"{len(self._certs)} cyclic flats"
        return f"QMatroid(q={self.q}, n={self.n}, rank={self.rank(self.E)}, {backing})"

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_rank_table(cls, q: int, n: int, table, validate: bool = False) -> "QMatroid":
        if callable(table):
            require_materialize_budget(q, n)
            table = {s: int(table(s)) for s in enumerate_subspaces(q, n)}
        else:
            table = dict(table)
            expected = lattice_size(q, n)
            if len(table) != expected:
                raise InputError(
                    f"rank table has {len(table)} entries, expected {expected}"
                )
        if validate:
            verdict = check_rank_axioms(q, n, table)
            if not verdict.ok:
                raise InputError(f"not a q-matroid: {verdict.message()}")
        return cls(q, n, table=table)

    @classmethod
    def from_cyclic_flats(cls, q: int, n: int, flats, validate: bool = True) -> "QMatroid":
        pairs = []
        seen = set()
        for z, f in flats:
            if (z.q, z.n) != (q, n):
                raise InputError(f"cyclic flat in F_{z.q}^{z.n}, expected F_{q}^{n}")
            if z in seen:
                raise InputError(f"duplicate cyclic flat {z.coeff_rows()}")
            seen.add(z)
            pairs.append((z, int(f)))
        pairs.sort(key=lambda p: p[0].sort_key())
        if validate:
            verdict = check_cyclic_flat_axioms(q, n, pairs)
            if not verdict.ok:
                raise InputError(f"invalid cyclic flats: {verdict.message()}")
        return cls(q, n, certs=tuple(pairs))

    @classmethod
    def uniform(cls, q: int, n: int, k: int) -> "QMatroid":
        """U_{k,n}(q): rank(A) = min(dim A, k)."""
        if not 0 <= k <= n:
            raise InputError(f"uniform rank {k} out of range for ambient {n}")
        zero = Subspace.zero(q, n)
        full = Subspace.full(q, n)
        if n == 0:
            certs = ((zero, 0),)
        elif k == n:
            certs = ((zero, 0),)
        elif k == 0:
            certs = ((full, 0),)
        else:
            certs = ((zero, 0), (full, k))
        return cls(q, n, certs=certs)

    # -- the rank oracle --------------------------------------------------
    def rank(self, a: Subspace) -> int:
        if (a.q, a.n) != (self.q, self.n):
            raise InputError(f"subspace of F_{a.q}^{a.n} given to a q-matroid on F_{self.q}^{self.n}")
        if self._table is not None:
            return self._table[a]
        r = self._memo.get(a)
        if r is None:
            r = min(f + sum_subspaces(a, z).dim - z.dim for z, f in self._certs)
            self._memo[a] = r
        return r

    def rank_lack(self, a: Subspace) -> int:
        return self.rank(self.E) - self.rank(a)

    def nullity(self, a: Subspace) -> int:
        return a.dim - self.rank(a)

    def is_independent(self, a: Subspace) -> bool:
        """Certificate route when available: dim(I meet Z) <= f(Z) for all Z."""
        if self._certs is not None:
            return all(
                intersect_subspaces(a, z).dim <= f for z, f in self._certs
            )
        return self.rank(a) == a.dim

    def independent_spaces(self) -> set[Subspace]:
        require_materialize_budget(self.q, self.n)
        return {s for s in enumerate_subspaces(self.q, self.n) if self.is_independent(s)}

    # -- closure and the cyclic core --------------------------------------
    def closure(self, a: Subspace) -> Subspace:
        ra = self.rank(a)
        c = a
        for x in atom_vectors(self.E):
            if not c.contains_vector(x) and self.rank(a.extend(x)) == ra:
                c = c.extend(x)
        return c

    def is_flat(self, a: Subspace) -> bool:
        return self.closure(a) == a

    def is_cyclic(self, a: Subspace) -> bool:
        ra = self.rank(a)
        return all(self.rank(b) == ra for b in codim1_subspaces(a))

    def cyclic_core(self, a: Subspace) -> Subspace:
        """The largest cyclic subspace of a, by rank-dropping descent."""
        while True:
            ra = self.rank(a)
            drop = None
            for b in codim1_subspaces(a):
                if self.rank(b) < ra:
                    drop = b
                    break
            if drop is None:
                return a
            a = drop

    # -- loops and coloops -------------------------------------------------
    def loops(self) -> list[Subspace]:
        return [x for x in atoms(self.E) if self.rank(x) == 0]

    def has_loops(self) -> bool:
        return any(self.rank(x) == 0 for x in atoms(self.E))

    def coloops(self) -> list[Subspace]:
        """Codimension-1 subspaces of the ground space of rank below r(E)."""
        re = self.rank(self.E)
        return [h for h in codim1_subspaces(self.E) if self.rank(h) < re]

    def has_coloops(self) -> bool:
        re = self.rank(self.E)
        return any(self.rank(h) < re for h in codim1_subspaces(self.E))

    # -- cyclic flats -------------------------------------------------------
    def cyclic_flats(self) -> "CyclicFlatLattice":
        if self._certs is not None:
            return CyclicFlatLattice(self, self._certs)
        return CyclicFlatLattice(self, cyclic_flats_by_scan(self))

    def certificates(self):
        """Cyclic flats with ranks, computing them by scan if needed."""
        if self._certs is not None:
            return self._certs
        return cyclic_flats_by_scan(self)

    def as_cyclic_flat_backed(self) -> "QMatroid":
        if self._certs is not None:
            return self
        return QMatroid(self.q, self.n, certs=self.certificates())

    # -- uniformity ----------------------------------------------------------
    def uniform_parameters(self):
        """k when this is U_{k,n}, else None."""
        certs = self.certificates()
        zero = Subspace.zero(self.q, self.n)
        if self.n == 0:
            return 0
        if len(certs) == 1:
            z, f = certs[0]
            if z == zero and f == 0:
                return self.n
            if z == self.E and f == 0:
                return 0
            return None
        if len(certs) == 2:
            (z0, f0), (z1, f1) = certs
            if z0 == zero and f0 == 0 and z1 == self.E and 0 < f1 < self.n:
                return f1
        return None

    def is_uniform(self) -> bool:
        return self.uniform_parameters() is not None

    # -- duality ---------------------------------------------------------------
    def dual(self) -> "QMatroid":
        """Dual under the standard dot product.

        With a certificate backing this maps each cyclic flat to its
        orthogonal complement; with a table backing it evaluates
        r*(A) = dim(A) - r(E) + r(A-perp) on every subspace.
        """
        re = self.rank(self.E)
        if self._certs is not None:
            pairs = [
                (orthogonal_complement(z), (self.n - z.dim) - re + f)
                for z, f in self._certs
            ]
            return QMatroid.from_cyclic_flats(self.q, self.n, pairs, validate=False)
        table = {
            a: a.dim - re + self._table[orthogonal_complement(a)]
            for a in self._table
        }
        return QMatroid(self.q, self.n, table=table)

    # -- minors -------------------------------------------------------------
    def minor_with_map(self, sub: Subspace, sup: Subspace):
        """The minor on the interval [sub, sup], with its coordinate map.

        Ranks are r(X) - r(sub) for sub <= X <= sup, carried onto
        F_q^{dim sup - dim sub} by the deterministic quotient coordinates.
        """
        qm = quotient_coords(sub, sup)
        if sub.dim == 0 and sup.dim == self.n:
            return self, qm
        d = qm.dim
        require_materialize_budget(self.q, d)
        base = self.rank(sub)
        table = {
            t: self.rank(qm.preimage(t)) - base
            for t in enumerate_subspaces(self.q, d)
        }
        return QMatroid(self.q, d, table=table), qm

    def minor(self, sub: Subspace, sup: Subspace) -> "QMatroid":
        return self.minor_with_map(sub, sup)[0]

    def restriction(self, a: Subspace) -> "QMatroid":
        return self.minor(Subspace.zero(self.q, self.n), a)

    def contraction(self, a: Subspace) -> "QMatroid":
        return self.minor(a, self.E)

    # -- interchange ------------------------------------------------------------
    def to_dict(self) -> dict:
        certs = self.certificates()
        return {
            "q": self.q,
            "n": self.n,
            "cyclic_flats": [
                {"basis": z.coeff_rows(), "rank": f} for z, f in certs
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict, validate: bool = True) -> "QMatroid":
        try:
            q, n = int(doc["q"]), int(doc["n"])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed q-matroid document: {e}") from None
        if "cyclic_flats" in doc:
            flats = []
            for entry in doc["cyclic_flats"]:
                z = Subspace.from_dict({"q": q, "n": n, "basis": entry["basis"]})
                flats.append((z, int(entry["rank"])))
            return cls.from_cyclic_flats(q, n, flats, validate=validate)
        if "ranks" in doc:
            table = {}
            for entry in doc["ranks"]:
                s = Subspace.from_dict({"q": q, "n": n, "basis": entry["basis"]})
                table[s] = int(entry["r"])
            return cls.from_rank_table(q, n, table, validate=validate)
        raise InputError("q-matroid document needs 'cyclic_flats' or 'ranks'")


# ---------------------------------------------------------------------------
# Cyclic flats as a lattice.

class CyclicFlatLattice:
    """The cyclic flats of a q-matroid with their ranks.

    Join and meet are realized through the owning matroid's operators,
    as closure(sum) and cyclic_core(intersection); the inclusion order
    and Hasse diagram need no rank oracle at all.
    """

    def __init__(self, matroid: QMatroid, pairs):
        self.q = matroid.q
        self.n = matroid.n
        self._matroid = matroid
        self.pairs = tuple(sorted(pairs, key=lambda p: p[0].sort_key()))
        self._rank = {z: f for z, f in self.pairs}

    def __len__(self):
        return len(self.pairs)

    def spaces(self) -> list[Subspace]:
        return [z for z, _ in self.pairs]

    def rank_of(self, z: Subspace) -> int:
        try:
            return self._rank[z]
        except KeyError:
            raise InputError("not a cyclic flat of this q-matroid") from None

    def bottom(self) -> Subspace:
        for z, _ in self.pairs:
            if all(other.contains(z) for other, _ in self.pairs):
                return z
        raise InputError("cyclic-flat collection has no minimum element")

    def top(self) -> Subspace:
        for z, _ in reversed(self.pairs):
            if all(z.contains(other) for other, _ in self.pairs):
                return z
        raise InputError("cyclic-flat collection has no maximum element")

    def join(self, a: Subspace, b: Subspace) -> Subspace:
        j = self._matroid.closure(sum_subspaces(a, b))
        if j not in self._rank:
            raise InputError("join fell outside the cyclic-flat collection")
        return j

    def meet(self, a: Subspace, b: Subspace) -> Subspace:
        m = self._matroid.cyclic_core(intersect_subspaces(a, b))
        if m not in self._rank:
            raise InputError("meet fell outside the cyclic-flat collection")
        return m

    def hasse_edges(self) -> list[tuple[Subspace, Subspace]]:
        """Cover pairs (lower, upper) of the inclusion order on the flats."""
        spaces = self.spaces()
        edges = []
        for a in spaces:
            for b in spaces:
                if a == b or not b.contains(a):
                    continue
                if any(
                    c != a and c != b and b.contains(c) and c.contains(a)
                    for c in spaces
                ):
                    continue
                edges.append((a, b))
        return edges

    def shape_signature(self):
        """Isomorphism-invariant snapshot: labeled nodes plus labeled edges."""
        label = {z: (z.dim, f) for z, f in self.pairs}
        nodes = sorted(label.values())
        edges = sorted((label[a], label[b]) for a, b in self.hasse_edges())
        return tuple(nodes), tuple(edges)


def cyclic_flats_by_scan(m: QMatroid):
    """All cyclic flats of m, found by sweeping the ground lattice.

    One pass per dimension stratum: each subspace reports which of its
    hyperplanes share its rank, which simultaneously settles cyclicity
    for the subspace and flatness for the hyperplanes.
    """
    q, n = m.q, m.n
    out = []
    prev: dict[Subspace, int] = {}
    prev_cyclic: dict[Subspace, bool] = {}
    for d in range(n + 1):
        cur = {s: m.rank(s) for s in enumerate_subspaces(q, n, [d])}
        cur_cyclic = {}
        killed = set()
        for s, rs in cur.items():
            cyc = True
            for b in codim1_subspaces(s):
                if prev[b] == rs:
                    killed.add(b)
                else:
                    cyc = False
            cur_cyclic[s] = cyc
        for b, rb in prev.items():
            if b not in killed and prev_cyclic[b]:
                out.append((b, rb))
        prev, prev_cyclic = cur, cur_cyclic
    for s, rs in prev.items():
        if prev_cyclic[s]:
            out.append((s, rs))
    out.sort(key=lambda p: p[0].sort_key())
    return tuple(out)


def full_rank_table(m: QMatroid) -> dict[Subspace, int]:
    require_materialize_budget(m.q, m.n)
    return {s: m.rank(s) for s in enumerate_subspaces(m.q, m.n)}


def rank_tables_equal(m1: QMatroid, m2: QMatroid) -> bool:
    if (m1.q, m1.n) != (m2.q, m2.n):
        return False
    return all(
        m1.rank(s) == m2.rank(s) for s in enumerate_subspaces(m1.q, m1.n)
    )


def dual_by_definition(m: QMatroid) -> QMatroid:
    """Independent dual oracle: materializes dim(A) - r(E) + r(A-perp)."""
    re = m.rank(m.E)
    return QMatroid.from_rank_table(
        m.q, m.n, lambda a: a.dim - re + m.rank(orthogonal_complement(a))
    )


def phi_dual(m: QMatroid) -> QMatroid:
    """Dual taken along the reversal anti-isomorphism instead of perp.

    Same rank law with phi in place of perp; equals the perp-dual
    transported by coordinate reversal.
    """
    re = m.rank(m.E)
    if m._certs is not None:
        pairs = [(phi(z), (m.n - z.dim) - re + f) for z, f in m._certs]
        return QMatroid.from_cyclic_flats(m.q, m.n, pairs, validate=False)
    return QMatroid.from_rank_table(
        m.q, m.n, lambda a: a.dim - re + m.rank(phi(a))
    )


def transport(m: QMatroid, images) -> QMatroid:
    """The q-matroid A -> r(g(A)) for the invertible map g: e_i -> images[i].

    Images may be packed vectors or coefficient rows (the format
    is_isomorphic reports), so verdict images can be fed back in.
    """
    images = [v if isinstance(v, int) else pack_vector(m.q, m.n, v)
              for v in images]
    inv = invert_matrix(m.q, m.n, images)
    if m._certs is not None:
        pairs = [(map_by_matrix(z, inv), f) for z, f in m._certs]
        return QMatroid.from_cyclic_flats(m.q, m.n, pairs, validate=False)
    table = {map_by_matrix(a, inv): r for a, r in m._table.items()}
    return QMatroid(m.q, m.n, table=table)


# ---------------------------------------------------------------------------
# Rank axioms.

def _materialize_rank_table(q: int, n: int, rank_of) -> dict[Subspace, int]:
    if callable(rank_of):
        require_materialize_budget(q, n)
        return {s: int(rank_of(s)) for s in enumerate_subspaces(q, n)}
    return dict(rank_of)


def check_rank_axioms(q: int, n: int, rank_of, method: str = "auto") -> AxiomVerdict:
    """(R1) boundedness, (R2) monotonicity, (R3) submodularity.

    method "full" checks every unordered pair for (R2)/(R3); "local"
    checks covers only (monotone steps plus the cover-pair diamond),
    which is equivalent for functions on the subspace lattice and far
    cheaper on big tables.  "auto" switches on the table size.
    """
    table = _materialize_rank_table(q, n, rank_of)
    expected = lattice_size(q, n)
    if len(table) != expected:
        raise InputError(f"rank table has {len(table)} entries, expected {expected}")
    failures: list = []

    for s, r in table.items():
        if not 0 <= r <= s.dim:
            _fail(failures, "(R1)", {"space": s.to_dict(), "rank": r})
    if failures:
        return AxiomVerdict(False, failures)

    if method == "auto":
        method = "full" if len(table) <= 700 else "local"
    if method == "full":
        _check_rank_pairs_full(q, n, table, failures)
    elif method == "local":
        _check_rank_pairs_local(q, n, table, failures)
    else:
        raise InputError(f"unknown rank-axiom method {method!r}")
    return AxiomVerdict(not failures, failures)


def _check_rank_pairs_full(q, n, table, failures) -> None:
    if q**n > (1 << 13):
        raise BudgetError("full pairwise rank check needs element masks; use method='local'")
    items = [(s, r, s.element_mask()) for s, r in table.items()]
    rank_by_mask = {mask: r for _, r, mask in items}
    rank_by_pmask = {
        orthogonal_complement(s).element_mask(): r for s, r, _ in items
    }
    pmask = {mask: orthogonal_complement(s).element_mask() for s, _, mask in items}
    for i in range(len(items)):
        si, ri, mi = items[i]
        pi = pmask[mi]
        for j in range(i + 1, len(items)):
            sj, rj, mj = items[j]
            inter = mi & mj
            if inter == mi:
                if ri > rj:
                    _fail(failures, "(R2)", {"sub": si.to_dict(), "sup": sj.to_dict()})
                continue
            if inter == mj:
                if rj > ri:
                    _fail(failures, "(R2)", {"sub": sj.to_dict(), "sup": si.to_dict()})
                continue
            r_sum = rank_by_pmask[pi & pmask[mj]]
            if ri + rj < r_sum + rank_by_mask[inter]:
                _fail(failures, "(R3)", {"a": si.to_dict(), "b": sj.to_dict()})


def _check_rank_pairs_local(q, n, table, failures) -> None:
    # Monotone cover steps and the cover-pair diamond inequality; callers
    # relying on this route for large tables get the same verdict as the
    # full pairwise sweep (cross-validated in the tests on small cases).
    for s, rs in table.items():
        if s.dim == 0:
            continue
        hypers = list(codim1_subspaces(s))
        hr = [table[b] for b in hypers]
        for b, rb in zip(hypers, hr):
            if rb > rs:
                _fail(failures, "(R2)", {"sub": b.to_dict(), "sup": s.to_dict()})
            if rs > rb + 1:
                _fail(failures, "(R3)", {"a": b.to_dict(), "b": s.to_dict()})
        if failures:
            return
    # Diamonds: for covers B, C of A inside B+C, require
    # r(B) + r(C) >= r(B+C) + r(A).
    for s, rs in table.items():
        if s.dim < 2:
            continue
        hypers = list(codim1_subspaces(s))
        hr = [table[b] for b in hypers]
        for i in range(len(hypers)):
            for j in range(i + 1, len(hypers)):
                a = intersect_subspaces(hypers[i], hypers[j])
                if hr[i] + hr[j] < rs + table[a]:
                    _fail(
                        failures,
                        "(R3)",
                        {"a": hypers[i].to_dict(), "b": hypers[j].to_dict()},
                    )
                    return


# ---------------------------------------------------------------------------
# Independence axioms.

def check_independence_axioms(q: int, n: int, indep) -> AxiomVerdict:
    """(I1) nonempty at zero, (I2) closed downward, (I3) augmentation,
    (I4'') the max-extension axiom, quantified exactly as stated: for
    every A, every I maximal in A, every atom x, some J maximal in A+x
    satisfies J <= I+x.
    """
    require_materialize_budget(q, n)
    iset = set(indep)
    for s in iset:
        if (s.q, s.n) != (q, n):
            raise InputError("independent space in the wrong ambient")
    failures: list = []
    zero = Subspace.zero(q, n)
    full = Subspace.full(q, n)

    if zero not in iset:
        _fail(failures, "(I1)", {"space": zero.to_dict()})
        return AxiomVerdict(False, failures)

    for s in iset:
        for b in codim1_subspaces(s):
            if b not in iset:
                _fail(failures, "(I2)", {"member": s.to_dict(), "missing": b.to_dict()})
                return AxiomVerdict(False, failures)

    atom_list = list(atom_vectors(full))
    atom_pos = {v: i for i, v in enumerate(atom_list)}

    # (I3) via extension masks over vector indices.
    mask = {s: s.element_mask() for s in iset}
    ext = {}
    for s in iset:
        bits = 0
        for v in atom_list:
            if not s.contains_vector(v) and s.extend(v) in iset:
                bits |= 1 << vector_index(q, n, v)
        ext[s] = bits
    by_dim: dict[int, list[Subspace]] = {}
    for s in iset:
        by_dim.setdefault(s.dim, []).append(s)
    dims = sorted(by_dim)
    for d1 in dims:
        for d2 in dims:
            if d1 >= d2:
                continue
            for i_small in by_dim[d1]:
                e = ext[i_small]
                for j_big in by_dim[d2]:
                    if not (e & mask[j_big]):
                        _fail(
                            failures,
                            "(I3)",
                            {"i": i_small.to_dict(), "j": j_big.to_dict()},
                        )
                        return AxiomVerdict(False, failures)

    # (I4''): mmax(S) = top dimension of a member inside S, by dynamic
    # programming over hyperplanes (no axiom assumed).  up[S] marks the
    # atoms whose addition raises mmax; the axiom reduces to the mask
    # inclusion up[A] <= up[I] for each I maximal in A.
    all_subs = list(enumerate_subspaces(q, n))
    mmax: dict[Subspace, int] = {}
    for s in all_subs:
        if s in iset:
            mmax[s] = s.dim
        elif s.dim == 0:
            mmax[s] = 0
        else:
            mmax[s] = max(mmax[b] for b in codim1_subspaces(s))
    up = {}
    smask = {s: s.element_mask() for s in all_subs}
    for s in all_subs:
        bits = 0
        base = mmax[s]
        for i, v in enumerate(atom_list):
            if not s.contains_vector(v) and mmax[s.extend(v)] > base:
                bits |= 1 << i
        up[s] = bits
    for a in all_subs:
        target = mmax[a]
        need = up[a]
        ma = smask[a]
        for i_max in by_dim.get(target, ()):
            if mask[i_max] & ma != mask[i_max]:
                continue
            bad = need & ~up[i_max]
            if bad:
                x = atom_list[(bad & -bad).bit_length() - 1]
                _fail(
                    failures,
                    "(I4'')",
                    {
                        "a": a.to_dict(),
                        "i": i_max.to_dict(),
                        "x": Subspace(q, n, [x]).to_dict(),
                    },
                )
                return AxiomVerdict(False, failures)
    return AxiomVerdict(True, failures)


# ---------------------------------------------------------------------------
# Cyclic flat axioms.

def check_cyclic_flat_axioms(q: int, n: int, pairs) -> AxiomVerdict:
    """(Z0) lattice under inclusion, (Z1) bottom has value zero,
    (Z2) strict sandwich on nested pairs, (Z3) strengthened submodularity."""
    pairs = sorted(((z, int(f)) for z, f in pairs), key=lambda p: p[0].sort_key())
    failures: list = []
    if not pairs:
        _fail(failures, "(Z1)", {"detail": "empty collection has no minimum"})
        return AxiomVerdict(False, failures)
    spaces = [z for z, _ in pairs]
    fval = [f for _, f in pairs]
    k = len(spaces)
    seen = set(spaces)
    if len(seen) != k:
        raise InputError("duplicate spaces in cyclic-flat collection")

    above = [0] * k  # above[i]: bitmask of j with spaces[i] <= spaces[j]
    for i in range(k):
        for j in range(k):
            if spaces[j].contains(spaces[i]):
                above[i] |= 1 << j

    allmask = (1 << k) - 1
    bottom = next((i for i in range(k) if above[i] == allmask), None)
    if bottom is None:
        _fail(failures, "(Z0)", {"detail": "no minimum element"})
    elif fval[bottom] != 0:
        _fail(
            failures,
            "(Z1)",
            {"space": spaces[bottom].to_dict(), "rank": fval[bottom]},
        )

    # (Z2)
    for i in range(k):
        for j in range(k):
            if i == j or not (above[j] >> i) & 1:
                continue
            # spaces[j] < spaces[i]
            gap_f = fval[i] - fval[j]
            gap_d = spaces[i].dim - spaces[j].dim
            if not 0 < gap_f < gap_d:
                _fail(
                    failures,
                    "(Z2)",
                    {"g": spaces[j].to_dict(), "f": spaces[i].to_dict(),
                     "rank_gap": gap_f, "dim_gap": gap_d},
                )

    # (Z0) pairwise bounds, reused for (Z3).
    def least_of(mask_of_candidates: int):
        while mask_of_candidates:
            i = (mask_of_candidates & -mask_of_candidates).bit_length() - 1
            if above[i] & mask_of_candidates == mask_of_candidates:
                return i
            mask_of_candidates &= mask_of_candidates - 1
        return None

    def greatest_of(mask_of_candidates: int):
        m = mask_of_candidates
        while m:
            i = (m & -m).bit_length() - 1
            ok = True
            mm = mask_of_candidates
            while mm:
                j = (mm & -mm).bit_length() - 1
                if not (above[j] >> i) & 1:
                    ok = False
                    break
                mm &= mm - 1
            if ok:
                return i
            m &= m - 1
        return None

    for i in range(k):
        for j in range(i + 1, k):
            ups = above[i] & above[j]
            downs = 0
            for t in range(k):
                if (above[t] >> i) & 1 and (above[t] >> j) & 1:
                    downs |= 1 << t
            vee = least_of(ups) if ups else None
            wedge = greatest_of(downs) if downs else None
            if vee is None or wedge is None:
                _fail(
                    failures,
                    "(Z0)",
                    {"a": spaces[i].to_dict(), "b": spaces[j].to_dict(),
                     "detail": "missing join" if vee is None else "missing meet"},
                )
                continue
            inter_dim = intersect_subspaces(spaces[i], spaces[j]).dim
            correction = inter_dim - spaces[wedge].dim
            if fval[i] + fval[j] < fval[vee] + fval[wedge] + correction:
                _fail(
                    failures,
                    "(Z3)",
                    {"f": spaces[i].to_dict(), "g": spaces[j].to_dict(),
                     "join": spaces[vee].to_dict(), "meet": spaces[wedge].to_dict()},
                )
    return AxiomVerdict(not failures, failures)


# ---------------------------------------------------------------------------
# Isomorphism testing.

@dataclass
class IsoVerdict:
    kind: str  # "yes" | "no" | "unknown"
    images: list | None = None  # images of e_1..e_n as coefficient rows
    reason: str | None = None

    def __bool__(self):
        return self.kind == "yes"


def _gl_order(q: int, n: int) -> int:
    total = 1
    for i in range(n):
        total *= q**n - q**i
    return total


def is_isomorphic(m1: QMatroid, m2: QMatroid) -> IsoVerdict:
    """Rank-preserving GL(n,q) equivalence, with invariant fast paths.

    "no" verdicts name the separating invariant; exhaustive search only
    runs when |GL(n, q)| is small enough, otherwise "unknown".
    """
    if (m1.q, m1.n) != (m2.q, m2.n):
        raise InputError("isomorphism requires matching ground spaces")
    q, n = m1.q, m1.n
    if m1.rank(m1.E) != m2.rank(m2.E):
        return IsoVerdict("no", reason="total rank differs")
    z1, z2 = m1.cyclic_flats(), m2.cyclic_flats()
    if sorted((z.dim, f) for z, f in z1.pairs) != sorted((z.dim, f) for z, f in z2.pairs):
        return IsoVerdict("no", reason="cyclic-flat (dim, rank) multisets differ")
    if z1.shape_signature() != z2.shape_signature():
        return IsoVerdict("no", reason="cyclic-flat lattice shapes differ")
    if _gl_order(q, n) > GL_SEARCH_LIMIT:
        return IsoVerdict("unknown", reason="GL search budget exceeded")

    require_materialize_budget(q, n)
    table1 = full_rank_table(m1)
    table2 = full_rank_table(m2)
    # Group the subspaces by the highest coordinate their canonical rows
    # touch, so a partial basis image can be checked incrementally.
    strata: list[list[Subspace]] = [[] for _ in range(n + 1)]
    for s in table1:
        if s.dim == 0:
            continue
        if q == 2:
            top = max(r.bit_length() for r in s.rows)
        else:
            top = max(len(r) - next(i for i, x in enumerate(reversed(r)) if x) for r in s.rows)
        strata[top].append(s)

    full = Subspace.full(q, n)
    if q == 2:
        vecs = [v for v in full.elements() if v]
    else:
        vecs = [v for v in full.elements() if any(v)]

    def dfs(chosen: list, span: Subspace):
        k = len(chosen)
        if k == n:
            return list(chosen)
        for v in vecs:
            if span.contains_vector(v):
                continue
            chosen.append(v)
            ok = True
            for s in strata[k + 1]:
                if table2[map_by_matrix(s, chosen + _pad(q, n, k + 1))] != table1[s]:
                    ok = False
                    break
            if ok:
                got = dfs(chosen, span.extend(v))
                if got is not None:
                    return got
            chosen.pop()
        return None

    def _pad(q, n, k):
        # unused coordinates of a partial map; never reached by strata[<=k]
        if q == 2:
            return [0] * (n - k)
        return [(0,) * n] * (n - k)

    got = dfs([], Subspace.zero(q, n))
    if got is None:
        return IsoVerdict("no", reason="exhaustive GL search found no rank-preserving map")
    images = [Subspace(q, n, [v]).coeff_rows()[0] for v in got]
    return IsoVerdict("yes", images=images)


# ---------------------------------------------------------------------------
# Exhaustive enumeration at tiny scale.

def enumerate_qmatroids(q: int, n: int):
    """All q-matroids on F_q^n up to isomorphism (q = 2, n <= 3).

    Depth-first search over rank assignments in dimension order, pruned
    by the local axiom bounds, fully verified at each leaf, and
    deduplicated by the GL search.
    """
    if q != 2 or n > 3:
        raise BudgetError("exhaustive q-matroid enumeration is limited to q=2, n<=3")
    subs = sorted(enumerate_subspaces(q, n), key=Subspace.sort_key)
    reps: list[QMatroid] = []
    assignment: dict[Subspace, int] = {}

    def candidates(s: Subspace):
        if s.dim == 0:
            return [0]
        hypers = [assignment[b] for b in codim1_subspaces(s)]
        lo = max(hypers)
        hi = min(s.dim, min(hypers) + 1)
        # submodularity across hyperplane pairs
        hl = list(codim1_subspaces(s))
        for i in range(len(hl)):
            for j in range(i + 1, len(hl)):
                cap = (
                    assignment[hl[i]]
                    + assignment[hl[j]]
                    - assignment[intersect_subspaces(hl[i], hl[j])]
                )
                if cap < hi:
                    hi = cap
        return range(lo, hi + 1)

    def walk(i: int):
        if i == len(subs):
            table = dict(assignment)
            if check_rank_axioms(q, n, table, method="full").ok:
                m = QMatroid(q, n, table=table)
                if not any(is_isomorphic(m, r).kind == "yes" for r in reps):
                    reps.append(m)
                    yield m
            return
        s = subs[i]
        for r in candidates(s):
            assignment[s] = r
            yield from walk(i + 1)
        assignment.pop(s, None)

    yield from walk(0)

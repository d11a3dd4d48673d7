"""Exact arithmetic over GF(q) for small primes q, and over GF(q^m).

Field elements are plain integers.  In the prime field they are the
residues 0..q-1; in an extension field GF(q^m) an element is the base-q
positional encoding of its coefficient vector, low degree first, so for
q = 2 the encoding coincides with the usual bit-packing of a binary
polynomial.  Field handles are immutable and every operation is a pure
function, so handles and elements can be shared freely across threads
and worker processes.

Only desk-scale fields are supported: q must be a prime at most 13 and
q^m may not exceed 2^20.  Nothing here aims at sub-cubic linear algebra
or sparse representations; matrices are dense tuples of tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError

MAX_BASE_PRIME = 13
MAX_EXT_ORDER = 1 << 20

# Log/antilog tables are built eagerly for primitive moduli up to this
# order; beyond it multiplication falls back to polynomial arithmetic.
_LOG_TABLE_LIMIT = 1 << 16


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _check_base_prime(q: int) -> None:
    if not is_prime(q) or q > MAX_BASE_PRIME:
        raise InputError(f"q must be a prime <= {MAX_BASE_PRIME}, got {q}")


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Polynomials over GF(q): coefficient tuples, low degree first, trimmed.

def _trim(c: Sequence[int]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def poly_deg(a: tuple[int, ...]) -> int:
    return len(a) - 1


def poly_add(a: tuple[int, ...], b: tuple[int, ...], q: int) -> tuple[int, ...]:
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    return _trim([(x + y) % q for x, y in zip(a, b)])


def poly_sub(a: tuple[int, ...], b: tuple[int, ...], q: int) -> tuple[int, ...]:
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    return _trim([(x - y) % q for x, y in zip(a, b)])


def poly_mul(a: tuple[int, ...], b: tuple[int, ...], q: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return _trim(out)


def poly_divmod(a: tuple[int, ...], b: tuple[int, ...], q: int):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], q - 2, q)
    db = len(b) - 1
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        f = (c * inv_lead) % q
        quo[i - db] = f
        for j, y in enumerate(b):
            rem[i - db + j] = (rem[i - db + j] - f * y) % q
    return _trim(quo), _trim(rem)


def poly_mod(a: tuple[int, ...], b: tuple[int, ...], q: int) -> tuple[int, ...]:
    return poly_divmod(a, b, q)[1]


def poly_gcd(a: tuple[int, ...], b: tuple[int, ...], q: int) -> tuple[int, ...]:
    while b:
        a, b = b, poly_mod(a, b, q)
    if a:
        inv = pow(a[-1], q - 2, q)
        a = _trim([(c * inv) % q for c in a])
    return a


def poly_pow_mod(a, e: int, mod, q: int) -> tuple[int, ...]:
    result = (1,)
    a = poly_mod(a, mod, q)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, a, q), mod, q)
        a = poly_mod(poly_mul(a, a, q), mod, q)
        e >>= 1
    return result


def poly_to_str(c: tuple[int, ...]) -> str:
    if not c:
        return "0"
    terms = []
    for i in range(len(c) - 1, -1, -1):
        k = c[i]
        if k == 0:
            continue
        if i == 0:
            terms.append(str(k))
        else:
            coef = "" if k == 1 else str(k) + "*"
            terms.append(f"{coef}x" if i == 1 else f"{coef}x^{i}")
    return "+".join(terms)


def is_irreducible(modulus: Sequence[int], q: int) -> bool:
    """Rabin's test for a monic polynomial over GF(q)."""
    f = _trim(modulus)
    m = poly_deg(f)
    if m < 1 or f[-1] != 1:
        return False
    x = (0, 1)
    if poly_pow_mod(x, q**m, f, q) != poly_mod(x, f, q):
        return False
    for p in prime_factors(m):
        h = poly_sub(poly_pow_mod(x, q ** (m // p), f, q), x, q)
        h = poly_mod(h, f, q)
        if poly_deg(poly_gcd(h, f, q)) != 0:
            return False
    return True


def smallest_factor(modulus: Sequence[int], q: int) -> tuple[int, ...]:
    """A lowest-degree monic factor of a reducible polynomial, for error text."""
    f = _trim(modulus)
    m = poly_deg(f)
    for d in range(1, m // 2 + 1):
        for tail in range(q**d):
            coeffs = []
            t = tail
            for _ in range(d):
                coeffs.append(t % q)
                t //= q
            cand = tuple(coeffs) + (1,)
            if not poly_mod(f, cand, q):
                return cand
    return f


def find_irreducible(q: int, m: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree m over GF(q)."""
    _check_base_prime(q)
    for tail in range(q**m):
        coeffs = []
        t = tail
        for _ in range(m):
            coeffs.append(t % q)
            t //= q
        cand = tuple(coeffs) + (1,)
        if is_irreducible(cand, q):
            return cand
    raise InputError(f"no irreducible polynomial of degree {m} over GF({q})")


# ---------------------------------------------------------------------------
# Field handles.

@dataclass(frozen=True)
class BaseField:
    """The prime field GF(q), elements 0..q-1."""

    q: int

    def __post_init__(self):
        _check_base_prime(self.q)

    @property
    def order(self) -> int:
        return self.q

    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.q - 2, self.q)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.q)
        return pow(a, e, self.q)

    def parse_element(self, s) -> int:
        try:
            v = int(s)
        except (TypeError, ValueError):
            raise InputError(f"cannot parse {s!r} as a GF({self.q}) element") from None
        if not 0 <= v < self.q:
            raise InputError(f"element {v} out of range for GF({self.q})")
        return v

    def format_element(self, a: int) -> str:
        return str(a)


class ExtField:
    """The extension field GF(q^m) defined by a monic irreducible modulus.

    The modulus is a coefficient tuple, low degree first, of length m+1.
    Elements are ints in [0, q^m); ``coeffs``/``encode`` convert between
    an element and its coefficient vector.  When the residue class of x
    generates the multiplicative group, the modulus is recorded as
    primitive and elements format as "a^k".
    """

    def __init__(self, q: int, m: int, modulus: Sequence[int]):
        _check_base_prime(q)
        if m < 1:
            raise InputError(f"extension degree must be >= 1, got {m}")
        order = q**m
        if order > MAX_EXT_ORDER:
            raise InputError(f"q^m = {order} exceeds the supported bound {MAX_EXT_ORDER}")
        mod = _trim(modulus)
        if poly_deg(mod) != m or mod[-1] != 1:
            raise InputError(f"modulus must be monic of degree {m}, got {poly_to_str(mod)}")
        if not is_irreducible(mod, q):
            factor = smallest_factor(mod, q)
            raise InputError(
                f"modulus {poly_to_str(mod)} is reducible over GF({q}); "
                f"it is divisible by {poly_to_str(factor)}"
            )
        self.q = q
        self.m = m
        self.modulus = mod
        self.order = order
        self._mod_int = sum(c << i for i, c in enumerate(mod)) if q == 2 else None
        self.generator = self.encode((0, 1)) if m > 1 else (-mod[0]) % q
        self._exp = self._log = None
        self.is_primitive = self._check_primitive()
        if self.is_primitive and order <= _LOG_TABLE_LIMIT:
            self._build_tables()

    # -- identity & hashing on the defining data
    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and (self.q, self.m, self.modulus) == (other.q, other.m, other.modulus)
        )

    def __hash__(self):
        return hash((self.q, self.m, self.modulus))

    def __repr__(self):
        return f"ExtField(q={self.q}, m={self.m}, modulus={poly_to_str(self.modulus)})"

    zero = 0
    one = 1

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            out.append(a % self.q)
            a //= self.q
        return tuple(out)

    def encode(self, coeffs: Iterable[int]) -> int:
        a = 0
        for i, c in enumerate(coeffs):
            a += (c % self.q) * self.q**i
        return a

    def add(self, a: int, b: int) -> int:
        if self.q == 2:
            return a ^ b
        return self.encode(x + y for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def sub(self, a: int, b: int) -> int:
        if self.q == 2:
            return a ^ b
        return self.encode(x - y for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def neg(self, a: int) -> int:
        if self.q == 2:
            return a
        return self.encode(-x for x in self.coeffs(a))

    def smul(self, c: int, a: int) -> int:
        """Scalar multiple by c in the prime subfield."""
        c %= self.q
        if self.q == 2:
            return a if c else 0
        return self.encode(c * x for x in self.coeffs(a))

    def mul(self, a: int, b: int) -> int:
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        if self.q == 2:
            mod, m, acc = self._mod_int, self.m, 0
            while b:
                if b & 1:
                    acc ^= a
                b >>= 1
                a <<= 1
                if (a >> m) & 1:
                    a ^= mod
            return acc
        prod = poly_mod(poly_mul(self.coeffs(a), self.coeffs(b), self.q), self.modulus, self.q)
        return self.encode(prod + (0,) * (self.m - len(prod)))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._exp is not None:
            return self._exp[(-self._log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc = 1
        while e:
            if e & 1:
                acc = self.mul(acc, a)
            a = self.mul(a, a)
            e >>= 1
        return acc

    def _check_primitive(self) -> bool:
        g = self.generator
        if g == 0:
            # happens for m = 1 with modulus x, whose residue class is 0
            return False
        n = self.order - 1
        return all(self.pow(g, n // p) != 1 for p in prime_factors(n))

    def _build_tables(self):
        n = self.order - 1
        exp = [1] * n
        for i in range(1, n):
            exp[i] = self.mul(exp[i - 1], self.generator)
        log = [0] * self.order
        for i, v in enumerate(exp):
            log[v] = i
        self._exp, self._log = exp, log

    def parse_element(self, s) -> int:
        """Accept an int, a decimal string, or "0"/"1"/"a"/"a^k"."""
        if isinstance(s, int):
            v = s
        else:
            t = str(s).strip()
            if t == "a":
                return self.generator
            if t.startswith("a^"):
                try:
                    k = int(t[2:])
                except ValueError:
                    raise InputError(f"cannot parse exponent in {s!r}") from None
                return self.pow(self.generator, k)
            try:
                v = int(t)
            except ValueError:
                raise InputError(f"cannot parse {s!r} as a field element") from None
        if not 0 <= v < self.order:
            raise InputError(f"element {v} out of range for a field of order {self.order}")
        return v

    def format_element(self, a: int) -> str:
        if a == 0:
            return "0"
        if a == 1:
            return "1"
        if self._log is not None:
            return f"a^{self._log[a]}"
        return str(a)


_DEFAULT_MODULI = {
    # Pinned defaults for the two extension fields used throughout the
    # worked examples; everything else is searched on demand.
    (2, 4): (1, 1, 0, 0, 1),          # x^4 + x + 1
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),  # x^7 + x + 1
}


def ext_field_new(q: int, m: int, modulus: Sequence[int] | None = None) -> ExtField:
    """Build GF(q^m), validating primality, degree and irreducibility."""
    if modulus is None:
        modulus = _DEFAULT_MODULI.get((q, m)) or find_irreducible(q, m)
    return ExtField(q, m, tuple(int(c) for c in modulus))


# ---------------------------------------------------------------------------
# Dense matrices over either kind of field.

class Matrix:
    """An immutable dense matrix with entries encoded as field ints."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise InputError("ragged matrix rows")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", len(rows[0]) if rows else 0)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.rows))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.rows!r})"

    def transpose(self) -> "Matrix":
        return Matrix(self.field, zip(*self.rows)) if self.rows else self

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise InputError("matrix fields differ")
        if self.ncols != other.nrows:
            raise InputError("matrix shapes incompatible")
        F = self.field
        cols = other.transpose().rows
        out = [
            [_dot(F, r, c) for c in cols]
            for r in self.rows
        ]
        return Matrix(F, out)

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        return cls(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)])


def _dot(F, u, v) -> int:
    acc = F.zero
    for a, b in zip(u, v):
        acc = F.add(acc, F.mul(a, b))
    return acc


def rref(M: Matrix):
    """Reduced row echelon form.

    Returns (R, rank, pivots) where R is row-equivalent to M with the
    same shape (zero rows at the bottom) and pivots lists the pivot
    column of each nonzero row.
    """
    F = M.field
    rows = [list(r) for r in M.rows]
    pivots: list[int] = []
    r = 0
    for c in range(M.ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != F.zero), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != F.zero:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return Matrix(F, rows), r, tuple(pivots)


def matrix_rank(M: Matrix) -> int:
    return rref(M)[1]


def kernel(M: Matrix) -> Matrix:
    """A canonical (RREF) basis of the right null space, one row per vector."""
    F = M.field
    R, rank, pivots = rref(M)
    free = [c for c in range(M.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [F.zero] * M.ncols
        v[f] = F.one
        for i, p in enumerate(pivots):
            v[p] = F.neg(R.rows[i][f])
        basis.append(v)
    K = Matrix(F, basis)
    return rref(K)[0] if basis else K

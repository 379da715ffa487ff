"""Exact arithmetic for finitely generated abelian groups and integer matrices.

Groups are kept in invariant-factor form Z^r (+) Z/m1 (+) ... (+) Z/mt with
m1 | m2 | ... | mt, so two groups are equal exactly when their data agree.
All matrix work uses arbitrary-precision integers; Smith normal form is the
engine behind subquotient computation and exact linear solving.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd


class GroupParseError(ValueError):
    """Raised for a malformed group spec string."""


class InfiniteGroupError(ValueError):
    """Raised when an operation needs a finite group but got one with free rank."""


def _factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division.  Orders here are desk scale."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _invariant_factors(orders) -> tuple[int, ...]:
    """Normalize a list of cyclic orders (each >= 2) to a divisibility chain."""
    primes: dict[int, list[int]] = {}
    for m in orders:
        for p, e in _factorize(m).items():
            primes.setdefault(p, []).append(e)
    for exps in primes.values():
        exps.sort(reverse=True)
    depth = max((len(v) for v in primes.values()), default=0)
    factors = []
    for i in range(depth):
        f = 1
        for p, exps in primes.items():
            if i < len(exps):
                f *= p ** exps[i]
        factors.append(f)
    return tuple(reversed(factors))  # ascending: m1 | m2 | ... | mt


@dataclass(frozen=True)
class FinAbGroup:
    """A finitely generated abelian group Z^r (+) Z/m1 (+) ... (+) Z/mt.

    torsion_orders is always a divisibility chain with entries >= 2; use
    from_orders to canonicalize arbitrary cyclic decompositions.
    """

    free_rank: int
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free_rank must be nonnegative")
        for a, b in zip(self.torsion_orders, self.torsion_orders[1:]):
            if b % a != 0:
                raise ValueError(f"torsion orders not a divisibility chain: {a} before {b}")
        if any(m < 2 for m in self.torsion_orders):
            raise ValueError("torsion orders must be >= 2")

    @classmethod
    def from_orders(cls, free_rank: int, orders) -> "FinAbGroup":
        """Build the canonical form from any list of cyclic orders (1s dropped)."""
        real = [m for m in orders if m != 1]
        if any(m < 1 for m in real):
            raise ValueError("cyclic orders must be positive")
        return cls(free_rank, _invariant_factors(real))

    @property
    def n_coords(self) -> int:
        return self.free_rank + len(self.torsion_orders)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion_orders

    def order(self) -> int:
        if not self.is_finite:
            raise InfiniteGroupError("group has free rank, infinite order")
        out = 1
        for m in self.torsion_orders:
            out *= m
        return out

    def coord_moduli(self) -> tuple[int, ...]:
        """Per-coordinate modulus; 0 encodes a free Z coordinate."""
        return (0,) * self.free_rank + self.torsion_orders

    def element(self, coords) -> "GroupElement":
        return GroupElement(self, tuple(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.n_coords)

    def add(self, a: "GroupElement", b: "GroupElement") -> "GroupElement":
        self._check_member(a)
        self._check_member(b)
        return GroupElement(self, tuple(x + y for x, y in zip(a.coords, b.coords)))

    def neg(self, a: "GroupElement") -> "GroupElement":
        self._check_member(a)
        return GroupElement(self, tuple(-x for x in a.coords))

    def sub(self, a: "GroupElement", b: "GroupElement") -> "GroupElement":
        return self.add(a, self.neg(b))

    def scale(self, k: int, a: "GroupElement") -> "GroupElement":
        self._check_member(a)
        return GroupElement(self, tuple(k * x for x in a.coords))

    def eq(self, a: "GroupElement", b: "GroupElement") -> bool:
        self._check_member(a)
        self._check_member(b)
        return a == b

    def enumerate_elements(self):
        """All elements, each exactly once, in lexicographic coordinate order."""
        if not self.is_finite:
            raise InfiniteGroupError("cannot enumerate an infinite group")
        for coords in itertools.product(*(range(m) for m in self.torsion_orders)):
            yield GroupElement(self, coords)

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup.from_orders(
            self.free_rank + other.free_rank,
            list(self.torsion_orders) + list(other.torsion_orders),
        )

    def _check_member(self, a: "GroupElement"):
        if a.group is not self and a.group != self:
            raise ValueError("element belongs to a different group")

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{m}" for m in self.torsion_orders]
        return "+".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElement:
    """An element of a FinAbGroup, torsion coordinates reduced mod their order."""

    group: FinAbGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.n_coords:
            raise ValueError("coordinate count does not match the group")
        reduced = tuple(
            c if m == 0 else c % m for c, m in zip(self.coords, self.group.coord_moduli())
        )
        object.__setattr__(self, "coords", reduced)

    def __add__(self, other):
        return self.group.add(self, other)

    def __neg__(self):
        return self.group.neg(self)

    def __sub__(self, other):
        return self.group.sub(self, other)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


def parse_group(spec: str) -> FinAbGroup:
    """Parse a group spec: "+"-separated terms "Z" or "Z/m" with m >= 2.

    Whitespace is ignored.  The result is canonicalized, so e.g.
    "Z/2+Z/3" parses to the group with torsion chain (6,).
    """
    text = "".join(spec.split())
    if not text:
        raise GroupParseError("empty group spec")
    free = 0
    orders = []
    for token in text.split("+"):
        if token == "Z":
            free += 1
        elif token.startswith("Z/"):
            body = token[2:]
            if not body.isdigit():
                raise GroupParseError(f"malformed term {token!r}")
            m = int(body)
            if m < 2:
                raise GroupParseError(f"torsion order must be >= 2, got {m}")
            orders.append(m)
        else:
            raise GroupParseError(f"malformed term {token!r}")
    return FinAbGroup.from_orders(free, orders)


def format_group(g: FinAbGroup) -> str:
    """Canonical spec string; parse_group(format_group(g)) == g for nontrivial g."""
    parts = ["Z"] * g.free_rank + [f"Z/{m}" for m in g.torsion_orders]
    return "+".join(parts) if parts else "0"


@dataclass(frozen=True)
class IntegerMatrix:
    """A dense matrix of arbitrary-precision integers, row major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @classmethod
    def from_rows(cls, rows_data) -> "IntegerMatrix":
        rows_data = [list(r) for r in rows_data]
        r = len(rows_data)
        c = len(rows_data[0]) if rows_data else 0
        if any(len(row) != c for row in rows_data):
            raise ValueError("ragged rows")
        return cls(r, c, tuple(x for row in rows_data for x in row))

    @classmethod
    def from_columns(cls, cols_data, nrows: int | None = None) -> "IntegerMatrix":
        cols_data = [list(c) for c in cols_data]
        if not cols_data:
            if nrows is None:
                raise ValueError("need nrows for a matrix with no columns")
            return cls(nrows, 0, ())
        r = len(cols_data[0])
        if any(len(col) != r for col in cols_data):
            raise ValueError("ragged columns")
        if r == 0:
            return cls(0, len(cols_data), ())
        return cls.from_rows([[col[i] for col in cols_data] for i in range(r)])

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntegerMatrix":
        return cls(r, c, (0,) * (r * c))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(
            self.cols, self.rows, tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows))
        )

    def mul(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.at(k, j) for k in range(self.cols)))
        return IntegerMatrix(self.rows, other.cols, tuple(out))

    def mul_vector(self, v) -> list[int]:
        v = list(v)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum(self.row(i)[k] * v[k] for k in range(self.cols)) for i in range(self.rows)]

    def hstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        rows = [list(self.row(i)) + list(other.row(i)) for i in range(self.rows)]
        return IntegerMatrix.from_rows(rows) if rows else IntegerMatrix(0, self.cols + other.cols, ())

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def is_diagonal(self) -> bool:
        return all(
            self.at(i, j) == 0 for i in range(self.rows) for j in range(self.cols) if i != j
        )

    def diagonal(self) -> list[int]:
        return [self.at(i, i) for i in range(min(self.rows, self.cols))]

    def determinant(self) -> int:
        """Fraction-free Bareiss elimination; exact for any square matrix."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.row_lists()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """U, S, V with S = U*M*V diagonal, nonnegative, d1 | d2 | ...; U, V unimodular."""

    U: IntegerMatrix
    S: IntegerMatrix
    V: IntegerMatrix

    def __post_init__(self):
        if not self.S.is_diagonal():
            raise ValueError("S is not diagonal")
        diag = self.S.diagonal()
        if any(d < 0 for d in diag):
            raise ValueError("S has negative diagonal entries")
        nonzero = [d for d in diag if d != 0]
        if any(d == 0 for d in diag[: len(nonzero)]):
            raise ValueError("zero diagonal entry before a nonzero one")
        for a, b in zip(nonzero, nonzero[1:]):
            if b % a != 0:
                raise ValueError("diagonal is not a divisibility chain")

    @property
    def rank(self) -> int:
        return sum(1 for d in self.S.diagonal() if d != 0)


def smith_normal_form(m: IntegerMatrix) -> SmithDecomposition:
    """Compute the Smith normal form S = U*M*V by integer row/column reduction.

    Pivots are chosen with smallest nonzero absolute value to limit entry
    growth.  The identity S == U*M*V is re-verified before returning.
    """
    r, c = m.rows, m.cols
    a = m.row_lists()
    u = IntegerMatrix.identity(r).row_lists()
    v = IntegerMatrix.identity(c).row_lists()

    def row_sub(i, j, q):  # row_i -= q * row_j
        ai, aj = a[i], a[j]
        ui, uj = u[i], u[j]
        for x in range(c):
            ai[x] -= q * aj[x]
        for x in range(r):
            ui[x] -= q * uj[x]

    def col_sub(i, j, q):  # col_i -= q * col_j
        for x in range(r):
            a[x][i] -= q * a[x][j]
        for x in range(c):
            v[x][i] -= q * v[x][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for x in range(r):
            a[x][i], a[x][j] = a[x][j], a[x][i]
        for x in range(c):
            v[x][i], v[x][j] = v[x][j], v[x][i]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(r, c)
    while t < limit:
        pivot = None
        best = None
        for i in range(t, r):
            for j in range(t, c):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        if a[t][t] < 0:
            negate_row(t)
        clean = True
        for i in range(t + 1, r):
            if a[i][t] != 0:
                q = a[i][t] // a[t][t]
                row_sub(i, t, q)
                if a[i][t] != 0:
                    clean = False
        for j in range(t + 1, c):
            if a[t][j] != 0:
                q = a[t][j] // a[t][t]
                col_sub(j, t, q)
                if a[t][j] != 0:
                    clean = False
        if clean:
            t += 1

    # enforce the divisibility chain on the diagonal
    changed = True
    while changed:
        changed = False
        for i in range(limit - 1):
            d, e = a[i][i], a[i + 1][i + 1]
            if d != 0 and e % d != 0:
                col_sub(i, i + 1, -1)  # col_i += col_{i+1}
                # re-clear the 2x2 block with a gcd sweep
                while a[i + 1][i] != 0:
                    if abs(a[i + 1][i]) <= abs(a[i][i]):
                        q = a[i][i] // a[i + 1][i]
                        row_sub(i, i + 1, q)
                        if a[i][i] == 0:
                            swap_rows(i, i + 1)
                    else:
                        q = a[i + 1][i] // a[i][i]
                        row_sub(i + 1, i, q)
                if a[i][i + 1] != 0:
                    q = a[i][i + 1] // a[i][i]
                    col_sub(i + 1, i, q)
                if a[i][i] < 0:
                    negate_row(i)
                if a[i + 1][i + 1] < 0:
                    negate_row(i + 1)
                changed = True

    mat_u = IntegerMatrix.from_rows(u) if r else IntegerMatrix(0, 0, ())
    mat_v = IntegerMatrix.from_rows(v) if c else IntegerMatrix(0, 0, ())
    mat_s = IntegerMatrix.from_rows(a) if r else IntegerMatrix(0, c, ())
    if r and c:
        if mat_u.mul(m).mul(mat_v).entries != mat_s.entries:
            raise AssertionError("internal error: U*M*V != S")
    return SmithDecomposition(mat_u, mat_s, mat_v)


def kernel_lattice(m: IntegerMatrix) -> IntegerMatrix:
    """Basis (as columns) of the integer kernel {x : M x = 0}."""
    snf = smith_normal_form(m)
    rank = snf.rank
    cols = [snf.V.column(j) for j in range(rank, m.cols)]
    return IntegerMatrix.from_columns(cols, nrows=m.cols)


def solve_integer(m: IntegerMatrix, b) -> list[int] | None:
    """One integer solution x of M x = b, or None if there is none."""
    b = list(b)
    if len(b) != m.rows:
        raise ValueError("right-hand side length mismatch")
    snf = smith_normal_form(m)
    y = snf.U.mul_vector(b)
    diag = snf.S.diagonal()
    z = [0] * m.cols
    for i in range(m.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if i < len(y) and y[i] != 0:
                return None
        else:
            if y[i] % d != 0:
                return None
            z[i] = y[i] // d
    return snf.V.mul_vector(z)


class ContainmentError(ValueError):
    """Generators of the denominator lattice fall outside the numerator lattice."""


@dataclass(frozen=True)
class Subquotient:
    """The group Z/B for lattices B <= Z <= Z^n, with coordinate maps.

    group         -- canonical form of the quotient
    lattice_basis -- columns: a basis of the Z lattice
    """

    group: FinAbGroup
    lattice_basis: IntegerMatrix
    _snf_z: SmithDecomposition
    _u2: IntegerMatrix
    _u2_inv: IntegerMatrix
    _diag2: tuple[int, ...]

    def class_of(self, vector) -> GroupElement:
        """Canonical coordinates of the class of a lattice vector."""
        y = self._in_basis(vector)
        z = self._u2.mul_vector(y)
        r = len(y)
        free = [z[i] for i in range(r) if i >= len(self._diag2) or self._diag2[i] == 0]
        tors = [
            z[i] % self._diag2[i]
            for i in range(min(r, len(self._diag2)))
            if self._diag2[i] >= 2
        ]
        return self.group.element(free + tors)

    def generator_vectors(self) -> list[list[int]]:
        """One lattice vector per canonical generator of the quotient."""
        r = self.lattice_basis.cols
        out = []
        free_slots = [i for i in range(r) if i >= len(self._diag2) or self._diag2[i] == 0]
        tors_slots = [i for i in range(min(r, len(self._diag2))) if self._diag2[i] >= 2]
        for slot in free_slots + tors_slots:
            y = self._u2_inv.mul_vector([1 if i == slot else 0 for i in range(r)])
            out.append(self.lattice_basis.mul_vector(y))
        return out

    def _in_basis(self, vector) -> list[int]:
        vector = list(vector)
        if len(vector) != self.lattice_basis.rows:
            raise ValueError("vector dimension mismatch")
        yy = self._snf_z.U.mul_vector(vector)
        diag = self._snf_z.S.diagonal()
        rank = self._snf_z.rank
        for i in range(rank, len(yy)):
            if yy[i] != 0:
                raise ContainmentError("vector is not in the lattice")
        out = []
        for i in range(rank):
            if yy[i] % diag[i] != 0:
                raise ContainmentError("vector is not in the lattice")
            out.append(yy[i] // diag[i])
        return out


def _unimodular_inverse(m: IntegerMatrix) -> IntegerMatrix:
    snf = smith_normal_form(m)
    if snf.S.entries != IntegerMatrix.identity(m.rows).entries:
        raise ValueError("matrix is not unimodular")
    return snf.V.mul(snf.U)


def subquotient(zgens: IntegerMatrix, bgens: IntegerMatrix) -> Subquotient:
    """Quotient of the lattice spanned by zgens columns by the span of bgens.

    Raises ContainmentError when some bgens column is outside the zgens
    lattice (upstream this signals a broken differential).
    """
    if zgens.rows != bgens.rows:
        raise ValueError("ambient dimensions differ")
    snf_z = smith_normal_form(zgens)
    rank = snf_z.rank
    basis_cols = []
    zv = zgens.mul(snf_z.V) if zgens.cols else zgens
    for j in range(rank):
        basis_cols.append(zv.column(j))
    basis = IntegerMatrix.from_columns(basis_cols, nrows=zgens.rows)

    diag = snf_z.S.diagonal()
    expressed = []
    for j in range(bgens.cols):
        col = bgens.column(j)
        y = snf_z.U.mul_vector(col)
        for i in range(rank, len(y)):
            if y[i] != 0:
                raise ContainmentError(f"column {j} of bgens is not in the zgens lattice")
        x = []
        for i in range(rank):
            if y[i] % diag[i] != 0:
                raise ContainmentError(f"column {j} of bgens is not in the zgens lattice")
            x.append(y[i] // diag[i])
        expressed.append(x)
    relations = IntegerMatrix.from_columns(expressed, nrows=rank)

    snf_rel = smith_normal_form(relations)
    diag2 = tuple(snf_rel.S.diagonal())
    n_tors = sum(1 for d in diag2 if d != 0)
    free = rank - n_tors
    orders = [d for d in diag2 if d >= 2]
    group = FinAbGroup.from_orders(free, orders)
    u2 = snf_rel.U if rank else IntegerMatrix(0, 0, ())
    u2_inv = _unimodular_inverse(u2) if rank else IntegerMatrix(0, 0, ())
    return Subquotient(group, basis, snf_z, u2, u2_inv, diag2)


def solve_mod(m: IntegerMatrix, b, group: FinAbGroup):
    """Solve M x = b where unknowns and right-hand side take values in `group`.

    b is a sequence of GroupElement (bare integers are accepted when the
    group has a single coordinate).  Free coordinates are solved over Z,
    torsion coordinates modulo their order by augmenting M with the order
    relations.  Returns a list of GroupElement or None if unsolvable.
    """
    moduli = group.coord_moduli()
    rhs = []
    for entry in b:
        if isinstance(entry, GroupElement):
            group._check_member(entry)
            rhs.append(entry.coords)
        else:
            if group.n_coords != 1:
                raise ValueError("bare integers need a group with one coordinate")
            rhs.append((int(entry),))
    if len(rhs) != m.rows:
        raise ValueError("right-hand side length mismatch")

    per_coord: list[list[int]] = []
    for ci, modulus in enumerate(moduli):
        column = [row[ci] for row in rhs]
        if modulus == 0:
            sol = solve_integer(m, column)
        else:
            aug = m.hstack(IntegerMatrix(
                m.rows, m.rows,
                tuple(modulus if i == j else 0 for i in range(m.rows) for j in range(m.rows)),
            )) if m.rows else m
            full = solve_integer(aug, column) if m.rows else [0] * m.cols
            sol = full[: m.cols] if full is not None else None
        if sol is None:
            return None
        per_coord.append(sol)
    return [
        group.element(tuple(per_coord[ci][j] for ci in range(len(moduli))))
        for j in range(m.cols)
    ]

"""Exact integer linear algebra.

Smith and Hermite normal forms over Z, integer kernels, cokernels with
degree maps, and syzygies of rational points of P^1.  Everything works on
Python ints (or Fractions where rational data enters); nothing here ever
touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DegeneratePoints, InvalidBasis


@dataclass(frozen=True)
class IntMatrix:
    """Dense immutable integer matrix.

    A matrix with zero rows still remembers its column count, which the
    cokernel of an empty relation set needs.
    """
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")
        for r in self.entries:
            for x in r:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise TypeError(f"matrix entries must be int, got {type(x).__name__}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("column count required for a matrix without rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {ij} out of bounds for {self.rows}x{self.cols} matrix")
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        oc = [other.col(j) for j in range(other.cols)]
        return IntMatrix(self.rows, other.cols,
                         tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in oc) for r in self.entries))

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, r in enumerate(self.entries) for j, x in enumerate(r) if i != j)

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.entries]
        sign, prev = 1, 1
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
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __str__(self):
        if not self.rows:
            return f"[](0x{self.cols})"
        w = max(len(str(x)) for r in self.entries for x in r) if self.cols else 0
        return "\n".join("[" + " ".join(str(x).rjust(w) for x in r) + "]" for r in self.entries)


def _as_matrix(A) -> IntMatrix:
    return A if isinstance(A, IntMatrix) else IntMatrix.from_rows(A)


@dataclass(frozen=True)
class SNFResult:
    S: IntMatrix
    U: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def snf(A) -> SNFResult:
    """Smith normal form with transforms, U*A*V = S.

    Pivots are chosen by minimal absolute value.  The diagonal is made
    nonnegative and divisibility d_1 | d_2 | ... is enforced.
    """
    A = _as_matrix(A)
    m, n = A.rows, A.cols
    S = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(a, b):
        if a != b:
            S[a], S[b] = S[b], S[a]
            U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        if a != b:
            for r in S:
                r[a], r[b] = r[b], r[a]
            for r in V:
                r[a], r[b] = r[b], r[a]

    def add_row(dst, src, q):  # row_dst += q * row_src
        Sd, Ss = S[dst], S[src]
        for k in range(n):
            Sd[k] += q * Ss[k]
        Ud, Us = U[dst], U[src]
        for k in range(m):
            Ud[k] += q * Us[k]

    def add_col(dst, src, q):
        for r in S:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = S[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // p
                    if q:
                        add_row(i, t, -q)
                    if S[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // p
                    if q:
                        add_col(j, t, -q)
                    if S[t][j]:
                        clean = False
            if not clean:
                # move the smallest remainder into the pivot position and repeat
                cand = [(abs(S[i][t]), i, t) for i in range(t + 1, m) if S[i][t]]
                cand += [(abs(S[t][j]), t, j) for j in range(t + 1, n) if S[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    factors = tuple(S[i][i] for i in range(min(m, n)) if S[i][i])
    return SNFResult(IntMatrix(m, n, tuple(map(tuple, S))),
                     IntMatrix(m, m, tuple(map(tuple, U))),
                     IntMatrix(n, n, tuple(map(tuple, V))),
                     factors)


def hnf_with_transform(rows: Sequence[Sequence[int]], ncols: int):
    """Row Hermite normal form H = W*A with W unimodular.

    Returns (H, W) where H keeps zero rows at the bottom.  Pivots are
    positive and entries above a pivot are reduced into [0, pivot).
    """
    A = [list(r) for r in rows]
    m = len(A)
    W = [[int(i == j) for j in range(m)] for i in range(m)]
    piv_row = 0
    pivots = []
    for c in range(ncols):
        if piv_row >= m:
            break
        while True:
            nz = [(abs(A[i][c]), i) for i in range(piv_row, m) if A[i][c]]
            if not nz:
                break
            _, i0 = min(nz)
            A[piv_row], A[i0] = A[i0], A[piv_row]
            W[piv_row], W[i0] = W[i0], W[piv_row]
            p = A[piv_row][c]
            done = True
            for i in range(piv_row + 1, m):
                if A[i][c]:
                    q = A[i][c] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[piv_row])]
                    W[i] = [a - q * b for a, b in zip(W[i], W[piv_row])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if piv_row < m and A[piv_row][c]:
            if A[piv_row][c] < 0:
                A[piv_row] = [-x for x in A[piv_row]]
                W[piv_row] = [-x for x in W[piv_row]]
            p = A[piv_row][c]
            for i in range(piv_row):
                q = A[i][c] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[piv_row])]
                    W[i] = [a - q * b for a, b in zip(W[i], W[piv_row])]
            pivots.append(c)
            piv_row += 1
    return A, W


def hnf_rows(rows: Iterable[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Canonical basis (nonzero HNF rows) of the lattice spanned by ``rows``."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    H, _ = hnf_with_transform(rows, ncols)
    return [tuple(r) for r in H if any(r)]


def lattice_equal(a, b, ncols: int) -> bool:
    return hnf_rows(a, ncols) == hnf_rows(b, ncols)


def kernel_basis(A) -> list[tuple[int, ...]]:
    """Saturated lattice basis of {x in Z^cols : A x = 0}, in HNF."""
    A = _as_matrix(A)
    res = snf(A)
    n = A.cols
    vecs = [tuple(res.V[i, j] for i in range(n)) for j in range(res.rank, n)]
    return hnf_rows(vecs, n)


def row_kernel_basis(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Orthogonal complement in Z^ncols of the span of ``rows``."""
    rows = [list(r) for r in rows]
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    return kernel_basis(IntMatrix.from_rows(rows, ncols))


def saturation(rows, ncols: int) -> list[tuple[int, ...]]:
    """(span_Q L) intersected with Z^n, as an HNF basis."""
    perp = row_kernel_basis(rows, ncols)
    return row_kernel_basis(perp, ncols)


def lattice_index(rows, ncols: int) -> int:
    """Index of the lattice in its saturation (1 iff saturated)."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 1
    res = snf(IntMatrix.from_rows(rows, ncols))
    out = 1
    for d in res.invariant_factors:
        out *= d
    return out


def solve_integer(A, b: Sequence[int]):
    """Some integer x with A x = b, or None."""
    A = _as_matrix(A)
    res = snf(A)
    c = [sum(res.U[i, k] * b[k] for k in range(A.rows)) for i in range(A.rows)]
    y = [0] * A.cols
    for i in range(A.rows):
        if i < res.rank:
            d = res.invariant_factors[i]
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return [sum(res.V[i, k] * y[k] for k in range(A.cols)) for i in range(A.cols)]


# -- finitely generated abelian groups ---------------------------------------

@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank + Z/d_1 + ... + Z/d_k with d_i >= 2 and d_i | d_{i+1}."""
    free_rank: int
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(int(d) for d in self.torsion_orders))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        t = self.torsion_orders
        if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion orders {t} are not an invariant factor sequence")

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.free_rank, (0,) * len(self.torsion_orders))

    def element(self, free=(), torsion=()) -> "GroupElement":
        return GroupElement(self, tuple(free), tuple(torsion))

    @property
    def is_free(self) -> bool:
        return not self.torsion_orders

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion_orders]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion_orders)}


@dataclass(frozen=True)
class GroupElement:
    owner: FGAbelianGroup
    free_part: tuple[int, ...]
    torsion_part: tuple[int, ...]

    def __post_init__(self):
        g = self.owner
        if len(self.free_part) != g.free_rank or len(self.torsion_part) != len(g.torsion_orders):
            raise ValueError("element shape does not match its group")
        object.__setattr__(self, "free_part", tuple(int(x) for x in self.free_part))
        object.__setattr__(self, "torsion_part",
                           tuple(int(x) % d for x, d in zip(self.torsion_part, g.torsion_orders)))

    def _check(self, other):
        if not isinstance(other, GroupElement) or other.owner != self.owner:
            raise ValueError("elements of different groups")

    def __add__(self, other):
        self._check(other)
        return GroupElement(self.owner,
                            tuple(a + b for a, b in zip(self.free_part, other.free_part)),
                            tuple(a + b for a, b in zip(self.torsion_part, other.torsion_part)))

    def __neg__(self):
        return GroupElement(self.owner, tuple(-a for a in self.free_part), tuple(-a for a in self.torsion_part))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return GroupElement(self.owner, tuple(k * a for a in self.free_part), tuple(k * a for a in self.torsion_part))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.free_part) and not any(self.torsion_part)

    def as_tuple(self):
        return self.free_part + self.torsion_part

    def __str__(self):
        parts = [str(a) for a in self.free_part] + [f"{a}~" for a in self.torsion_part]
        return "(" + ", ".join(parts) + ")"

    def to_json(self):
        return {"free": list(self.free_part), "torsion": list(self.torsion_part)}


def group_sum(owner: FGAbelianGroup, elems: Iterable[GroupElement]) -> GroupElement:
    out = owner.zero()
    for e in elems:
        out = out + e
    return out


def cokernel(A) -> tuple[FGAbelianGroup, list[GroupElement]]:
    """Z^cols / rowspace(A) with the images of the standard basis vectors.

    If U*A*V = S then x -> x*V identifies the quotient with Z^n/rowspace(S),
    so generator j maps to row j of V.  The free coordinates are then put
    in Hermite form so the result does not depend on pivoting accidents.
    """
    A = _as_matrix(A)
    n = A.cols
    if A.rows == 0:
        g = FGAbelianGroup(n)
        return g, [g.element(tuple(int(i == j) for i in range(n))) for j in range(n)]
    res = snf(A)
    r = res.rank
    tors_idx = [i for i in range(r) if res.invariant_factors[i] > 1]
    orders = tuple(res.invariant_factors[i] for i in tors_idx)
    free = n - r
    V = res.V
    F = [[V[j, r + k] for j in range(n)] for k in range(free)]  # free coordinate rows
    if free:
        _, W = hnf_with_transform(F, n)
        F = [[sum(W[a][b] * F[b][j] for b in range(free)) for j in range(n)] for a in range(free)]
    g = FGAbelianGroup(free, orders)
    degs = [g.element(tuple(F[k][j] for k in range(free)), tuple(V[j, i] for i in tors_idx)) for j in range(n)]
    return g, degs


def rebase(group: FGAbelianGroup, degrees: Sequence[GroupElement],
           free_basis: Sequence[Sequence[int]], torsion_gens: Sequence[Sequence[int]],
           torsion_orders: Sequence[int]):
    """Re-express degrees in a caller-chosen basis of the same group.

    ``free_basis`` and ``torsion_gens`` are integer combinations of the
    generators (coefficient vectors over the degree list).  The new
    coordinates of a degree are its coordinates with respect to these
    elements.  Raises InvalidBasis if the proposed elements are not a basis
    with the stated orders.
    """
    n = len(degrees)
    t = len(group.torsion_orders)

    def combo(c):
        return group_sum(group, (k * d for k, d in zip(c, degrees)))

    gens = [combo(c) for c in free_basis] + [combo(c) for c in torsion_gens]
    orders = [0] * len(free_basis) + [int(o) for o in torsion_orders]
    new = FGAbelianGroup(len(free_basis), tuple(o for o in torsion_orders))
    # Solve [G | diag(old torsion)] y = x in Z^{free+t}
    cols = [list(gv.as_tuple()) for gv in gens]
    for i, d in enumerate(group.torsion_orders):
        e = [0] * (group.free_rank + t)
        e[group.free_rank + i] = d
        cols.append(e)
    M = IntMatrix.from_rows([[c[i] for c in cols] for i in range(group.free_rank + t)], len(cols))
    # each new generator must have exactly its stated order
    for gv, o in zip(gens[len(free_basis):], orders[len(free_basis):]):
        if not (gv * o).is_zero() or any((gv * k).is_zero() for k in range(1, o)):
            raise InvalidBasis("proposed torsion generator has the wrong order")
    if group.free_rank != len(free_basis) or len(group.torsion_orders) != len(torsion_orders):
        raise InvalidBasis("proposed basis has the wrong shape")
    out = []
    for d in degrees:
        y = solve_integer(M, d.as_tuple())
        if y is None:
            raise InvalidBasis("proposed elements do not generate the group")
        out.append(new.element(y[:len(free_basis)], y[len(free_basis):len(gens)]))
    # the new generators must be independent: the map Z^k + torsion -> group is injective
    # iff orders multiply to the torsion size and free parts have full rank with unit index
    size = 1
    for d in group.torsion_orders:
        size *= d
    prod = 1
    for o in torsion_orders:
        prod *= o
    if prod != size:
        raise InvalidBasis("proposed torsion generators do not span the torsion subgroup freely")
    if free_basis:
        fp = [list(gv.free_part) for gv in gens[:len(free_basis)]]
        if abs(IntMatrix.from_rows(fp).det()) != 1:
            raise InvalidBasis("proposed free generators are not a basis modulo torsion")
    return new, out


def same_grading(deg_a: Sequence[GroupElement], deg_b: Sequence[GroupElement]) -> bool:
    """Whether two degree maps on the same generators differ by a group isomorphism.

    Both maps are assumed surjective; then they agree up to isomorphism iff
    their relation lattices (kernels of Z^n -> G) coincide.
    """
    if len(deg_a) != len(deg_b):
        return False
    ga = deg_a[0].owner if deg_a else None
    gb = deg_b[0].owner if deg_b else None
    if ga is None:
        return True
    if (ga.free_rank, ga.torsion_orders) != (gb.free_rank, gb.torsion_orders):
        return False
    return lattice_equal(degree_relations(deg_a), degree_relations(deg_b), len(deg_a))


def degree_relations(degs: Sequence[GroupElement]) -> list[tuple[int, ...]]:
    """Lattice of x in Z^n with sum x_j deg_j = 0."""
    n = len(degs)
    if not n:
        return []
    g = degs[0].owner
    f, t = g.free_rank, len(g.torsion_orders)
    # columns: n generator coefficients, then one slack per torsion coordinate
    rows = []
    for k in range(f):
        rows.append([d.free_part[k] for d in degs] + [0] * t)
    for i, o in enumerate(g.torsion_orders):
        rows.append([d.torsion_part[i] for d in degs] + [o if j == i else 0 for j in range(t)])
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    ker = kernel_basis(IntMatrix.from_rows(rows, n + t))
    return hnf_rows([k[:n] for k in ker], n)


# -- syzygies of points of P^1 -----------------------------------------------

def _det2(p, q) -> Fraction:
    return Fraction(p[0]) * Fraction(q[1]) - Fraction(p[1]) * Fraction(q[0])


def check_points(vectors: Sequence[Sequence]) -> None:
    for i, v in enumerate(vectors):
        if Fraction(v[0]) == 0 and Fraction(v[1]) == 0:
            raise DegeneratePoints(f"point {i} has the zero representative")
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            if _det2(vectors[i], vectors[j]) == 0:
                raise DegeneratePoints(f"points {i} and {j} coincide in P^1")


def syz2(vectors: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Saturated integer basis of linear relations among rational 2-vectors."""
    vectors = [(Fraction(v[0]), Fraction(v[1])) for v in vectors]
    check_points(vectors)
    n = len(vectors)
    if n <= 2:
        return []
    rows = []
    for k in range(2):
        den = lcm(*(v[k].denominator for v in vectors))
        rows.append([int(v[k] * den) for v in vectors])
    return kernel_basis(IntMatrix.from_rows(rows, n))


def trinomial_syzygies(vectors: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Consecutive-triple syzygies (c_k b_j - c_j b_k, c_i b_k - c_k b_i, c_j b_i - c_i b_j).

    ``vectors`` are representatives (b_i, c_i).
    """
    vectors = [(Fraction(v[0]), Fraction(v[1])) for v in vectors]
    n = len(vectors)
    if n < 3:
        return []
    check_points(vectors)
    out = []
    for i in range(n - 2):
        j, k = i + 1, i + 2
        (bi, ci), (bj, cj), (bk, ck) = vectors[i], vectors[j], vectors[k]
        s = [Fraction(0)] * n
        s[i] = ck * bj - cj * bk
        s[j] = ci * bk - ck * bi
        s[k] = cj * bi - ci * bj
        out.append(tuple(s))
    return out


def primitive_int(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector (same direction)."""
    fr = [Fraction(x) for x in v]
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)

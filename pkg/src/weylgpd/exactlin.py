"""Exact rational linear algebra over Q^r.

Covectors (elements of the dual space) and vectors are both plain tuples of
rationals; which one a tuple means is determined by how it is used.  All
operations are pure and exact, so every downstream predicate is decidable.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence

from ._rational import ONE, ZERO, Rat, rat
from .errors import SingularBasis, ZeroCovector

Covector = tuple  # length-r tuple of Rat
Vector = tuple  # length-r tuple of Rat
IntVec = tuple  # length-n tuple of int
Matrix = tuple  # tuple of row tuples of Rat


def vec(entries: Iterable) -> tuple:
    """Build a rational tuple from ints, strings, or rationals."""
    return tuple(rat(e) for e in entries)


def vadd(u: tuple, v: tuple) -> tuple:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: tuple, v: tuple) -> tuple:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vneg(u: tuple) -> tuple:
    return tuple(-a for a in u)


def vscale(c, u: tuple) -> tuple:
    c = rat(c)
    return tuple(c * a for a in u)


def vdot(alpha: tuple, x: tuple):
    """Evaluate the covector alpha at the vector x (or any exact dot product)."""
    total = ZERO
    for a, b in zip(alpha, x, strict=True):
        total += a * b
    return total


def is_zero(u: tuple) -> bool:
    return all(a == 0 for a in u)


def sign_at(alpha: Covector, x: Vector) -> int:
    """Sign of alpha(x): +1, 0, or -1, exactly."""
    value = vdot(alpha, x)
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def _echelon(rows: list[list]) -> tuple[list[list], list[int]]:
    """In-place fraction-free-ish Gaussian elimination; returns (rows, pivot columns)."""
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    piv_r = 0
    for col in range(n_cols):
        pivot_row = None
        for r in range(piv_r, n_rows):
            if rows[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[piv_r], rows[pivot_row] = rows[pivot_row], rows[piv_r]
        pv = rows[piv_r][col]
        rows[piv_r] = [a / pv for a in rows[piv_r]]
        for r in range(n_rows):
            if r != piv_r and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[piv_r])]
        pivots.append(col)
        piv_r += 1
        if piv_r == n_rows:
            break
    return rows, pivots


def rank(vectors: Sequence[tuple]) -> int:
    if not vectors:
        return 0
    _, pivots = _echelon([list(v) for v in vectors])
    return len(pivots)


def solve_coordinates(basis: Sequence[Covector], target: Covector) -> tuple:
    """Coefficients lam with target = sum(lam_i * basis_i), exact.

    Raises SingularBasis when the claimed basis is dependent.
    """
    r = len(target)
    if len(basis) != r:
        raise SingularBasis(f"need {r} basis covectors, got {len(basis)}")
    # Augmented system: columns are the basis elements, rhs is the target.
    rows = [[basis[j][k] for j in range(r)] + [target[k]] for k in range(r)]
    rows, pivots = _echelon(rows)
    if pivots != list(range(r)):
        raise SingularBasis("basis is linearly dependent")
    return tuple(rows[i][r] for i in range(r))


def inverse(matrix: Sequence[Sequence]) -> Matrix:
    """Exact inverse of a square rational matrix."""
    n = len(matrix)
    rows = [list(matrix[i]) + [ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    rows, pivots = _echelon(rows)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        raise SingularBasis("matrix is singular")
    return tuple(tuple(rows[i][n:]) for i in range(n))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), start=ZERO) for j in range(m))
        for i in range(n)
    )


def mat_vec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(vdot(row, v) for row in a)


def det(matrix: Sequence[Sequence]):
    """Exact determinant by fraction elimination."""
    n = len(matrix)
    rows = [list(map(rat, row)) for row in matrix]
    result = ONE
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if rows[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            return ZERO
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            result = -result
        pv = rows[col][col]
        result *= pv
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                factor = rows[r][col] / pv
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return result


def dual_basis(basis: Sequence[Covector]) -> list[Vector]:
    """Vectors C with basis_i(C_j) = delta_ij; raises SingularBasis if dependent."""
    inv = inverse([list(b) for b in basis])
    n = len(basis)
    return [tuple(inv[i][j] for i in range(n)) for j in range(n)]


def nullspace(rows: Sequence[tuple]) -> list[tuple]:
    """Basis of {x : row . x = 0 for every row}; the full space for no rows."""
    if not rows:
        raise ValueError("nullspace needs the ambient dimension; pass at least one row")
    n = len(rows[0])
    reduced, pivots = _echelon([list(r) for r in rows])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * n
        x[f] = ONE
        for i, p in enumerate(pivots):
            x[p] = -reduced[i][f]
        basis.append(tuple(x))
    return basis


def nullspace_dim(rows: Sequence[tuple], ambient: int) -> int:
    if not rows:
        return ambient
    return ambient - rank(rows)


def primitive_normalize(alpha: Covector) -> Covector:
    """Hyperplane key: the positive multiple with coprime integer coordinates and
    first nonzero coordinate positive.  Identifies alpha up to sign and scale."""
    key = primitive_ray(alpha)
    for a in key:
        if a != 0:
            if a < 0:
                key = vneg(key)
            break
    return key


def primitive_ray(alpha: Covector) -> Covector:
    """Orientation-preserving primitive form: the positive multiple of alpha with
    coprime integer coordinates."""
    if all(a == 0 for a in alpha):
        raise ZeroCovector("cannot normalize the zero covector")
    denom_lcm = 1
    for a in alpha:
        d = int(a.denominator)
        denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
    ints = [int(a * denom_lcm) for a in alpha]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(Rat(v // g) for v in ints)


def integer_kernel_basis(alpha: Sequence[int]) -> list[tuple]:
    """Unimodular basis of {x in Z^n : alpha . x = 0} for a primitive integer alpha.

    Built by column operations bringing alpha to (g, 0, ..., 0); deterministic.
    """
    n = len(alpha)
    a = [int(x) for x in alpha]
    # Columns of u span Z^n; we keep alpha . col invariantly tracked in g.
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col(j):
        return [u[i][j] for i in range(n)]

    def set_col(j, c):
        for i in range(n):
            u[i][j] = c[i]

    g = a[0]
    for k in range(1, n):
        ak = a[k]
        if ak == 0:
            continue
        if g == 0:
            # Swap roles: move column k into position 0.
            c0, ck = col(0), col(k)
            set_col(0, ck)
            set_col(k, [-x for x in c0])
            g = ak
            continue
        gg, s, t = _xgcd(g, ak)
        c0, ck = col(0), col(k)
        new0 = [s * x + t * y for x, y in zip(c0, ck)]
        newk = [(-ak // gg) * x + (g // gg) * y for x, y in zip(c0, ck)]
        set_col(0, new0)
        set_col(k, newk)
        g = gg
    if g == 0:
        raise ZeroCovector("kernel basis of the zero covector is the whole lattice")
    return [tuple(Rat(u[i][j]) for i in range(n)) for j in range(1, n)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with g = gcd(a, b) > 0 and s*a + t*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def solve_in_span(spanning: Sequence[tuple], target: tuple) -> tuple | None:
    """Coefficients expressing target over a (not necessarily square) independent
    family, or None when target lies outside the span."""
    m = len(spanning)
    if m == 0:
        return () if is_zero(target) else None
    r = len(target)
    aug = [[spanning[t][k] for t in range(m)] + [target[k]] for k in range(r)]
    reduced, pivots = _echelon(aug)
    if any(p == m for p in pivots):
        return None  # inconsistent
    coeffs = [ZERO] * m
    for i, p in enumerate(pivots):
        coeffs[p] = reduced[i][m]
    return tuple(coeffs)


def solve_unique(rows: Sequence[tuple], rhs: Sequence) -> tuple | None:
    """The unique solution x of rows . x = rhs, or None if inconsistent or non-unique."""
    if not rows:
        return None
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs, strict=True)]
    reduced, pivots = _echelon(aug)
    pivots_main = [p for p in pivots if p < n]
    if len(pivots_main) != len(pivots):
        return None  # pivot in the rhs column: inconsistent
    if len(pivots_main) < n:
        return None  # underdetermined
    x = [ZERO] * n
    for i, p in enumerate(pivots_main):
        x[p] = reduced[i][n]
    return tuple(x)

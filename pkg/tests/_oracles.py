"""Independent oracles used by the tests.

Everything here is deliberately written against plain fractions.Fraction with
its own elimination / enumeration code, so results cross-check the library
through a different computational path.
"""

from __future__ import annotations

import itertools
from fractions import Fraction as F


def _F(c) -> F:
    """Backend-agnostic conversion (handles gmpy2 mpq via its string form)."""
    return F(str(c))


def gauss_solve(basis, target):
    """Solve sum(l_i * basis_i) = target by plain fraction elimination."""
    r = len(target)
    rows = [[_F(basis[j][k]) for j in range(len(basis))] + [_F(target[k])] for k in range(r)]
    n_cols = len(basis)
    piv = 0
    pivots = []
    for col in range(n_cols):
        pivot_row = next((i for i in range(piv, r) if rows[i][col] != 0), None)
        if pivot_row is None:
            continue
        rows[piv], rows[pivot_row] = rows[pivot_row], rows[piv]
        pv = rows[piv][col]
        rows[piv] = [a / pv for a in rows[piv]]
        for i in range(r):
            if i != piv and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[piv])]
        pivots.append(col)
        piv += 1
    if pivots != list(range(n_cols)):
        return None
    for i in range(piv, r):
        if rows[i][n_cols] != 0:
            return None
    return tuple(rows[i][n_cols] for i in range(n_cols))


def fm_feasible_strict(rows) -> bool:
    """Feasibility of the homogeneous strict system {x : row . x > 0 for all rows}.

    Fourier-Motzkin elimination; all constraints strict, so combining a positive
    and a negative coefficient row stays strict.
    """
    system = [tuple(_F(c) for c in row) for row in rows]
    n = len(system[0]) if system else 0
    for var in range(n - 1, 0, -1):
        pos, neg, zero = [], [], []
        for row in system:
            if row[var] > 0:
                pos.append(row)
            elif row[var] < 0:
                neg.append(row)
            else:
                zero.append(row)
        new_system = list({r[:var] for r in zero})
        for p in pos:
            for q in neg:
                combo = tuple(p[k] * (-q[var]) + q[k] * p[var] for k in range(var))
                new_system.append(combo)
        # Deduplicate up to positive scaling to keep the system small.
        seen = set()
        deduped = []
        for row in new_system:
            nz = next((c for c in row if c != 0), None)
            if nz is None:
                continue  # 0 > 0 after combination: infeasible row only if strict...
            scale = abs(nz)
            key = tuple(c / scale for c in row)
            if key not in seen:
                seen.add(key)
                deduped.append(row)
        # A derived all-zero row means the strict combination 0 > 0: infeasible.
        if any(all(c == 0 for c in row) for row in new_system):
            return False
        system = deduped
        if not system:
            return True
    signs = {1 if row[0] > 0 else -1 if row[0] < 0 else 0 for row in system}
    if 0 in signs:
        return False  # 0 > 0
    return signs in ({1}, {-1})


def realizable_sign_vectors(roots) -> set:
    """All sign vectors (over one representative per +- pair) realized by points.

    Brute force: every candidate in {+1,-1}^lines is tested by exact
    Fourier-Motzkin feasibility.  Exponential, for small tables only.
    """
    reps = []
    seen = set()
    for root in roots:
        key = _line_key(root)
        if key not in seen:
            seen.add(key)
            reps.append(key)
    out = set()
    for signs in itertools.product((1, -1), repeat=len(reps)):
        rows = [tuple(s * c for c in rep) for s, rep in zip(signs, reps)]
        if fm_feasible_strict(rows):
            out.add(tuple(zip(reps, signs)))
    return out


def _line_key(root):
    root = tuple(_F(c) for c in root)
    nz = next(c for c in root if c != 0)
    if nz < 0:
        root = tuple(-c for c in root)
    from math import gcd

    denom = 1
    for c in root:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [int(c * denom) for c in root]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(F(v // g) for v in ints)


def brute_real_roots_standard(gcm_rows, depth: int) -> set:
    """Real roots at the base of a standard graph by brute-force word products.

    Enumerates every index word of length <= depth, multiplies the (constant)
    reflection matrices, and collects all images of the standard basis.
    """
    rank = len(gcm_rows)

    def refl_matrix(i):
        return tuple(
            tuple((1 if k == j else 0) - (gcm_rows[i][j] if k == i else 0) for j in range(rank))
            for k in range(rank)
        )

    mats = [refl_matrix(i) for i in range(rank)]

    def mul(a, b):
        return tuple(
            tuple(sum(a[i][t] * b[t][j] for t in range(rank)) for j in range(rank))
            for i in range(rank)
        )

    ident = tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))
    roots = set()

    def collect(m):
        for j in range(rank):
            roots.add(tuple(m[k][j] for k in range(rank)))

    frontier = {ident}
    collect(ident)
    for _ in range(depth):
        new_frontier = set()
        for m in frontier:
            for i in range(rank):
                nm = mul(mats[i], m)
                new_frontier.add(nm)
                collect(nm)
        frontier = new_frontier
    return roots


def irredundant_constraints(positives, witness) -> set:
    """Facet-defining members of a strict constraint set, by drop-one feasibility.

    A constraint a is a facet iff the system {a(x) = 0 (as two opposite weak
    rows via perturbation), others > 0} is feasible; implemented by asking
    whether dropping the constraint changes feasibility of its reversal.
    """
    out = set()
    reps = [tuple(_F(c) for c in p) for p in positives]
    for k, cand in enumerate(reps):
        others = [r for t, r in enumerate(reps) if t != k]
        # cand is redundant iff others > 0 forces cand > 0, i.e. the system
        # {others > 0, -cand > 0 or cand = 0 boundary} ... facet test: the
        # system {others > 0} together with {-cand > 0} is feasible exactly
        # when cand's hyperplane cuts the relaxed cone, i.e. cand is a facet.
        rows = others + [tuple(-c for c in cand)]
        if fm_feasible_strict(rows):
            out.add(_line_key(cand))
    return out

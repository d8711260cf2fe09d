"""Chamber geometry of root-system tables.

A RootSystemTable is a finite, negation-closed set of rational covectors
together with a cone specification: Spherical (the whole space), Affine with an
imaginary-root functional gamma (an open halfspace), or Truncated (a finite
slice of an infinite system, cone unknown).  Chambers are the open simplicial
cones cut out by the table; adjacency, Cartan matrices per chamber, and the
crystallographic/additive checks are all exact.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from ._rational import ONE, ZERO, Rat
from .cartan import (
    CartanGraph,
    GeneralizedCartanMatrix,
    canonical_basis_key,
)
from .errors import (
    BudgetExceeded,
    InvalidTable,
    NonReducedTable,
    NotCrystallographicAt,
    NotSimplicial,
    OnHyperplane,
    OutsideCone,
    Unreachable,
    Unsupported,
    WallOnBoundary,
)
from .exactlin import (
    dual_basis,
    is_zero,
    nullspace,
    primitive_normalize,
    primitive_ray,
    rank as mat_rank,
    sign_at,
    vdot,
    vec,
    vneg,
    vscale,
    vsub,
)

Covector = tuple
Vector = tuple


# ---------------------------------------------------------------------------
# Cone specifications


@dataclass(frozen=True)
class Spherical:
    def to_json(self):
        return "spherical"


@dataclass(frozen=True)
class Affine:
    gamma: Covector

    def to_json(self):
        return {"affine": [str(c) for c in self.gamma]}


@dataclass(frozen=True)
class Truncated:
    depth: int

    def to_json(self):
        return {"truncated": self.depth}


ConeSpec = Spherical | Affine | Truncated


# ---------------------------------------------------------------------------
# Tables


class RootSystemTable:
    """Finite set of roots with cone data; immutable after construction."""

    def __init__(
        self,
        rank: int,
        roots: Iterable,
        cone: ConeSpec = Spherical(),
        reduced: bool | None = None,
        seed_hint: Vector | None = None,
        certified_keys: frozenset | None = None,
    ):
        self.rank = int(rank)
        normalized = sorted({vec(r) for r in roots})
        if not normalized:
            self.roots: tuple = ()
        else:
            self.roots = tuple(normalized)
        for r in self.roots:
            if len(r) != self.rank:
                raise InvalidTable(f"root {r} does not have rank {self.rank}")
            if is_zero(r):
                raise InvalidTable("0 is not a root")
        root_set = set(self.roots)
        for r in self.roots:
            if vneg(r) not in root_set:
                raise InvalidTable(f"table is not negation-closed: missing {vneg(r)}")
        lines: dict[Covector, list] = {}
        for r in self.roots:
            lines.setdefault(primitive_normalize(r), []).append(r)
        self.lines: dict[Covector, tuple] = {k: tuple(v) for k, v in lines.items()}
        derived_reduced = all(len(v) == 2 for v in self.lines.values())
        if reduced is not None and bool(reduced) != derived_reduced:
            raise InvalidTable(
                f"reduced={reduced} claimed but table is {'reduced' if derived_reduced else 'not reduced'}"
            )
        self.reduced = derived_reduced
        if isinstance(cone, Affine):
            gamma = vec(cone.gamma)
            if len(gamma) != self.rank or is_zero(gamma):
                raise InvalidTable("affine cone needs a nonzero rank-length gamma")
            cone = Affine(gamma)
        self.cone = cone
        self.seed_hint = vec(seed_hint) if seed_hint is not None else None
        # For truncated tables produced by a realization: the chamber keys known
        # to be interior (in-memory metadata, not part of the wire format).
        self.certified_keys = certified_keys
        self._coords_cache: dict = {}

    def __repr__(self) -> str:
        return f"RootSystemTable(rank={self.rank}, n_roots={len(self.roots)}, cone={self.cone})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RootSystemTable)
            and self.rank == other.rank
            and self.roots == other.roots
            and self.cone == other.cone
        )

    def __hash__(self) -> int:
        return hash((self.rank, self.roots, self.cone))

    @property
    def hyperplane_keys(self) -> tuple:
        return tuple(sorted(self.lines))

    def contains(self, root) -> bool:
        return vec(root) in set(self.roots)

    def positive_on(self, x: Vector) -> list:
        """One representative per line, the element positive at x (reduced tables)."""
        out = []
        for key, elems in sorted(self.lines.items()):
            s = sign_at(key, x)
            if s == 0:
                raise OnHyperplane(elems[0], x)
            rep = elems[0] if sign_at(elems[0], x) > 0 else vneg(elems[0])
            out.append((key, rep))
        return out

    def require_reduced(self) -> None:
        if not self.reduced:
            raise NonReducedTable(
                "chamber geometry needs a reduced table; call subarr.reduce first"
            )


# ---------------------------------------------------------------------------
# Chambers


@dataclass(frozen=True)
class Chamber:
    """An open simplicial chamber: indexed root basis, dual rays, and a witness point."""

    basis: tuple  # indexed root basis alpha_0..alpha_{r-1} (table elements)
    rays: tuple  # dual basis: alpha_i(rays[j]) = delta_ij
    witness: Vector

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def key(self) -> tuple:
        return canonical_basis_key(self.basis)

    def sign_key(self, table: RootSystemTable) -> dict:
        return {k: sign_at(k, self.witness) for k in table.lines}

    def __repr__(self) -> str:
        return f"Chamber(basis={self.basis})"


def make_chamber(basis: Sequence, witness: Vector) -> Chamber:
    return Chamber(tuple(basis), tuple(dual_basis(basis)), vec(witness))


@dataclass(frozen=True)
class Gallery:
    chambers: tuple
    crossings: tuple  # wall indices, len(chambers) - 1

    def __len__(self) -> int:
        return len(self.crossings)


def fmt_covector(cov) -> str:
    return "(" + ", ".join(str(c) for c in cov) + ")"


@dataclass(frozen=True)
class CoefficientWitness:
    """A wall-crossing relation beta_j = c * alpha_i + d * alpha_j that is not of
    the crystallographic shape (c a nonnegative integer, d = 1)."""

    i: int
    j: int
    root: Covector
    c: object
    d: object

    def __str__(self) -> str:
        return (
            f"crossing wall {self.i}: basis[{self.j}] -> "
            f"{fmt_covector(self.root)} = ({self.c})*a_{self.i} + ({self.d})*a_{self.j}"
        )


@dataclass(frozen=True)
class IntegralityWitness:
    """A root whose coordinates in a chamber basis are non-integral or sign-mixed."""

    chamber_key: tuple
    basis: tuple
    root: Covector
    coords: tuple
    kind: str  # "integrality" | "sign"

    def __str__(self) -> str:
        terms = " + ".join(
            f"({c})*{fmt_covector(b)}" for c, b in zip(self.coords, self.basis)
        )
        return f"{fmt_covector(self.root)} = {terms}  [{self.kind}]"


@dataclass(frozen=True)
class ChamberCartanData:
    chamber: Chamber
    matrix: GeneralizedCartanMatrix
    neighbors: tuple  # Chamber per wall index
    coefficients: tuple  # coefficients[i][j] = c with beta_j = c*a_i + a_j


# ---------------------------------------------------------------------------
# Walls and adjacency


def coords_in_chamber(table: RootSystemTable, chamber: Chamber, root) -> tuple:
    """Coordinates of a root in the chamber's basis, memoized per chamber."""
    cache = table._coords_cache.setdefault(chamber.basis, {})
    got = cache.get(root)
    if got is None:
        got = tuple(vdot(root, ray) for ray in chamber.rays)
        cache[root] = got
    return got


def chamber_from_point(table: RootSystemTable, x) -> Chamber:
    """The chamber containing x; x must be generic and inside the cone."""
    table.require_reduced()
    x = vec(x)
    if len(x) != table.rank:
        raise InvalidTable(f"point {x} does not have rank {table.rank}")
    if isinstance(table.cone, Affine) and sign_at(table.cone.gamma, x) <= 0:
        raise OutsideCone(f"gamma({x}) <= 0")
    positives = table.positive_on(x)  # raises OnHyperplane when not generic
    basis = _extreme_basis(table.rank, positives)
    return make_chamber(basis, x)


def walls_and_root_basis(table: RootSystemTable, x) -> tuple:
    """The indexed root basis (irredundant positive constraints) at a generic x."""
    table.require_reduced()
    x = vec(x)
    return _extreme_basis(table.rank, table.positive_on(x))


def _extreme_basis(rank: int, positives: Sequence[tuple]) -> tuple:
    """Facet-defining representatives among positive constraints of a simplicial cone.

    Rays are found as oriented nullspace lines of (rank-1)-subsets of the
    constraint hyperplanes; the cone must have exactly `rank` of them, and each
    wall is the unique constraint line vanishing on the other rank-1 rays.
    """
    if len(positives) < rank:
        raise NotSimplicial(f"only {len(positives)} lines in rank {rank}")
    keys = [k for k, _ in positives]
    reps = [r for _, r in positives]
    rays: list = []
    seen: set = set()
    if rank == 1:
        if len(positives) != 1:
            raise NotSimplicial("rank-1 tables have a single hyperplane line")
        return (reps[0],)
    for subset in itertools.combinations(range(len(keys)), rank - 1):
        rows = [keys[s] for s in subset]
        kernel = nullspace(rows)
        if len(kernel) != 1:
            continue
        gen = primitive_ray(kernel[0])
        signs = [sign_at(rep, gen) for rep in reps]
        if all(s >= 0 for s in signs):
            ray = gen
        elif all(s <= 0 for s in signs):
            ray = vneg(gen)
        else:
            continue
        if ray not in seen:
            seen.add(ray)
            rays.append(ray)
    if len(rays) != rank or mat_rank(rays) != rank:
        raise NotSimplicial(f"chamber has {len(rays)} extreme rays, expected {rank}")
    basis = []
    for m in range(rank):
        others = [rays[t] for t in range(rank) if t != m]
        wall = None
        for key, rep in positives:
            if all(vdot(key, d) == 0 for d in others):
                wall = rep
                break
        if wall is None:
            raise NotSimplicial("a facet of the chamber lies on no table hyperplane")
        if vdot(wall, rays[m]) <= 0:
            raise NotSimplicial("wall orientation inconsistent with chamber rays")
        basis.append(wall)
    basis.sort(key=primitive_ray)
    return tuple(basis)


def wall_is_crossable(table: RootSystemTable, chamber: Chamber, i: int) -> bool:
    """Whether the facet on wall i meets the open cone."""
    if not isinstance(table.cone, Affine):
        return True
    gamma = table.cone.gamma
    return any(vdot(gamma, chamber.rays[j]) > 0 for j in range(chamber.rank) if j != i)


def adjacent_chamber(table: RootSystemTable, chamber: Chamber, i: int, verify: bool = True) -> Chamber:
    """The chamber across wall i, with compatible indexing.

    Index i receives -alpha_i; every other index j receives the unique wall of
    the neighbor inside the plane spanned by alpha_i and alpha_j.  With
    verify=True the claimed basis is checked against the whole table: every
    root's coordinates must be nonzero and sign-coherent, which pins the claimed
    cone to a genuine chamber.
    """
    table.require_reduced()
    r = chamber.rank
    if not wall_is_crossable(table, chamber, i):
        raise WallOnBoundary(f"wall {i} of chamber {chamber.key} does not meet the cone")
    alpha_i = chamber.basis[i]
    neg_i = vneg(alpha_i)
    if neg_i not in set(table.roots):
        raise InvalidTable(f"missing negation {neg_i}")
    if r == 1:
        return make_chamber((neg_i,), vneg(chamber.witness))

    # Classify table roots by their support in the chamber basis.
    plane: dict[int, list] = {j: [] for j in range(r) if j != i}
    axis: list = []
    for root in table.roots:
        coords = coords_in_chamber(table, chamber, root)
        support = [k for k, c in enumerate(coords) if c != 0]
        if support == [i]:
            axis.append((coords[i], root))
        elif len(support) == 1 and support[0] != i:
            plane[support[0]].append((coords[i], coords[support[0]], root))
        elif len(support) == 2 and i in support:
            j = support[0] if support[1] == i else support[1]
            plane[j].append((coords[i], coords[j], root))

    new_basis = list(chamber.basis)
    new_basis[i] = neg_i
    for j, cands in plane.items():
        # Positivity just across the facet: d > 0, or d = 0 with c < 0.
        pos = [(c, d, root) for c, d, root in cands if d > 0] + [
            (c, ZERO, root) for c, root in axis if c < 0
        ]
        best = None
        for c, d, root in pos:
            if d == 0:
                continue  # the -alpha_i axis is the other extreme
            if best is None or c * best[1] - best[0] * d > 0:
                best = (c, d, root)
        if best is None:
            raise NotSimplicial(f"no wall found in the plane of indices {i},{j}")
        # best maximizes c/d: the extreme ray of the positive cone away from -alpha_i.
        new_basis[j] = best[2]
    new_chamber_basis = tuple(new_basis)

    witness = _witness_across(table, chamber, i)
    neighbor = make_chamber(new_chamber_basis, witness)
    if verify:
        _verify_chamber_basis(table, neighbor)
    return neighbor


def _witness_across(table: RootSystemTable, chamber: Chamber, i: int) -> Vector:
    """An interior point of the neighbor across wall i, found exactly."""
    r = chamber.rank
    if r == 1:
        return vneg(chamber.witness)
    facet_point = tuple(
        sum((chamber.rays[j][k] for j in range(r) if j != i), start=ZERO) for k in range(r)
    )
    d_i = chamber.rays[i]
    eps = None
    for root in table.roots:
        num = vdot(root, facet_point)
        den = vdot(root, d_i)
        if num != 0 and den != 0:
            bound = abs(num) / abs(den)
            if eps is None or bound < eps:
                eps = bound
    step = eps / 2 if eps is not None else ONE
    return vsub(facet_point, vscale(step, d_i))


def _verify_chamber_basis(table: RootSystemTable, chamber: Chamber) -> None:
    """Every root must have nonzero, sign-coherent coordinates in the basis.

    Together with the basis elements being table roots this pins the claimed
    simplicial cone to an actual chamber of the table's arrangement.
    """
    for root in table.roots:
        coords = coords_in_chamber(table, chamber, root)
        if all(c == 0 for c in coords):
            raise NotSimplicial(f"root {root} vanishes on the claimed chamber")
        if not (all(c >= 0 for c in coords) or all(c <= 0 for c in coords)):
            raise NotSimplicial(
                f"root {root} separates the claimed chamber {chamber.key}: coords {coords}"
            )


def cartan_matrix_at(table: RootSystemTable, chamber: Chamber) -> ChamberCartanData:
    """The generalized Cartan matrix read off from all wall crossings at a chamber.

    Raises NotCrystallographicAt with the offending relation when a transition
    coefficient is non-integral, negative, or the j-slot coefficient is not 1.
    """
    neighbors = []
    rows = []
    coeff_rows = []
    for i in range(chamber.rank):
        neighbor = adjacent_chamber(table, chamber, i)
        neighbors.append(neighbor)
        row = []
        coeffs = []
        for j in range(chamber.rank):
            if j == i:
                row.append(2)
                coeffs.append(-2)
                continue
            beta = neighbor.basis[j]
            coords = coords_in_chamber(table, chamber, beta)
            c, d = coords[i], coords[j]
            off_support = [k for k, v in enumerate(coords) if v != 0 and k not in (i, j)]
            if off_support or d != 1 or c.denominator != 1 or c < 0:
                raise NotCrystallographicAt(
                    chamber.key, CoefficientWitness(i, j, beta, c, d)
                )
            c_int = int(c)
            row.append(-c_int)
            coeffs.append(c_int)
        rows.append(tuple(row))
        coeff_rows.append(tuple(coeffs))
    matrix = GeneralizedCartanMatrix.from_rows(rows)
    return ChamberCartanData(chamber, matrix, tuple(neighbors), tuple(coeff_rows))


# ---------------------------------------------------------------------------
# Chamber BFS with certification


@dataclass
class ChamberAtlas:
    seed_key: tuple
    chambers: dict  # key -> Chamber
    edges: dict  # (key, i) -> key
    order: list  # BFS order of keys
    true_chambers: set  # keys whose rays all lie strictly inside the cone
    certified: set  # true chambers all of whose neighbors are true
    budget_exceeded: bool


def chamber_is_true(table: RootSystemTable, chamber: Chamber) -> bool | None:
    """Strict cone membership of all chamber rays; None when undecidable."""
    if isinstance(table.cone, Spherical):
        return True
    if isinstance(table.cone, Affine):
        gamma = table.cone.gamma
        return all(vdot(gamma, ray) > 0 for ray in chamber.rays)
    return None


def chamber_bfs(table: RootSystemTable, seed: Chamber, budget: int) -> ChamberAtlas:
    """Breadth-first chamber exploration from a seed chamber.

    For affine tables only chambers strictly inside the cone are expanded;
    crossings into non-simplicial frontier regions of truncations are recorded
    as missing edges instead of errors.
    """
    table.require_reduced()
    spherical = isinstance(table.cone, Spherical)
    chambers = {seed.key: seed}
    order = [seed.key]
    edges: dict = {}
    queue = deque([seed.key])
    budget_exceeded = False
    while queue:
        if len(order) > budget:
            budget_exceeded = True
            break
        key = queue.popleft()
        chamber = chambers[key]
        expand = chamber_is_true(table, chamber)
        if expand is False:
            continue
        for i in range(chamber.rank):
            if (key, i) in edges:
                continue
            if not wall_is_crossable(table, chamber, i):
                continue
            try:
                neighbor = adjacent_chamber(table, chamber, i)
            except NotSimplicial:
                if spherical:
                    raise
                continue
            nkey = neighbor.key
            stored = chambers.get(nkey)
            if stored is None:
                chambers[nkey] = neighbor
                order.append(nkey)
                queue.append(nkey)
                stored = neighbor
            elif stored.basis != neighbor.basis:
                raise NotSimplicial(
                    f"chamber {nkey} reached with conflicting compatible indexings"
                )
            edges[(key, i)] = nkey
            edges[(nkey, i)] = key
    true_chambers = {k for k in order if chamber_is_true(table, chambers[k])}
    certified = set()
    for k in true_chambers:
        chamber = chambers[k]
        ok = True
        for i in range(chamber.rank):
            nkey = edges.get((k, i))
            if nkey is None or nkey not in true_chambers:
                ok = False
                break
        if ok:
            certified.add(k)
    if isinstance(table.cone, Truncated):
        # Certification must come from the producing realization; without it no
        # chamber of a bare truncation can be trusted as interior.
        if table.certified_keys is not None:
            certified = {k for k in order if k in table.certified_keys}
        else:
            certified = set()
    return ChamberAtlas(seed.key, chambers, edges, order, true_chambers, certified, budget_exceeded)


def default_seed_chamber(table: RootSystemTable) -> Chamber:
    """Deterministic seed: weighted dual basis of the first independent root subset.

    Weights 1 + (i+1)/(r+1) break symmetry; if the point is non-generic or
    outside the cone, deterministic fallbacks (geometric weights, both signs)
    are tried.
    """
    if table.seed_hint is not None:
        return chamber_from_point(table, table.seed_hint)
    r = table.rank
    subset: list = []
    for root in table.roots:
        if mat_rank(subset + [root]) > len(subset):
            subset.append(root)
        if len(subset) == r:
            break
    if len(subset) < r:
        raise InvalidTable("table does not span; chamber geometry is degenerate")
    duals = dual_basis(subset)
    candidates = []
    weights = [ONE + Rat(i + 1, r + 1) for i in range(r)]
    candidates.append(tuple(sum((weights[i] * duals[i][k] for i in range(r)), start=ZERO) for k in range(r)))
    for m in (2, 3, 5, 7, 11, 13):
        w = [Rat(m) ** i for i in range(r)]
        candidates.append(tuple(sum((w[i] * duals[i][k] for i in range(r)), start=ZERO) for k in range(r)))
    for cand in candidates:
        for point in (cand, vneg(cand)):
            try:
                return chamber_from_point(table, point)
            except (OnHyperplane, OutsideCone):
                continue
    raise InvalidTable("no generic seed point found")


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class CheckReport:
    check: str
    passed: bool
    witnesses: tuple
    chambers_visited: int
    certified: int
    skipped: int
    budget_exceeded: bool

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def first_witness(self):
        return self.witnesses[0] if self.witnesses else None

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "witness": str(self.first_witness) if self.witnesses else None,
            "witnesses": [str(w) for w in self.witnesses],
            "chambers_visited": self.chambers_visited,
            "certified": self.certified,
            "skipped": self.skipped,
            "budget_exceeded": self.budget_exceeded,
        }


def _checkable_keys(table: RootSystemTable, atlas: ChamberAtlas) -> set:
    """Chambers whose data is trustworthy: the certified set when certification
    is available, every visited chamber for bare truncated tables."""
    if isinstance(table.cone, Truncated) and table.certified_keys is None:
        return set(atlas.order)
    return set(atlas.certified)


def _root_scan_order(coords_of, roots):
    """Scan roots smallest first: by l1-size of chamber coordinates, then lexicographically."""
    def sort_key(root):
        coords = coords_of(root)
        return (sum(abs(c) for c in coords), coords)

    return sorted(roots, key=sort_key)


def check_crystallographic(
    table: RootSystemTable, budget: int = 10_000, seed: Chamber | None = None, max_witnesses: int = 64
) -> CheckReport:
    """Integral, sign-coherent coordinates of every root at every certified chamber."""
    seed = seed if seed is not None else default_seed_chamber(table)
    atlas = chamber_bfs(table, seed, budget)
    if atlas.budget_exceeded:
        raise BudgetExceeded("chamber budget exhausted", partial=atlas)
    witnesses: list[IntegralityWitness] = []
    checked = _checkable_keys(table, atlas)
    for key in atlas.order:
        if key not in checked:
            continue
        chamber = atlas.chambers[key]
        coords_of = lambda root: coords_in_chamber(table, chamber, root)
        for root in _root_scan_order(coords_of, table.roots):
            coords = coords_of(root)
            kind = None
            if not (all(c >= 0 for c in coords) or all(c <= 0 for c in coords)):
                kind = "sign"
            elif any(c.denominator != 1 for c in coords):
                kind = "integrality"
            if kind:
                if all(c <= 0 for c in coords):
                    root, coords = vneg(root), vneg(coords)
                witnesses.append(IntegralityWitness(key, chamber.basis, root, coords, kind))
                if len(witnesses) >= max_witnesses:
                    break
        if len(witnesses) >= max_witnesses:
            break
    return CheckReport(
        "crystallographic",
        not witnesses,
        tuple(witnesses),
        len(atlas.order),
        len(atlas.certified),
        len(atlas.order) - len(checked),
        False,
    )


@dataclass(frozen=True)
class AdditiveWitness:
    chamber_key: tuple
    basis: tuple
    root: Covector
    coords: tuple

    def __str__(self) -> str:
        return f"positive root {self.root} (coords {self.coords}) is neither in the basis nor a sum of two positive roots"


def check_additive(
    table: RootSystemTable, budget: int = 10_000, seed: Chamber | None = None, max_witnesses: int = 64
) -> CheckReport:
    """Every positive root is a basis element or a sum of two positive roots."""
    seed = seed if seed is not None else default_seed_chamber(table)
    atlas = chamber_bfs(table, seed, budget)
    if atlas.budget_exceeded:
        raise BudgetExceeded("chamber budget exhausted", partial=atlas)
    witnesses: list[AdditiveWitness] = []
    checked = _checkable_keys(table, atlas)
    for key in atlas.order:
        if key not in checked:
            continue
        chamber = atlas.chambers[key]
        positives = [r for r in table.roots if sign_at(r, chamber.witness) > 0]
        positive_set = set(positives)
        basis_set = set(chamber.basis)
        coords_of = lambda root: coords_in_chamber(table, chamber, root)
        for root in _root_scan_order(coords_of, positives):
            if root in basis_set:
                continue
            if any(vsub(root, a) in positive_set for a in positives):
                continue
            witnesses.append(AdditiveWitness(key, chamber.basis, root, coords_of(root)))
            if len(witnesses) >= max_witnesses:
                break
        if len(witnesses) >= max_witnesses:
            break
    return CheckReport(
        "additive",
        not witnesses,
        tuple(witnesses),
        len(atlas.order),
        len(atlas.certified),
        len(atlas.order) - len(checked),
        False,
    )


# ---------------------------------------------------------------------------
# Cartan-graph extraction


@dataclass
class ExtractionResult:
    graph: CartanGraph
    root_sets: dict  # chamber key -> frozenset of integer coordinate vectors
    chambers: dict  # chamber key -> Chamber
    atlas: ChamberAtlas

    @property
    def certified(self) -> set:
        return set(self.atlas.certified)


def extract_cartan_graph(
    table: RootSystemTable,
    seed: Chamber | None = None,
    budget: int = 10_000,
    object_keys: set | None = None,
) -> ExtractionResult:
    """Chambers as objects, wall crossings as edges, Cartan matrix per chamber.

    `object_keys` restricts the object set (e.g. to a realization's certified
    interior); by default certified chambers are used when certification is
    available, else all visited chambers.
    """
    seed = seed if seed is not None else default_seed_chamber(table)
    atlas = chamber_bfs(table, seed, budget)
    if atlas.budget_exceeded:
        raise BudgetExceeded("chamber budget exhausted", partial=atlas)
    if object_keys is None:
        object_keys = _checkable_keys(table, atlas)
    matrices = {}
    root_sets = {}
    chambers = {}
    for key in atlas.order:
        if key not in object_keys:
            continue
        chamber = atlas.chambers[key]
        matrices[key] = _matrix_from_atlas(table, atlas, key)
        chambers[key] = chamber
        phi = []
        for root in table.roots:
            coords = coords_in_chamber(table, chamber, root)
            if any(c.denominator != 1 for c in coords):
                raise NotCrystallographicAt(
                    key,
                    IntegralityWitness(key, chamber.basis, root, coords, "integrality"),
                )
            phi.append(tuple(int(c) for c in coords))
        root_sets[key] = frozenset(phi)
    edges = {
        (a, i): b
        for (a, i), b in atlas.edges.items()
        if a in object_keys and b in object_keys
    }
    truncated = any(
        (key, i) not in edges
        for key in matrices
        for i in range(table.rank)
    )
    base = seed.key if seed.key in matrices else next(iter(matrices))
    graph = CartanGraph.explicit(matrices, edges, base, truncated=truncated)
    return ExtractionResult(graph, root_sets, chambers, atlas)


def _matrix_from_atlas(table: RootSystemTable, atlas: ChamberAtlas, key: tuple) -> GeneralizedCartanMatrix:
    """Cartan matrix at a chamber from crossings already discovered by the BFS."""
    chamber = atlas.chambers[key]
    rows = []
    for i in range(chamber.rank):
        nkey = atlas.edges.get((key, i))
        if nkey is None:
            raise BudgetExceeded(f"wall {i} of chamber {key} was not crossed", partial=atlas)
        neighbor = atlas.chambers[nkey]
        row = []
        for j in range(chamber.rank):
            if j == i:
                row.append(2)
                continue
            beta = neighbor.basis[j]
            coords = coords_in_chamber(table, chamber, beta)
            c, d = coords[i], coords[j]
            off_support = [k for k, v in enumerate(coords) if v != 0 and k not in (i, j)]
            if off_support or d != 1 or c.denominator != 1 or c < 0:
                raise NotCrystallographicAt(key, CoefficientWitness(i, j, beta, c, d))
            row.append(-int(c))
        rows.append(tuple(row))
    return GeneralizedCartanMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# Distance, galleries, radical, sphericity


def separating_keys(table: RootSystemTable, a: Chamber, b: Chamber) -> set:
    return {
        key
        for key in table.lines
        if sign_at(key, a.witness) != sign_at(key, b.witness)
    }


def distance_and_gallery(table: RootSystemTable, start: Chamber, goal: Chamber) -> tuple[int, Gallery]:
    """Separating-hyperplane count and a greedy minimal gallery realizing it."""
    table.require_reduced()
    total = len(separating_keys(table, start, goal))
    chambers = [start]
    crossings = []
    cur = start
    remaining = total
    while cur.key != goal.key:
        moved = False
        for i in range(cur.rank):
            if sign_at(cur.basis[i], goal.witness) < 0 and wall_is_crossable(table, cur, i):
                nxt = adjacent_chamber(table, cur, i)
                now = len(separating_keys(table, nxt, goal))
                if now != remaining - 1:
                    raise Unreachable(
                        f"crossing wall {i} changed separation {remaining} -> {now}"
                    )
                cur = nxt
                remaining = now
                chambers.append(cur)
                crossings.append(i)
                moved = True
                break
        if not moved:
            raise Unreachable(f"no crossable separating wall at {cur.key}")
    return total, Gallery(tuple(chambers), tuple(crossings))


def radical(table: RootSystemTable) -> tuple:
    """Basis of the intersection of all hyperplanes (the whole space if empty)."""
    if not table.roots:
        return tuple(
            tuple(ONE if j == i else ZERO for j in range(table.rank))
            for i in range(table.rank)
        )
    return tuple(nullspace(list(table.roots)))


def is_nondegenerate(table: RootSystemTable) -> bool:
    return len(radical(table)) == 0


@dataclass(frozen=True)
class KSphericalWitness:
    chamber_key: tuple
    face_indices: tuple

    def __str__(self) -> str:
        return f"codim-{len(self.face_indices)} face {self.face_indices} of chamber {self.chamber_key} misses the cone"


def check_k_spherical(
    table: RootSystemTable, k: int, budget: int = 10_000, seed: Chamber | None = None
) -> CheckReport:
    """Does every codimension-k face of a chamber meet the open cone?"""
    if isinstance(table.cone, Truncated):
        raise Unsupported("k-sphericity is undefined for truncated tables (no cone)")
    if not 0 <= k <= table.rank:
        raise ValueError(f"k must be between 0 and {table.rank}")
    if isinstance(table.cone, Spherical):
        return CheckReport("k-spherical", True, (), 0, 0, 0, False)
    gamma = table.cone.gamma
    seed = seed if seed is not None else default_seed_chamber(table)
    atlas = chamber_bfs(table, seed, budget)
    if atlas.budget_exceeded:
        raise BudgetExceeded("chamber budget exhausted", partial=atlas)
    witnesses = []
    for key in atlas.order:
        if key not in atlas.true_chambers:
            continue
        chamber = atlas.chambers[key]
        for face in itertools.combinations(range(chamber.rank), k):
            spanning = [j for j in range(chamber.rank) if j not in face]
            if not any(vdot(gamma, chamber.rays[j]) > 0 for j in spanning):
                witnesses.append(KSphericalWitness(key, face))
    return CheckReport(
        "k-spherical",
        not witnesses,
        tuple(witnesses),
        len(atlas.order),
        len(atlas.certified),
        0,
        False,
    )


# ---------------------------------------------------------------------------
# Combinatorial equivalence (verification of a supplied g only)


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    reason: str | None

    @property
    def status(self) -> str:
        return "pass" if self.equivalent else "fail"


def verify_combinatorial_equivalence(
    table_a: RootSystemTable, table_b: RootSystemTable, g: Sequence[Sequence]
) -> EquivalenceReport:
    """Check that the linear map g sends table_a's data onto table_b's exactly."""
    from .exactlin import inverse

    g_rows = tuple(vec(row) for row in g)
    g_inv = inverse(g_rows)
    image = {tuple(vdot(alpha, tuple(g_inv[k][j] for k in range(table_a.rank))) for j in range(table_a.rank)) for alpha in table_a.roots}
    if image != set(table_b.roots):
        return EquivalenceReport(False, "g does not map the root set onto the target root set")
    ca, cb = table_a.cone, table_b.cone
    if isinstance(ca, Spherical) != isinstance(cb, Spherical):
        return EquivalenceReport(False, "cone types differ")
    if isinstance(ca, Affine):
        if not isinstance(cb, Affine):
            return EquivalenceReport(False, "cone types differ")
        gamma_image = tuple(
            vdot(ca.gamma, tuple(g_inv[k][j] for k in range(table_a.rank)))
            for j in range(table_a.rank)
        )
        if primitive_ray(gamma_image) != primitive_ray(cb.gamma):
            return EquivalenceReport(False, "g does not map the cone onto the target cone")
    return EquivalenceReport(True, None)

"""Geometric realization of a connected simply connected Cartan graph.

Each object b receives an indexed basis B^b of covectors (the base object gets
the standard dual basis) propagated across edges by the reflection action, the
chamber K^b is the open cone cut out by B^b, and the realized root table is the
negation closure of all basis elements found within the generation depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from ._rational import ONE, ZERO, Rat
from .arrangement import (
    Chamber,
    RootSystemTable,
    Spherical,
    Truncated,
    chamber_from_point,
    extract_cartan_graph,
)
from .cartan import (
    CartanGraph,
    apply_reflection_to_basis,
    canonical_basis_key,
    residue as graph_residue,
    standard_dual_basis,
)
from .errors import (
    AxiomViolation,
    BudgetExceeded,
    NotSimplyConnected,
)
from .exactlin import (
    dual_basis,
    primitive_ray,
    solve_unique,
    vdot,
    vec,
    vneg,
)

ObjectId = Hashable


@dataclass
class Realization:
    graph: CartanGraph
    base: ObjectId
    depth: int
    bases: dict  # object -> indexed covector basis
    rays: dict  # object -> dual basis vectors
    edges: dict  # (object, i) -> object
    order: list  # BFS order
    table: RootSystemTable
    complete: bool
    certified: frozenset  # objects with every neighbor generated
    canon: dict  # object -> canonical chamber key
    gamma: tuple | None  # derived functional with value 1 on every chamber ray, if one exists

    @property
    def rank(self) -> int:
        return self.graph.rank

    def basis_of(self, obj: ObjectId) -> tuple:
        return self.bases[obj]

    def chamber_of(self, obj: ObjectId) -> Chamber:
        return Chamber(self.bases[obj], self.rays[obj], _interior_point(self.rays[obj]))


def _interior_point(rays: Sequence) -> tuple:
    r = len(rays)
    weights = [ONE + Rat(i + 1, r + 1) for i in range(r)]
    return tuple(sum((weights[i] * rays[i][k] for i in range(r)), start=ZERO) for k in range(r))


def realize(graph: CartanGraph, base: ObjectId | None = None, depth: int = 8) -> Realization:
    """Generate chambers and roots to the given depth and assemble the table.

    Raises NotSimplyConnected when two words reach one object with different
    bases or two objects with the same chamber, and AxiomViolation when a
    realized root fails to be sign-coherent at some generated chamber.
    """
    base = base if base is not None else graph.base
    rank = graph.rank
    dist, edges, closed = graph.ball(base, depth)
    order = sorted(dist, key=lambda o: (dist[o], str(o)))
    bases: dict = {base: standard_dual_basis(rank)}
    for obj in order:
        if obj not in bases:
            continue
        for i in range(rank):
            nxt = edges.get((obj, i))
            if nxt is None or nxt in bases or dist[nxt] != dist[obj] + 1:
                continue
            bases[nxt] = apply_reflection_to_basis(bases[obj], graph.matrix(obj), i)
    missing = [o for o in order if o not in bases]
    if missing:
        raise AxiomViolation(f"objects unreachable by tree edges: {missing[:3]}")
    # Every non-tree edge must reproduce the stored basis: loops act trivially.
    for (obj, i), nxt in edges.items():
        expect = apply_reflection_to_basis(bases[obj], graph.matrix(obj), i)
        if expect != bases[nxt]:
            raise NotSimplyConnected(
                f"edge {i} at {obj} reaches {nxt} with a conflicting basis"
            )
    canon: dict = {}
    seen_keys: dict = {}
    for obj, basis in bases.items():
        key = canonical_basis_key(basis)
        other = seen_keys.get(key)
        if other is not None and other != obj:
            raise NotSimplyConnected(f"objects {other} and {obj} realize the same chamber")
        seen_keys[key] = obj
        canon[obj] = key

    roots = set()
    for basis in bases.values():
        for beta in basis:
            roots.add(beta)
            roots.add(vneg(beta))
    cone = Spherical() if closed else Truncated(depth)

    rays = {obj: tuple(dual_basis(basis)) for obj, basis in bases.items()}
    certified = frozenset(
        obj
        for obj in order
        if all(edges.get((obj, i)) is not None for i in range(rank))
    )
    table = RootSystemTable(
        rank,
        roots,
        cone=cone,
        seed_hint=_interior_point(rays[base]),
        certified_keys=frozenset(canon[obj] for obj in certified),
    )
    for obj, basis in bases.items():
        for root in table.roots:
            coords = [vdot(root, ray) for ray in rays[obj]]
            if all(c == 0 for c in coords):
                raise AxiomViolation(f"root {root} vanishes on chamber of {obj}")
            if not (all(c >= 0 for c in coords) or all(c <= 0 for c in coords)):
                raise AxiomViolation(
                    f"root {root} is not sign-coherent at {obj}: coords {coords}"
                )
            if any(c.denominator != 1 for c in coords):
                raise AxiomViolation(
                    f"root {root} has non-integral coordinates at {obj}: coords {coords}"
                )
    gamma = _derive_affine_functional(rank, rays.values())
    return Realization(
        graph=graph,
        base=base,
        depth=depth,
        bases=bases,
        rays=rays,
        edges=dict(edges),
        order=order,
        table=table,
        complete=closed,
        certified=certified,
        canon=canon,
        gamma=gamma,
    )


def _derive_affine_functional(rank: int, ray_families) -> tuple | None:
    """A covector h with h(ray) = 1 on every primitive chamber ray, if unique.

    Affine arrangements place all chamber rays on one affine hyperplane, which
    h recovers; spherical data admits no such h.
    """
    points = set()
    for rays in ray_families:
        for ray in rays:
            points.add(primitive_ray(ray))
    if len(points) <= rank:
        return None
    rows = sorted(points)
    return solve_unique(rows, [ONE] * len(rows))


# ---------------------------------------------------------------------------
# Separation, adjacency, point location


@dataclass(frozen=True)
class SeparatingSet:
    pair: tuple
    keys: frozenset

    def __len__(self) -> int:
        return len(self.keys)


def side_of(re: Realization, obj: ObjectId, root) -> int:
    """+1/-1 side of the chamber K^obj relative to a realized root's hyperplane."""
    coords = [vdot(root, ray) for ray in re.rays[obj]]
    if all(c >= 0 for c in coords) and any(c > 0 for c in coords):
        return 1
    if all(c <= 0 for c in coords) and any(c < 0 for c in coords):
        return -1
    raise AxiomViolation(f"root {root} is not sign-coherent at {obj}")


def separating_set(re: Realization, b: ObjectId, b2: ObjectId) -> SeparatingSet:
    """Hyperplanes with the two chambers on opposite sides."""
    keys = set()
    for key in re.table.lines:
        rep = re.table.lines[key][0]
        if side_of(re, b, rep) != side_of(re, b2, rep):
            keys.add(key)
    return SeparatingSet((b, b2), frozenset(keys))


def gallery_distance(re: Realization, b: ObjectId, b2: ObjectId) -> int:
    """Graph distance between the two objects inside the generated region."""
    if b == b2:
        return 0
    from collections import deque

    seen = {b: 0}
    queue = deque([b])
    while queue:
        cur = queue.popleft()
        for i in range(re.rank):
            nxt = re.edges.get((cur, i))
            if nxt is None or nxt in seen:
                continue
            seen[nxt] = seen[cur] + 1
            if nxt == b2:
                return seen[nxt]
            queue.append(nxt)
    raise BudgetExceeded(f"{b2} not reachable from {b} in the generated region")


@dataclass(frozen=True)
class AdjacencyEquivalence:
    i_adjacent: bool
    rho_matches: bool
    sandwich: bool | None  # None when the region is incomplete
    separating_singleton: bool

    def all_agree(self) -> bool:
        values = {self.i_adjacent, self.rho_matches, self.separating_singleton}
        if self.sandwich is not None:
            values.add(self.sandwich)
        return len(values) == 1


def adjacency_equivalences_test(
    re: Realization, b: ObjectId, b2: ObjectId, i: int
) -> AdjacencyEquivalence:
    """Evaluate the four equivalent adjacency characterizations independently."""
    basis_b, basis_b2 = re.bases[b], re.bases[b2]
    rays_b, rays_b2 = re.rays[b], re.rays[b2]
    wall = re.bases[b][i]

    def in_closure(point, basis) -> bool:
        return all(vdot(beta, point) >= 0 for beta in basis)

    shared = [ray for ray in rays_b if in_closure(ray, basis_b2)]
    shared += [ray for ray in rays_b2 if in_closure(ray, basis_b) and ray not in shared]
    from .exactlin import rank as mat_rank

    if b == b2:
        i_adjacent = False
    else:
        i_adjacent = (
            len(shared) >= 1
            and mat_rank(shared) == re.rank - 1
            and all(vdot(wall, s) == 0 for s in shared)
        )

    rho_matches = re.edges.get((b, i)) == b2 and b != b2

    constraints = [basis_b[j] for j in range(re.rank) if j != i]
    constraints += [basis_b2[j] for j in range(re.rank) if j != i]
    expected = {b, b2}
    sandwich: bool | None = True
    for obj in re.order:
        centroid = _interior_point(re.rays[obj])
        inside = all(vdot(c, centroid) > 0 for c in constraints)
        if inside != (obj in expected):
            sandwich = False
            break
    if sandwich and not re.complete:
        sandwich = None
    if b == b2 and sandwich is not False:
        sandwich = False

    sep = separating_set(re, b, b2)
    separating_singleton = sep.keys == {_line_key(wall)}
    return AdjacencyEquivalence(i_adjacent, rho_matches, sandwich, separating_singleton)


def _line_key(covector):
    from .exactlin import primitive_normalize

    return primitive_normalize(covector)


@dataclass(frozen=True)
class LocateResult:
    status: str  # "found" | "not_in_cone" | "budget_exceeded"
    obj: ObjectId | None
    steps: int

    @property
    def found(self) -> bool:
        return self.status == "found"


def locate_point(re: Realization, x, budget: int = 10_000) -> LocateResult:
    """Greedy gallery walk toward x, crossing the lowest-index violated wall.

    Returns not_in_cone only with a certificate: a derived affine functional
    that is 1 on every chamber ray and nonpositive at x.
    """
    x = vec(x)
    if all(c == 0 for c in x):
        raise ValueError("cannot locate the zero vector")
    if re.gamma is not None and vdot(re.gamma, x) <= 0:
        return LocateResult("not_in_cone", None, 0)
    cur = re.base
    steps = 0
    while True:
        values = [vdot(beta, x) for beta in re.bases[cur]]
        violated = [j for j, v in enumerate(values) if v < 0]
        if not violated:
            return LocateResult("found", cur, steps)
        j = violated[0]
        nxt = re.edges.get((cur, j))
        if nxt is None:
            return LocateResult("budget_exceeded", cur, steps)
        cur = nxt
        steps += 1
        if steps > budget:
            return LocateResult("budget_exceeded", cur, steps)


@dataclass
class LocalGraphResult:
    indices: tuple  # I_x inside the ambient index set
    roots: tuple  # realized roots vanishing at x
    graph: CartanGraph | None  # None when the localization is empty
    base_obj: ObjectId
    integer_roots: dict  # residue object -> frozenset of integer coordinate vectors


def local_cartan_graph_at(re: Realization, x, budget: int = 10_000) -> LocalGraphResult:
    """The finite local Cartan graph at a point of the closed cone."""
    x = vec(x)
    located = locate_point(re, x, budget)
    if not located.found:
        raise BudgetExceeded(f"point location failed: {located.status}")
    b = located.obj
    basis = re.bases[b]
    indices = tuple(i for i in range(re.rank) if vdot(basis[i], x) == 0)
    roots_x = tuple(r for r in re.table.roots if vdot(r, x) == 0)
    if not indices:
        if roots_x:
            raise AxiomViolation("roots vanish at x but no wall of its chamber does")
        return LocalGraphResult((), (), None, b, {})
    sub = graph_residue(re.graph, b, indices, budget)
    # Bases of residue objects, propagated from b along residue edges so that
    # they stay consistent with the ambient realization even past its depth.
    local_bases = {b: re.bases[b]}
    from collections import deque

    queue = deque([b])
    while queue:
        cur = queue.popleft()
        for k, amb_i in enumerate(indices):
            nxt = sub.rho(k, cur)
            if nxt is None or nxt in local_bases:
                continue
            local_bases[nxt] = apply_reflection_to_basis(
                local_bases[cur], re.graph.matrix(cur), amb_i
            )
            queue.append(nxt)
    integer_roots = {}
    for obj in sub.objects:
        rays = dual_basis(local_bases[obj])
        per = set()
        for root in roots_x:
            coords = tuple(vdot(root, ray) for ray in rays)
            if any(c.denominator != 1 for c in coords):
                raise AxiomViolation(f"localized root {root} non-integral at {obj}")
            per.add(tuple(int(coords[i]) for i in indices))
        integer_roots[obj] = frozenset(per)
    return LocalGraphResult(indices, roots_x, sub, b, integer_roots)


# ---------------------------------------------------------------------------
# Round trip


@dataclass(frozen=True)
class RoundTripReport:
    equivalent: bool
    objects_compared: int
    index_map: tuple | None  # phi_0 as a tuple: graph index -> chamber index
    mismatches: tuple

    @property
    def status(self) -> str:
        return "pass" if self.equivalent else "fail"


def roundtrip_check(
    graph: CartanGraph, base: ObjectId | None = None, depth: int = 8, budget: int = 10_000
) -> RoundTripReport:
    """realize, re-extract, and compare matrices and edges object-by-object.

    Objects are matched through their canonical chamber keys, and indices by
    matching the base object's basis covectors, so no combinatorial search is
    needed.  Comparison is restricted to the certified interior.
    """
    re = realize(graph, base, depth)
    table = re.table
    seed = chamber_from_point(table, _interior_point(re.rays[re.base]))
    wanted = {re.canon[obj] for obj in re.certified}
    extraction = extract_cartan_graph(table, seed, budget, object_keys=wanted)
    mismatches = []

    base_chamber = extraction.chambers.get(re.canon[re.base])
    if base_chamber is None:
        return RoundTripReport(False, 0, None, ("base chamber not extracted",))
    phi0 = []
    for i in range(re.rank):
        beta = re.bases[re.base][i]
        matches = [k for k, alpha in enumerate(base_chamber.basis) if alpha == beta]
        if len(matches) != 1:
            return RoundTripReport(False, 0, None, (f"basis covector {beta} unmatched",))
        phi0.append(matches[0])
    phi0 = tuple(phi0)

    compared = 0
    for obj in re.certified:
        key = re.canon[obj]
        ext_chamber = extraction.chambers.get(key)
        if ext_chamber is None:
            mismatches.append(f"chamber {key} missing from extraction")
            continue
        expected_basis = tuple(re.bases[obj][i] for i in range(re.rank))
        actual_basis = tuple(ext_chamber.basis[phi0[i]] for i in range(re.rank))
        if expected_basis != actual_basis:
            mismatches.append(f"object {obj}: basis indexing differs")
            continue
        gm = graph.matrix(obj)
        ext_matrix = None
        try:
            ext_matrix = extraction.graph.matrix(key)
        except KeyError:
            mismatches.append(f"object {obj}: no extracted matrix")
            continue
        for i in range(re.rank):
            for j in range(re.rank):
                a = gm.rows[i][j]
                bb = ext_matrix.rows[phi0[i]][phi0[j]]
                if a != bb:
                    mismatches.append(
                        f"object {obj}: matrix entry ({i},{j}) is {a} in the graph, {bb} extracted"
                    )
                    break
            else:
                continue
            break
        for i in range(re.rank):
            nxt = re.edges.get((obj, i))
            ext_next = extraction.graph.rho(phi0[i], key)
            if nxt is not None and ext_next is not None and re.canon[nxt] != ext_next:
                mismatches.append(f"object {obj}: edge {i} disagrees")
        compared += 1
    return RoundTripReport(not mismatches, compared, phi0, tuple(mismatches))

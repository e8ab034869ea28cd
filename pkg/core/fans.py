"""
Cones and fans: validation, face posets, stars, quotient fans, wedges,
completeness and fan isomorphisms

All checks are exact; cone membership is decided by integer functionals built
from the adjugate of each cone's Gram matrix.
"""

import itertools
import math
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx
from sympy import ImmutableMatrix, diag, eye

from core.lattice import (
    compose_quotients,
    factor_quotient,
    integer_kernel,
    is_unimodular,
    matrix_rank,
    primitive,
    quotient_map,
    saturate,
    unimodular_completion,
)
from models.fan import ZERO_CONE, Cone, Fan, FanIso, FanViolation, QuotientFan, sort_cones
from models.lattice import as_tuple, column, int_matrix, matrix_rows
from utils.exceptions import FanValidationError, IsomorphismSearchError, LatticeError
from utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_MAX_SEARCH_RANK = 4
DEFAULT_MAX_SEARCH_RAYS = 64


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def close_faces(cones: Iterable[Iterable[int]]) -> frozenset:
    """Face closure of a collection of ray-index sets, always including the zero cone"""
    closed: Set[Cone] = {ZERO_CONE}
    for indices in cones:
        top = Cone.of(indices)
        for k in range(top.dim + 1):
            for face in itertools.combinations(top.ray_indices, k):
                closed.add(Cone(face))
    return frozenset(closed)


def build_fan(
    rank: int,
    rays: Sequence[Sequence[int]],
    cones: Iterable[Iterable[int]],
    name: Optional[str] = None,
) -> Fan:
    """
    Build a fan from rays and (maximal) cones, closing under faces

    No validation happens here; use validate_fan or ensure_valid_fan.
    """
    return Fan(
        rank=rank,
        rays=tuple(tuple(int(x) for x in r) for r in rays),
        cones=close_faces(cones),
        name=name,
    )


# ---------------------------------------------------------------------------
# Exact cone membership
# ---------------------------------------------------------------------------

def facet_functionals(generators: ImmutableMatrix) -> ImmutableMatrix:
    """
    Integer functionals measuring the coordinates of a point in a simplicial cone

    For independent generator rows G, F = adj(G Gᵀ) · G satisfies
    F · (Gᵀ λ) = det(G Gᵀ) · λ with det(G Gᵀ) > 0, so on span(G) the point lies in
    the cone iff every row of F pairs nonnegatively with it.
    """
    k = generators.rows
    if k <= 1:
        return generators
    gram = generators * generators.T
    return ImmutableMatrix(gram.adjugate() * generators)


def _pairings(functionals: ImmutableMatrix, x: Sequence[int]) -> List[int]:
    if functionals.rows == 0:
        return []
    return list(as_tuple(functionals * column(x)))


MembershipCertificate = Tuple[ImmutableMatrix, ImmutableMatrix]


def membership_certificate(f: Fan, cone: Cone) -> MembershipCertificate:
    """(perp basis, facet functionals) deciding membership in the cone"""
    gens = f.generators(cone)
    return integer_kernel(gens), facet_functionals(gens)


def cone_contains(
    f: Fan,
    cone: Cone,
    x: Sequence[int],
    certificate: Optional[MembershipCertificate] = None,
) -> bool:
    """Exact test x ∈ cone"""
    if cone.is_zero:
        return not any(x)
    perp, functionals = certificate or membership_certificate(f, cone)
    if perp.rows and any(_pairings(perp, x)):
        return False
    return all(v >= 0 for v in _pairings(functionals, x))


def _intersection_escape(f: Fan, a: Cone, b: Cone) -> Optional[Tuple[int, ...]]:
    # Extreme rays of cone(a) ∩ cone(b) inside span(a) ∩ span(b); one that leaves
    # the shared face witnesses a violation of the intersection axiom.
    shared = set(a.ray_indices) & set(b.ray_indices)
    ga, gb = f.generators(a), f.generators(b)
    stacked = matrix_rows(integer_kernel(ga)) + matrix_rows(integer_kernel(gb))
    v_basis = integer_kernel(int_matrix(stacked, f.rank))
    d = v_basis.rows
    if d == 0:
        return None

    rows = matrix_rows(facet_functionals(ga)) + matrix_rows(facet_functionals(gb))
    strict = [i for i, ray in enumerate(a.ray_indices) if ray not in shared]
    strict += [len(a.ray_indices) + i for i, ray in enumerate(b.ray_indices) if ray not in shared]
    functionals = int_matrix(rows, f.rank)
    restricted = matrix_rows(functionals * v_basis.T)

    for tight in itertools.combinations(range(len(rows)), d - 1):
        system = int_matrix([restricted[i] for i in tight], d)
        if matrix_rank(system) != d - 1:
            continue
        direction = integer_kernel(system)
        if direction.rows != 1:
            continue
        x = as_tuple(direction * v_basis)
        for sign in (1, -1):
            candidate = tuple(sign * t for t in x)
            values = _pairings(functionals, candidate)
            if all(v >= 0 for v in values) and any(values[i] > 0 for i in strict):
                return candidate
    return None


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_fan(f: Fan) -> List[FanViolation]:
    """
    Check the fan axioms exactly

    Args:
        f: Fan to check

    Returns:
        List of violations; empty means the fan is valid
    """
    violations: List[FanViolation] = []
    n = f.rank

    if n < 0:
        return [FanViolation("bad_rank", f"Rank must be nonnegative, got {n}")]

    structural_ok = True
    seen: Dict[Tuple[int, ...], int] = {}
    for i, ray in enumerate(f.rays):
        if len(ray) != n:
            violations.append(FanViolation("bad_ray_length", f"Ray {i} has length {len(ray)}, expected {n}", (f"ray {i}",)))
            structural_ok = False
            continue
        if not any(ray):
            violations.append(FanViolation("zero_ray", f"Ray {i} is the zero vector", (f"ray {i}",)))
            structural_ok = False
            continue
        if math.gcd(*ray) != 1:
            violations.append(FanViolation("non_primitive_ray", f"Ray {i} = {list(ray)} is not primitive", (f"ray {i}",)))
        if ray in seen:
            violations.append(FanViolation(
                "duplicate_ray",
                f"Rays {seen[ray]} and {i} are both {list(ray)}",
                (f"ray {seen[ray]}", f"ray {i}"),
            ))
            structural_ok = False
        else:
            seen[ray] = i

    if ZERO_CONE not in f.cones:
        violations.append(FanViolation("missing_face", "The zero cone is missing", (ZERO_CONE.label,)))

    used: Set[int] = set()
    checkable: List[Cone] = []
    for cone in f.sorted_cones():
        if any(i < 0 or i >= len(f.rays) for i in cone.ray_indices):
            violations.append(FanViolation("bad_index", f"Cone {cone.label} references a missing ray", (cone.label,)))
            structural_ok = False
            continue
        used.update(cone.ray_indices)
        for facet in cone.facets():
            if facet not in f.cones:
                violations.append(FanViolation(
                    "missing_face", f"Face {facet.label} of cone {cone.label} is missing", (facet.label, cone.label)
                ))
        if structural_ok and matrix_rank(f.generators(cone)) < cone.dim:
            violations.append(FanViolation(
                "dependent_rays", f"Rays of cone {cone.label} are linearly dependent", (cone.label,)
            ))
            continue
        checkable.append(cone)

    for i in range(len(f.rays)):
        if i not in used:
            violations.append(FanViolation("unused_ray", f"Ray {i} is not in any cone", (f"ray {i}",)))

    if structural_ok:
        cones = set(checkable)
        maximal = [c for c in checkable if not any(c != d and c.is_face_of(d) for d in cones)]
        for a, b in itertools.combinations(maximal, 2):
            escape = _intersection_escape(f, a, b)
            if escape is not None:
                shared = Cone.of(set(a.ray_indices) & set(b.ray_indices))
                violations.append(FanViolation(
                    "intersection",
                    f"Cones {a.label} and {b.label} meet at {list(escape)} outside their common face {shared.label}",
                    (a.label, b.label),
                ))

    if violations:
        logger.debug(f"Fan {f.name or ''} has {len(violations)} violation(s)")
    return violations


def ensure_valid_fan(f: Fan) -> Fan:
    """Return f if valid, raise FanValidationError otherwise"""
    violations = validate_fan(f)
    if violations:
        raise FanValidationError(f"Fan {f.name or ''} is invalid: {violations[0]}", violations)
    return f


# ---------------------------------------------------------------------------
# Posets, stars, quotients, wedges
# ---------------------------------------------------------------------------

def face_poset(f: Fan) -> nx.DiGraph:
    """
    Hasse diagram of the cones of f under face inclusion

    Edges point from a facet to the cone it bounds; the zero cone is the
    unique minimum.
    """
    poset = nx.DiGraph()
    for cone in f.sorted_cones():
        poset.add_node(cone, dim=cone.dim, label=cone.label)
    for cone in f.sorted_cones():
        for facet in cone.facets():
            if facet in f.cones:
                poset.add_edge(facet, cone)
    return poset


def star(f: Fan, sigma: Cone) -> List[Cone]:
    """All cones τ of f with σ ⊆ τ"""
    f.require(sigma)
    return [tau for tau in f.sorted_cones() if sigma.is_face_of(tau)]


def quotient_fan(f: Fan, sigma: Cone) -> QuotientFan:
    """
    The quotient fan Σ/σ in M/⟨σ⟩

    Args:
        f: Valid fan
        sigma: A cone of f

    Returns:
        QuotientFan with the canonical quotient map, the fan of images of
        cones in star(σ), and the map τ ↦ τ/⟨σ⟩

    Raises:
        ConeNotInFanError: If sigma is not a cone of f
    """
    members = star(f, sigma)
    q = quotient_map(f.rank, f.generators(sigma))
    sigma_rays = set(sigma.ray_indices)

    link = sorted({i for tau in members for i in tau.ray_indices} - sigma_rays)
    index_of_image: Dict[Tuple[int, ...], int] = {}
    image_of_ray: Dict[int, int] = {}
    rays: List[Tuple[int, ...]] = []
    lift: List[int] = []
    for i in link:
        try:
            image = primitive(q.apply(f.rays[i]))
        except LatticeError:
            raise FanValidationError(f"Ray {i} lies in the span of {sigma.label}; fan is not simplicial")
        if image not in index_of_image:
            index_of_image[image] = len(rays)
            rays.append(image)
            lift.append(i)
        image_of_ray[i] = index_of_image[image]

    cone_map = {
        tau: Cone.of(image_of_ray[i] for i in tau.ray_indices if i not in sigma_rays)
        for tau in members
    }
    name = f"{f.name}/{sigma.label}" if f.name and not sigma.is_zero else f.name
    g = Fan(rank=q.target_rank, rays=tuple(rays), cones=frozenset(cone_map.values()), name=name)
    logger.debug(f"Quotient {f.name or 'fan'}/{sigma.label}: rank {g.rank}, {len(g.cones)} cones")
    return QuotientFan(base=f, sigma=sigma, q=q, g=g, cone_map=cone_map, ray_lift=tuple(lift))


def wedge(f: Fan, s1: Cone, s2: Cone) -> Optional[Cone]:
    """
    Smallest cone of f containing both s1 and s2, or None

    In a face-closed simplicial fan any cone containing both contains the cone
    on the union of their rays, so that cone is the minimum when present.
    """
    f.require(s1)
    f.require(s2)
    union = s1.union(s2)
    return union if union in f.cones else None


# ---------------------------------------------------------------------------
# Completeness
# ---------------------------------------------------------------------------

def completeness_test_directions(f: Fan) -> List[Tuple[int, ...]]:
    """± rays, ± coordinate vectors and ± pairwise sums and differences of rays"""
    directions: Set[Tuple[int, ...]] = set()
    basis = [tuple(1 if i == j else 0 for j in range(f.rank)) for i in range(f.rank)]
    for v in list(f.rays) + basis:
        directions.add(tuple(v))
        directions.add(tuple(-x for x in v))
    for r, s in itertools.combinations(f.rays, 2):
        for combo in (tuple(a + b for a, b in zip(r, s)), tuple(a - b for a, b in zip(r, s))):
            if any(combo):
                directions.add(combo)
                directions.add(tuple(-x for x in combo))
    return sorted(directions)


def is_complete(f: Fan) -> bool:
    """
    Whether the support of f is all of M_R

    Decided by the facet-pairing criterion (every (rank−1)-cone bounds exactly
    two top cones, all maximal cones are top-dimensional) and certified by
    exact membership of a finite set of test directions.
    """
    n = f.rank
    if n == 0:
        return True
    maximal = f.maximal_cones()
    if any(c.dim != n for c in maximal):
        return False
    for ridge in f.cones_of_dim(n - 1):
        if sum(1 for c in maximal if ridge.is_face_of(c)) != 2:
            return False
    certificates = {c: membership_certificate(f, c) for c in maximal}
    for x in completeness_test_directions(f):
        if not any(cone_contains(f, c, x, certificates[c]) for c in maximal):
            logger.debug(f"Direction {list(x)} is not covered by {f.name or 'fan'}")
            return False
    return True


# ---------------------------------------------------------------------------
# Isomorphisms
# ---------------------------------------------------------------------------

def _apply(lattice_map: ImmutableMatrix, v: Sequence[int]) -> Tuple[int, ...]:
    if lattice_map.rows == 0:
        return ()
    return as_tuple(lattice_map * column(v))


def verify_fan_iso(f: Fan, g: Fan, iso: FanIso) -> bool:
    """Check that iso is an isomorphism of fans f → g"""
    n = f.rank
    if g.rank != n or len(f.rays) != len(g.rays) or len(f.cones) != len(g.cones):
        return False
    if iso.lattice_iso.shape != (n, n) or not is_unimodular(iso.lattice_iso):
        return False
    if sorted(iso.ray_bijection) != list(range(len(g.rays))):
        return False
    for i, ray in enumerate(f.rays):
        if _apply(iso.lattice_iso, ray) != g.rays[iso.ray_bijection[i]]:
            return False
    return frozenset(iso.map_cone(c) for c in f.cones) == g.cones


def induced_fan_iso(f: Fan, g: Fan, lattice_map: ImmutableMatrix) -> Optional[FanIso]:
    """The fan isomorphism f → g induced by a given lattice map, if it is one"""
    if lattice_map.shape != (f.rank, g.rank) or len(f.rays) != len(g.rays):
        return None
    target_index = {ray: j for j, ray in enumerate(g.rays)}
    bijection = []
    for ray in f.rays:
        j = target_index.get(_apply(lattice_map, ray))
        if j is None:
            return None
        bijection.append(j)
    iso = FanIso(lattice_iso=ImmutableMatrix(lattice_map), ray_bijection=tuple(bijection))
    return iso if verify_fan_iso(f, g, iso) else None


def _degrees(f: Fan) -> List[int]:
    counts = [0] * len(f.rays)
    for cone in f.cones:
        for i in cone.ray_indices:
            counts[i] += 1
    return counts


def _profile(f: Fan) -> List[int]:
    return sorted(c.dim for c in f.cones)


def iter_fan_isomorphisms(
    f: Fan,
    g: Fan,
    max_rank: int = DEFAULT_MAX_SEARCH_RANK,
    max_rays: int = DEFAULT_MAX_SEARCH_RAYS,
) -> Iterator[FanIso]:
    """
    Enumerate isomorphisms f → g, identity first when it applies

    The search works in coordinates of the saturated span of the rays: an
    anchor cone of f of full span dimension is sent to every ordering of every
    cone of g with the same dimension, the linear map is solved exactly and
    kept when it is unimodular and carries rays and cones onto g.

    Raises:
        IsomorphismSearchError: If the fans exceed the desk-scale limits
    """
    n = f.rank
    if g.rank != n or len(f.rays) != len(g.rays) or _profile(f) != _profile(g):
        return
    if n > max_rank or len(f.rays) > max_rays:
        raise IsomorphismSearchError(
            f"Isomorphism search supports rank ≤ {max_rank} and ≤ {max_rays} rays, "
            f"got rank {n} with {len(f.rays)} rays"
        )

    seen: Set[Tuple[Tuple[int, ...], Tuple[int, ...]]] = set()

    def fresh(iso: Optional[FanIso]) -> bool:
        if iso is None:
            return False
        key = (tuple(int(x) for x in iso.lattice_iso), iso.ray_bijection)
        if key in seen:
            return False
        seen.add(key)
        return True

    identity = induced_fan_iso(f, g, ImmutableMatrix(eye(n)))
    if fresh(identity):
        yield identity

    span_f, span_g = saturate(f.rays, n), saturate(g.rays, n)
    k = span_f.rows
    if span_g.rows != k or k == 0:
        return
    completion_g, _ = unimodular_completion(span_g)
    _, coords_f = unimodular_completion(span_f)
    _, coords_g = unimodular_completion(span_g)
    reduced_f = [_apply(coords_f, r)[:k] for r in f.rays]
    reduced_g = [_apply(coords_g, r)[:k] for r in g.rays]
    degree_f, degree_g = _degrees(f), _degrees(g)

    anchor_cones = [c for c in f.sorted_cones() if c.dim == k]
    if anchor_cones:
        anchor = anchor_cones[0].ray_indices
        targets: Iterable[Tuple[int, ...]] = (
            perm
            for cone in g.sorted_cones() if cone.dim == k
            for perm in itertools.permutations(cone.ray_indices)
        )
    else:
        chosen: List[int] = []
        for i in range(len(f.rays)):
            trial = chosen + [i]
            if matrix_rank(int_matrix([reduced_f[j] for j in trial], k)) == len(trial):
                chosen = trial
            if len(chosen) == k:
                break
        anchor = tuple(chosen)
        targets = itertools.permutations(range(len(g.rays)), k)

    source = ImmutableMatrix([list(reduced_f[i]) for i in anchor]).T
    source_inv = source.inv()
    for target in targets:
        if any(degree_f[a] != degree_g[t] for a, t in zip(anchor, target)):
            continue
        image = ImmutableMatrix([list(reduced_g[t]) for t in target]).T
        reduced_map = image * source_inv
        if not all(x.is_integer for x in reduced_map):
            continue
        if abs(int(reduced_map.det())) != 1:
            continue
        block = reduced_map if k == n else diag(reduced_map, eye(n - k))
        lattice_map = ImmutableMatrix(completion_g.T * block * coords_f)
        iso = induced_fan_iso(f, g, lattice_map)
        if fresh(iso):
            yield iso


def fan_isomorphic(
    f: Fan,
    g: Fan,
    via: Optional[FanIso] = None,
    max_rank: int = DEFAULT_MAX_SEARCH_RANK,
    max_rays: int = DEFAULT_MAX_SEARCH_RAYS,
) -> Optional[FanIso]:
    """
    Verify a supplied isomorphism, or search for one

    Args:
        f: Source fan
        g: Target fan
        via: Candidate isomorphism to verify instead of searching

    Returns:
        A FanIso f → g, or None
    """
    if via is not None:
        return via if verify_fan_iso(f, g, via) else None
    return next(iter_fan_isomorphisms(f, g, max_rank, max_rays), None)


def quotient_composition_iso(f: Fan, sigma: Cone, tau: Cone) -> Optional[FanIso]:
    """
    The isomorphism (Σ/σ)/(τ/⟨σ⟩) ≅ Σ/τ induced by the composed projections

    Returns None if the composed presentation does not factor onto the direct one
    or the induced map is not a fan isomorphism.
    """
    first = quotient_fan(f, sigma)
    second = quotient_fan(first.g, first.cone_map[f.require(tau)])
    direct = quotient_fan(f, tau)
    composed = compose_quotients(first.q, second.q)
    if composed.kernel_basis != direct.q.kernel_basis:
        return None
    lattice_map = factor_quotient(composed, direct.q).projection
    return induced_fan_iso(second.g, direct.g, lattice_map)


__all__ = [
    "build_fan",
    "close_faces",
    "cone_contains",
    "completeness_test_directions",
    "ensure_valid_fan",
    "face_poset",
    "facet_functionals",
    "fan_isomorphic",
    "induced_fan_iso",
    "is_complete",
    "membership_certificate",
    "iter_fan_isomorphisms",
    "quotient_composition_iso",
    "quotient_fan",
    "sort_cones",
    "star",
    "validate_fan",
    "verify_fan_iso",
    "wedge",
]

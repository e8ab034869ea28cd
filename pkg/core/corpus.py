"""
Standard fans and seeded random complete simplicial fans
"""

import functools
import itertools
import math
import random
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

from core.fans import build_fan
from models.fan import Fan
from utils.exceptions import FanError
from utils.logger import get_logger

logger = get_logger(__name__)

Vector = Tuple[int, ...]

MAX_SAMPLING_ATTEMPTS = 2000


def p1() -> Fan:
    return build_fan(1, [(1,), (-1,)], [[0], [1]], "p1")


def p2() -> Fan:
    return build_fan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]], "p2")


def p1xp1() -> Fan:
    return build_fan(2, [(1, 0), (0, 1), (-1, 0), (0, -1)], [[0, 1], [1, 2], [2, 3], [0, 3]], "p1xp1")


def hirzebruch_f1() -> Fan:
    """Hirzebruch surface F₁"""
    return build_fan(2, [(1, 0), (0, 1), (-1, 1), (0, -1)], [[0, 1], [1, 2], [2, 3], [0, 3]], "f1")


def p3() -> Fan:
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
    return build_fan(3, rays, itertools.combinations(range(4), 3), "p3")


def affine_space(rank: int) -> Fan:
    """The fan of A^rank: one cone on the standard basis"""
    rays = [tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)]
    return build_fan(rank, rays, [range(rank)], f"a{rank}")


def trivial_fan(rank: int = 0) -> Fan:
    return build_fan(rank, [], [], f"trivial{rank}")


def standard_fans() -> Dict[str, Fan]:
    """The named fans shipped with the corpus"""
    fans = [p1(), p2(), p1xp1(), hirzebruch_f1(), affine_space(2), affine_space(3), p3()]
    return {f.name: f for f in fans}


def complete_standard_fans() -> List[Fan]:
    return [p1(), p2(), p1xp1(), hirzebruch_f1(), p3()]


# ---------------------------------------------------------------------------
# Random complete fans
# ---------------------------------------------------------------------------

def _primitive_points(rng: random.Random, rank: int, count: int, bound: int) -> List[Vector]:
    points: List[Vector] = []
    while len(points) < count:
        v = tuple(rng.randint(-bound, bound) for _ in range(rank))
        if any(v) and math.gcd(*v) == 1 and v not in points:
            points.append(v)
    return points


def _angle_order(a: Vector, b: Vector) -> int:
    # Exact counterclockwise order starting from the positive x-axis
    def half(v: Vector) -> int:
        return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1

    if half(a) != half(b):
        return half(a) - half(b)
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _try_rank2(rng: random.Random) -> Optional[Fan]:
    points = sorted(_primitive_points(rng, 2, rng.randint(3, 6), 3), key=functools.cmp_to_key(_angle_order))
    n = len(points)
    for i in range(n):
        a, b = points[i], points[(i + 1) % n]
        if a[0] * b[1] - a[1] * b[0] <= 0:
            return None
    return build_fan(2, points, [(i, (i + 1) % n) for i in range(n)])


def _cross(u: Sequence[int], v: Sequence[int]) -> Vector:
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def _try_rank3(rng: random.Random) -> Optional[Fan]:
    # Cones over the facets of the convex hull of random points around the origin
    points = _primitive_points(rng, 3, rng.randint(4, 7), 2)
    facets = []
    for i, j, k in itertools.combinations(range(len(points)), 3):
        pi, pj, pk = points[i], points[j], points[k]
        normal = _cross(tuple(b - a for a, b in zip(pi, pj)), tuple(b - a for a, b in zip(pi, pk)))
        if not any(normal):
            return None
        offset = _dot(normal, pi)
        sides = [_dot(normal, p) - offset for m, p in enumerate(points) if m not in (i, j, k)]
        if all(s <= 0 for s in sides) or all(s >= 0 for s in sides):
            if any(s == 0 for s in sides) or offset == 0:
                return None
            inner = -1 if all(s <= 0 for s in sides) else 1
            if (-offset > 0) != (inner > 0):
                return None
            facets.append((i, j, k))
    used = {i for facet in facets for i in facet}
    if len(used) != len(points):
        return None
    return build_fan(3, points, facets)


def random_complete_fan(rng: random.Random, rank: int, name: Optional[str] = None) -> Fan:
    """
    A random complete simplicial fan of rank 2 or 3

    Args:
        rng: Seeded generator
        rank: 2 or 3
        name: Optional fan name

    Raises:
        FanError: If the rank is unsupported or sampling keeps failing
    """
    sampler = {2: _try_rank2, 3: _try_rank3}.get(rank)
    if sampler is None:
        raise FanError(f"Random complete fans are available in rank 2 and 3, not {rank}")
    for _ in range(MAX_SAMPLING_ATTEMPTS):
        fan = sampler(rng)
        if fan is not None:
            return fan if name is None else replace(fan, name=name)
    raise FanError(f"No complete rank-{rank} fan found in {MAX_SAMPLING_ATTEMPTS} samples")


def random_complete_fans(count: int, seed: int, ranks: Sequence[int] = (2, 3)) -> List[Fan]:
    """count random complete fans, cycling through ranks, reproducible from seed"""
    rng = random.Random(seed)
    fans = [
        random_complete_fan(rng, ranks[i % len(ranks)], name=f"random{i}_rank{ranks[i % len(ranks)]}")
        for i in range(count)
    ]
    logger.debug(f"Generated {len(fans)} random complete fans from seed {seed}")
    return fans

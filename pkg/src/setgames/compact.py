"""Compact coordinates: support set, embeddings, bilinear payoff, vertices.

The dense normal form has one row/column per subset, but its payoff matrix
factors through far fewer coordinates. Index a coordinate by each subset U in
the support set S and map strategies to 0/1 vectors:

    attacker A  ->  coords[U] = 1 iff U is contained in A
    defender D  ->  coords[U] = 1 iff U and D are disjoint

Under a mixed strategy these coordinates become the marginals
``Pr[attack covers U]`` and ``Pr[no defense touches U]``, and the expected
zero-sum payoff is the bilinear form

    sum_U b[U] pa[U] qd[U] - sum_U ca[U] pa[U] + sum_U cd[U] qd[U]

where b and ca are the interaction coefficients of the benefit and attacker
cost, and cd are the coefficients of the reflected defender cost
``W -> defender_cost(complement of W)``. The reflection is forced: it is the
unique convention making ``sum_U cd[U] Pr[D disjoint from U]`` equal the
expected defender cost identically.

S always contains the empty set and all singletons. The singleton floor keeps
the defender embedding injective, so a defender vertex maps back to its pure
strategy by reading the n singleton coordinates (zero coordinate = defended).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidInputError,
    InvalidStrategyError,
    InvalidVertexError,
    NotInHullError,
)
from .games import GameSpec
from .lp import DEFAULT_TOLERANCES, Tolerances, feasibility_lp
from .setfunctions import MobiusTransform, SetFunction, moebius

HULL_TOL = 1e-7


@dataclass(frozen=True)
class SupportSet:
    """Ordered coordinate index: member masks ascending, with position map."""

    n: int
    members: tuple[int, ...]
    index: dict[int, int] = field(repr=False, compare=False)
    singleton_positions: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def from_members(cls, n: int, masks) -> "SupportSet":
        members = sorted(set(masks) | {0} | {1 << i for i in range(n)})
        index = {m: i for i, m in enumerate(members)}
        singles = tuple(index[1 << i] for i in range(n))
        return cls(n=n, members=tuple(members), index=index, singleton_positions=singles)

    @property
    def size(self) -> int:
        return len(self.members)

    def masks_array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64)


@dataclass(frozen=True)
class CompactVertex:
    """Embedded pure strategy: 0/1 coordinates over a support set."""

    support: SupportSet
    coords: np.ndarray
    origin: int
    role: str  # "attacker" or "defender"


@dataclass(frozen=True)
class CompactGame:
    """The three coefficient vectors of the bilinear payoff over a support."""

    support: SupportSet
    benefit_vec: np.ndarray
    attacker_cost_vec: np.ndarray
    defender_cost_vec: np.ndarray
    attacker_cap: int
    defender_cap: int

    def embed_attacker(self, attack: int) -> CompactVertex:
        return embed_attacker(attack, self.support, cap=self.attacker_cap)

    def embed_defender(self, defense: int) -> CompactVertex:
        return embed_defender(defense, self.support, cap=self.defender_cap)

    def value(self, pa: np.ndarray, qd: np.ndarray) -> float:
        return compact_value(self, pa, qd)


def _reflected_defender_cost(spec: GameSpec) -> SetFunction:
    full = spec.ground.full_mask
    entries = {full ^ m: v for m, v in spec.defender_cost.entries.items()}
    return SetFunction(spec.ground, entries, default=spec.defender_cost.default)


def _transforms(spec: GameSpec, *, drop_tol: float | None, exact: bool):
    truncate = spec.attacker_cap if spec.attacker_cap < spec.n else None
    b = moebius(spec.benefit, max_size=truncate, drop_tol=drop_tol, exact=exact)
    ca = moebius(spec.attacker_cost, max_size=truncate, drop_tol=drop_tol, exact=exact)
    if spec.defender_cost.is_zero():
        cd = MobiusTransform(spec.ground, {})
    else:
        # The reflection is dense near the top of the lattice, so the full
        # transform is required regardless of the attacker cap.
        cd = moebius(_reflected_defender_cost(spec), drop_tol=drop_tol, exact=exact)
    return b, ca, cd


def build_support(spec: GameSpec, *, drop_tol: float | None = None,
                  exact: bool = False) -> SupportSet:
    """Support set of the game: empty set, singletons, and every mask where
    some interaction coefficient is nonzero."""
    b, ca, cd = _transforms(spec, drop_tol=drop_tol, exact=exact)
    return SupportSet.from_members(
        spec.n, set(b.entries) | set(ca.entries) | set(cd.entries))


def build_compact_game(spec: GameSpec, *, drop_tol: float | None = None) -> CompactGame:
    """Compute the support set and coefficient vectors of ``spec``."""
    b, ca, cd = _transforms(spec, drop_tol=drop_tol, exact=False)
    support = SupportSet.from_members(
        spec.n, set(b.entries) | set(ca.entries) | set(cd.entries))
    return CompactGame(
        support=support,
        benefit_vec=np.array([float(b.value(m)) for m in support.members]),
        attacker_cost_vec=np.array([float(ca.value(m)) for m in support.members]),
        defender_cost_vec=np.array([float(cd.value(m)) for m in support.members]),
        attacker_cap=spec.attacker_cap,
        defender_cap=spec.defender_cap,
    )


def embed_attacker(attack: int, support: SupportSet, cap: int | None = None) -> CompactVertex:
    """0/1 coordinates ``1{U subset of attack}`` for every support member."""
    if cap is not None and attack.bit_count() > cap:
        raise InvalidStrategyError(f"attack {attack:#x} exceeds the cap {cap}")
    masks = support.masks_array()
    coords = ((masks & attack) == masks).astype(float)
    return CompactVertex(support=support, coords=coords, origin=attack, role="attacker")


def embed_defender(defense: int, support: SupportSet, cap: int | None = None) -> CompactVertex:
    """0/1 coordinates ``1{U disjoint from defense}`` for every support member."""
    if cap is not None and defense.bit_count() > cap:
        raise InvalidStrategyError(f"defense {defense:#x} exceeds the cap {cap}")
    masks = support.masks_array()
    coords = ((masks & defense) == 0).astype(float)
    return CompactVertex(support=support, coords=coords, origin=defense, role="defender")


def marginal_attacker(support: SupportSet, atoms) -> np.ndarray:
    """Compact coordinates of a mixed attack: ``pa[U] = Pr[attack covers U]``."""
    masks = support.masks_array()
    out = np.zeros(support.size)
    for mask, prob in atoms:
        out += prob * ((masks & mask) == masks)
    return out


def marginal_defender(support: SupportSet, atoms) -> np.ndarray:
    """Compact coordinates of a mixed defense: ``qd[U] = Pr[defense misses U]``."""
    masks = support.masks_array()
    out = np.zeros(support.size)
    for mask, prob in atoms:
        out += prob * ((masks & mask) == 0)
    return out


def compact_value(game: CompactGame, pa: np.ndarray, qd: np.ndarray) -> float:
    """Bilinear zero-sum payoff at compact coordinate vectors.

    On embedded pure strategies this reproduces the normal-form entry
    exactly; on marginals of mixed strategies it reproduces the expected
    payoff (coordinates of the empty set are 1 by construction).
    """
    pa = np.asarray(pa, dtype=float)
    qd = np.asarray(qd, dtype=float)
    if pa.shape != (game.support.size,) or qd.shape != (game.support.size,):
        raise InvalidInputError(
            f"coordinate vectors must have length {game.support.size}")
    return float(
        (game.benefit_vec * pa) @ qd
        - game.attacker_cost_vec @ pa
        + game.defender_cost_vec @ qd
    )


def vertex_to_strategy(vertex: CompactVertex, *, tol: float = 1e-9) -> int:
    """Recover the defended set from a defender vertex in O(n).

    Reads only the n singleton coordinates: target i is defended exactly when
    coordinate {i} is 0. Inverse of :func:`embed_defender` for every defense.
    """
    if vertex.role != "defender":
        raise InvalidVertexError("vertex mapping applies to defender vertices only")
    coords = vertex.coords
    defense = 0
    for i, pos in enumerate(vertex.support.singleton_positions):
        c = coords[pos]
        if abs(c) > tol and abs(c - 1.0) > tol:
            raise InvalidVertexError(f"coordinate for singleton {i + 1} is {c}, not 0/1")
        if c < 0.5:
            defense |= 1 << i
    return defense


def caratheodory_decompose(point: np.ndarray, vertices: list[CompactVertex], *,
                           tol: float = HULL_TOL,
                           lp_tol: Tolerances = DEFAULT_TOLERANCES,
                           ) -> list[tuple[float, CompactVertex]]:
    """Express ``point`` as a convex combination of at most dim+1 vertices.

    Solves the elastic feasibility program

        minimize sum of |residual|  over  weights >= 0, sum = 1

    and accepts when the optimal residual is below ``tol``. The returned
    weights come from a basic solution, so at most ``len(point) + 1`` of them
    are positive. If the point is further than ``tol`` from the hull, raises
    :class:`NotInHullError` carrying a separating functional ``(normal,
    offset)`` with ``normal @ v + offset <= 0`` for every vertex and
    ``normal @ point + offset > 0``.
    """
    point = np.asarray(point, dtype=float)
    dim = point.size
    m = len(vertices)
    if m == 0:
        raise InvalidInputError("need at least one vertex")
    coords = np.stack([v.coords for v in vertices])  # m x dim

    # Variables: m weights, then dim+1 elastic pairs (plus, minus).
    n_vars = m + 2 * (dim + 1)
    objective = np.concatenate([np.zeros(m), np.ones(2 * (dim + 1))])
    constraints = []
    for r in range(dim):
        row = np.zeros(n_vars)
        row[:m] = coords[:, r]
        row[m + 2 * r] = 1.0
        row[m + 2 * r + 1] = -1.0
        constraints.append((row, "==", float(point[r])))
    row = np.zeros(n_vars)
    row[:m] = 1.0
    row[m + 2 * dim] = 1.0
    row[m + 2 * dim + 1] = -1.0
    constraints.append((row, "==", 1.0))

    result = feasibility_lp(objective, constraints, n_vars=n_vars, nonneg=True, tol=lp_tol)
    if result.status != "optimal" or result.objective_value > tol:
        normal, offset = _separating_functional(point, coords, lp_tol)
        raise NotInHullError(
            f"point is not within {tol} of the convex hull of {m} vertices",
            certificate=(normal, offset),
        )
    weights = np.maximum(result.x[:m], 0.0)
    total = weights.sum()
    out = [(float(w / total), vertices[j]) for j, w in enumerate(weights) if w / total > 1e-12]
    return out


def _separating_functional(point, coords, lp_tol):
    """Maximize u @ point + t over u @ v + t <= 0 for all vertices, |u|,|t| <= 1."""
    dim = point.size
    n_vars = dim + 1
    constraints = []
    for v in coords:
        constraints.append((np.concatenate([v, [1.0]]), "<=", 0.0))
    for j in range(n_vars):
        e = np.zeros(n_vars)
        e[j] = 1.0
        constraints.append((e, "<=", 1.0))
        constraints.append((e, ">=", -1.0))
    objective = np.concatenate([point, [1.0]])
    result = feasibility_lp(objective, constraints, n_vars=n_vars, maximize=True, tol=lp_tol)
    if result.status != "optimal":  # pragma: no cover - box-bounded by construction
        raise InvalidInputError(f"separation LP reported {result.status}")
    return result.x[:dim], float(result.x[dim])

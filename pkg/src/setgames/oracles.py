"""Best-response oracles over compact coordinates.

The defender oracle maximizes ``sum_U w[U] * 1{U disjoint from D}`` over
defenses of size at most k; the attacker oracle maximizes
``sum_U w[U] * 1{U subset of A}`` over attacks of size at most c. Writing
``x_i = 1`` when target i is left undefended turns the defender problem into
maximizing the polynomial ``sum_V w[V] prod_{i in V} x_i`` over binary x with
at least ``n - k`` ones, so the oracle is constrained pseudo-boolean
maximization and its difficulty is governed by the support structure.

Methods:
  * ``bruteforce``: enumerate all capped strategies.
  * ``additive``: support is singletons plus the empty set; pick the at most
    k most negative singleton weights.
  * ``separable``: the support splits into components whose target unions are
    disjoint; each component is enumerated on its own, and a knapsack sweep
    combines per-component optima when the cap binds across components.

Ties everywhere resolve to the smallest strategy mask, so all methods return
identical strategies whenever their objective values tie exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bits import iter_bits, masks_up_to_size
from .compact import CompactVertex, SupportSet, embed_defender, embed_attacker
from .errors import CapacityError, InvalidInputError, OracleMismatchError, PartitionError

ENUMERATION_GUARD = 50_000_000
COMPONENT_ENUM_LIMIT = 25
AUTO_SEPARABLE_LIMIT = 20


@dataclass(frozen=True)
class OracleQuery:
    """Coordinate weights (aligned with a support set) and a cardinality cap."""

    weights: np.ndarray
    cap: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if not np.all(np.isfinite(w)):
            raise InvalidInputError("oracle weights contain non-finite entries")


@dataclass(frozen=True)
class OracleResult:
    strategy: int
    value: float
    vertex: CompactVertex


@dataclass(frozen=True)
class PseudoBooleanProblem:
    """Maximize ``sum_V coeff[V] prod_{i in V} x_i`` with at least ``min_ones`` ones.

    ``x_i = 1`` means target i is left undefended; a defense D corresponds to
    ``x = full_mask ^ D``, and the objective value at that x equals the
    defender oracle objective at D.
    """

    terms: tuple[tuple[int, float], ...]
    n: int
    min_ones: int

    def evaluate(self, ones_mask: int) -> float:
        """Objective at the assignment whose ones are ``ones_mask``."""
        return float(sum(w for mask, w in self.terms if mask & ~ones_mask == 0))

    def solve_bruteforce(self) -> tuple[int, float]:
        """Exact optimum by enumeration, smallest defended mask on ties."""
        full = (1 << self.n) - 1
        cap = self.n - self.min_ones
        best_ones, best = -1, -np.inf
        for defense in masks_up_to_size(self.n, cap):
            ones = full ^ defense
            value = self.evaluate(ones)
            if value > best:
                best, best_ones = value, ones
        return best_ones, best


def to_pseudo_boolean(query: OracleQuery, support: SupportSet) -> PseudoBooleanProblem:
    """Restate a defender oracle query as constrained polynomial maximization."""
    weights = np.asarray(query.weights, dtype=float)
    terms = tuple((m, float(w)) for m, w in zip(support.members, weights))
    return PseudoBooleanProblem(terms=terms, n=support.n, min_ones=support.n - query.cap)


def _candidate_values(candidates, member_masks, weights, *, defender: bool) -> np.ndarray:
    if len(candidates) * len(member_masks) > ENUMERATION_GUARD:
        raise CapacityError(
            f"oracle enumeration of {len(candidates)}x{len(member_masks)} exceeds the guard")
    cand = np.asarray(candidates, dtype=np.int64)
    masks = np.asarray(member_masks, dtype=np.int64)
    meet = cand[:, None] & masks[None, :]
    hit = (meet == 0) if defender else (meet == masks[None, :])
    return hit @ weights


def defender_oracle(query: OracleQuery, support: SupportSet, *, method: str = "auto",
                    components: list[list[int]] | None = None) -> OracleResult:
    """Best defense of size at most ``query.cap`` against coordinate weights.

    ``method`` picks the strategy: ``auto`` routes to the cheapest applicable
    one, the named methods raise :class:`OracleMismatchError` when their
    structural requirements fail.
    """
    weights = np.asarray(query.weights, dtype=float)
    if weights.shape != (support.size,):
        raise InvalidInputError(f"weights must have length {support.size}")
    if method == "auto":
        method = _pick_method(support, components)
    if method == "bruteforce":
        candidates = masks_up_to_size(support.n, query.cap)
        values = _candidate_values(candidates, support.members, weights, defender=True)
        best = int(np.argmax(values))
        defense = candidates[best]
        return OracleResult(defense, float(values[best]), embed_defender(defense, support))
    if method == "additive":
        return _defender_additive(query, support, weights)
    if method == "separable":
        problem = to_pseudo_boolean(query, support)
        if components is None:
            components = partition_support(support.members)
        ones, value = solve_separable(problem, components)
        defense = ((1 << support.n) - 1) ^ ones
        return OracleResult(defense, value, embed_defender(defense, support))
    raise InvalidInputError(f"unknown oracle method {method!r}")


def _pick_method(support: SupportSet, components) -> str:
    if all(m.bit_count() <= 1 for m in support.members):
        return "additive"
    comps = components if components is not None else partition_support(support.members)
    if len(comps) >= 2:
        widest = max(_component_union(c).bit_count() for c in comps)
        if widest <= AUTO_SEPARABLE_LIMIT:
            return "separable"
    return "bruteforce"


def _defender_additive(query: OracleQuery, support: SupportSet, weights) -> OracleResult:
    if any(m.bit_count() > 1 for m in support.members):
        raise OracleMismatchError("additive oracle needs a singleton-only support")
    base = float(weights[support.index[0]]) if 0 in support.index else 0.0
    singles = []
    for i in range(support.n):
        pos = support.index.get(1 << i)
        if pos is not None:
            singles.append((float(weights[pos]), i))
    value = base + sum(w for w, _ in singles)
    defense = 0
    picked = 0
    # Defending removes a singleton term, so take the most negative weights
    # first; index order on ties yields the smallest mask.
    for w, i in sorted(singles):
        if w >= 0 or picked == query.cap:
            break
        defense |= 1 << i
        value -= w
        picked += 1
    return OracleResult(defense, value, embed_defender(defense, support))


def attacker_oracle(query: OracleQuery, support: SupportSet) -> OracleResult:
    """Best attack of size at most ``query.cap`` against coordinate weights."""
    weights = np.asarray(query.weights, dtype=float)
    if weights.shape != (support.size,):
        raise InvalidInputError(f"weights must have length {support.size}")
    candidates = masks_up_to_size(support.n, query.cap)
    values = _candidate_values(candidates, support.members, weights, defender=False)
    best = int(np.argmax(values))
    attack = candidates[best]
    return OracleResult(attack, float(values[best]), embed_attacker(attack, support))


def partition_support(members) -> list[list[int]]:
    """Split support members into groups whose target unions are disjoint.

    Union-find over shared targets: two members land in the same group when
    their masks intersect, directly or through a chain. The empty mask joins
    no group (it is a constant term).
    """
    nonempty = [m for m in members if m]
    parent: dict[int, int] = {}

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[int, int] = {}
    for m in nonempty:
        bits = list(iter_bits(m))
        for b in bits:
            parent.setdefault(b, b)
        roots = {find(b) for b in bits}
        first = roots.pop()
        for r in roots:
            parent[r] = first
    groups: dict[int, list[int]] = {}
    for m in nonempty:
        root = find(next(iter_bits(m)))
        groups.setdefault(root, []).append(m)
    return [sorted(g) for _, g in sorted(groups.items(), key=lambda kv: min(kv[1]))]


def _component_union(component: list[int]) -> int:
    u = 0
    for m in component:
        u |= m
    return u


def solve_separable(problem: PseudoBooleanProblem, components: list[list[int]],
                    ) -> tuple[int, float]:
    """Optimize a pseudo-boolean objective whose terms split into components.

    Each component is enumerated exhaustively over its own targets; when the
    defended-count budget ``n - min_ones`` binds across components, a knapsack
    sweep over (component, defended count) combines the per-component optima.
    Ties resolve to the smallest defended mask overall.
    """
    term_weight = {m: w for m, w in problem.terms}
    constant = term_weight.get(0, 0.0)
    nonempty = [m for m, _ in problem.terms if m]
    claimed: dict[int, int] = {}
    for ci, comp in enumerate(components):
        for m in comp:
            if m == 0:
                continue
            if m in claimed:
                raise PartitionError(f"mask {m:#x} appears in two components")
            if m not in term_weight:
                raise PartitionError(f"mask {m:#x} is not a term of the problem")
            claimed[m] = ci
    missing = [m for m in nonempty if m not in claimed]
    if missing:
        raise PartitionError(f"terms {missing} missing from the partition")
    unions = [_component_union(c) for c in components]
    for i in range(len(unions)):
        for j in range(i + 1, len(unions)):
            if unions[i] & unions[j]:
                raise PartitionError("component target unions overlap")
    for u in unions:
        if u.bit_count() > COMPONENT_ENUM_LIMIT:
            raise CapacityError(
                f"component with {u.bit_count()} targets exceeds the enumeration limit")

    budget = problem.n - problem.min_ones
    # Per-component tables: best value and smallest defended submask for each
    # defended count.
    tables = []
    for comp, union in zip(components, unions):
        bits = list(iter_bits(union))
        width = len(bits)
        best: list[tuple[float, int]] = [(-np.inf, 0)] * (width + 1)
        comp_terms = [(m, term_weight[m]) for m in comp if m]
        for local in range(1 << width):
            defended = 0
            for b_idx in range(width):
                if local >> b_idx & 1:
                    defended |= 1 << bits[b_idx]
            value = sum(w for m, w in comp_terms if m & defended == 0)
            count = local.bit_count()
            cur = best[count]
            if value > cur[0] or (value == cur[0] and defended < cur[1]):
                best[count] = (value, defended)
        tables.append(best)

    # Knapsack over components: maximize value, then minimize the defended
    # mask (component unions are disjoint, so masks add without carries).
    states: dict[int, tuple[float, int]] = {0: (0.0, 0)}
    for table in tables:
        nxt: dict[int, tuple[float, int]] = {}
        for used, (val, mask) in states.items():
            for t, (tval, tmask) in enumerate(table):
                if tval == -np.inf or used + t > budget:
                    continue
                cand = (val + tval, mask | tmask)
                cur = nxt.get(used + t)
                if cur is None or cand[0] > cur[0] or (cand[0] == cur[0] and cand[1] < cur[1]):
                    nxt[used + t] = cand
        states = nxt

    best_val, best_mask = -np.inf, 0
    for val, mask in states.values():
        if val > best_val or (val == best_val and mask < best_mask):
            best_val, best_mask = val, mask
    full = (1 << problem.n) - 1
    return full ^ best_mask, float(best_val + constant)

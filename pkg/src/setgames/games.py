"""Game specification, pure payoffs, and the dense normal form.

A game puts an attacker and a defender on a common ground set of targets.
Pure strategies are subsets; a play (A, D) succeeds on ``A minus D`` and
yields

    attacker:  benefit(A \\ D) - attacker_cost(A)
    defender: -benefit(A \\ D) - defender_cost(D)

The equilibria of this non-zero-sum pair coincide with those of the single
zero-sum matrix ``benefit(A \\ D) - attacker_cost(A) + defender_cost(D)``,
because the two payoffs differ from it only by terms each player cannot
influence. :func:`expand_normal_form` materializes that matrix for small
instances and :func:`verify_ne_equivalence` checks a strategy pair against
the original non-zero-sum payoffs, so equilibria computed on the zero-sum
side can be certified independently.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import comb

import numpy as np

from .bits import masks_up_to_size
from .errors import CapacityError, InvalidInputError, InvalidStrategyError
from .setfunctions import GroundSet, SetFunction

NORMAL_FORM_GUARD = 10_000_000


@dataclass(frozen=True)
class GameSpec:
    """A full game: ground set, utilities, and per-player cardinality caps.

    ``attacker_cap`` (c) and ``defender_cap`` (k) bound the size of each
    side's pure strategies; caps equal to n give the complete power-set
    strategy spaces. Utilities must be defined (entries plus default) on all
    subsets up to the relevant cap.
    """

    ground: GroundSet
    benefit: SetFunction
    attacker_cost: SetFunction
    defender_cost: SetFunction
    attacker_cap: int
    defender_cap: int

    def __post_init__(self):
        for name, fn in (("benefit", self.benefit), ("attacker_cost", self.attacker_cost),
                         ("defender_cost", self.defender_cost)):
            if fn.ground.n != self.ground.n:
                raise InvalidInputError(f"{name} is defined on a different ground set")
            if fn.value(0) != 0:
                warnings.warn(
                    f"{name} has a nonzero value {fn.value(0)} on the empty set; "
                    "it is kept but acts as a constant offset",
                    stacklevel=2,
                )
        for name, cap in (("attacker_cap", self.attacker_cap), ("defender_cap", self.defender_cap)):
            if not 0 <= cap <= self.ground.n:
                raise InvalidInputError(f"{name}={cap} is outside [0, {self.ground.n}]")

    @property
    def n(self) -> int:
        return self.ground.n

    def attacker_strategies(self) -> list[int]:
        """All attacker pure strategies (masks of size <= c), ascending."""
        return masks_up_to_size(self.n, self.attacker_cap)

    def defender_strategies(self) -> list[int]:
        return masks_up_to_size(self.n, self.defender_cap)

    def strategy_counts(self) -> tuple[int, int]:
        na = sum(comb(self.n, i) for i in range(self.attacker_cap + 1))
        nd = sum(comb(self.n, i) for i in range(self.defender_cap + 1))
        return na, nd

    def check_attack(self, mask: int) -> None:
        self.ground.check_mask(mask)
        if mask.bit_count() > self.attacker_cap:
            raise InvalidStrategyError(
                f"attack {mask:#x} has {mask.bit_count()} targets, cap is {self.attacker_cap}")

    def check_defense(self, mask: int) -> None:
        self.ground.check_mask(mask)
        if mask.bit_count() > self.defender_cap:
            raise InvalidStrategyError(
                f"defense {mask:#x} has {mask.bit_count()} targets, cap is {self.defender_cap}")


@dataclass(frozen=True)
class PurePayoff:
    attacker: float
    defender: float


@dataclass(frozen=True)
class NormalForm:
    """Dense zero-sum-equivalent matrix; rows attack, columns defend.

    Strategies are listed in ascending mask order and
    ``matrix[i, j] = benefit(A_i \\ D_j) - attacker_cost(A_i) + defender_cost(D_j)``.
    """

    attacker_strategies: tuple[int, ...]
    defender_strategies: tuple[int, ...]
    matrix: np.ndarray


def pure_payoff(spec: GameSpec, attack: int, defense: int) -> PurePayoff:
    """Payoffs of a pure strategy pair under the successful-attack rule."""
    spec.check_attack(attack)
    spec.check_defense(defense)
    hit = spec.benefit.value(attack & ~defense)
    return PurePayoff(
        attacker=hit - spec.attacker_cost.value(attack),
        defender=-hit - spec.defender_cost.value(defense),
    )


def _value_table(fn: SetFunction) -> np.ndarray:
    return fn.to_dense()


def expand_normal_form(spec: GameSpec) -> NormalForm:
    """Materialize the zero-sum-equivalent payoff matrix for a small game."""
    na, nd = spec.strategy_counts()
    if na * nd > NORMAL_FORM_GUARD:
        raise CapacityError(f"normal form with {na}x{nd} cells exceeds the guard")
    rows = spec.attacker_strategies()
    cols = spec.defender_strategies()
    benefit = _value_table(spec.benefit)
    cost_a = _value_table(spec.attacker_cost)
    cost_d = _value_table(spec.defender_cost)
    a = np.array(rows)
    d = np.array(cols)
    matrix = benefit[a[:, None] & ~d[None, :]] - cost_a[a][:, None] + cost_d[d][None, :]
    return NormalForm(tuple(rows), tuple(cols), matrix)


@dataclass(frozen=True)
class MixedStrategy:
    """A distribution over pure strategies as (mask, probability) atoms."""

    atoms: tuple[tuple[int, float], ...]

    def __post_init__(self):
        total = 0.0
        for mask, prob in self.atoms:
            if prob <= 0:
                raise InvalidInputError(f"atom {mask:#x} has non-positive probability {prob}")
            total += prob
        if self.atoms and abs(total - 1.0) > 1e-9:
            raise InvalidInputError(f"probabilities sum to {total}, expected 1")

    @classmethod
    def from_pairs(cls, pairs, *, min_prob: float = 1e-12) -> "MixedStrategy":
        """Merge duplicates, drop negligible atoms, and renormalize."""
        merged: dict[int, float] = {}
        for mask, prob in pairs:
            merged[mask] = merged.get(mask, 0.0) + float(prob)
        kept = {m: p for m, p in merged.items() if p > min_prob}
        total = sum(kept.values())
        if total <= 0:
            raise InvalidInputError("mixed strategy has no mass left after filtering")
        return cls(tuple((m, p / total) for m, p in sorted(kept.items())))

    def support(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.atoms)

    def probability(self, mask: int) -> float:
        for m, p in self.atoms:
            if m == mask:
                return p
        return 0.0

    def as_vector(self, strategy_masks) -> np.ndarray:
        """Probability vector aligned with ``strategy_masks``."""
        index = {m: i for i, m in enumerate(strategy_masks)}
        vec = np.zeros(len(index))
        for mask, prob in self.atoms:
            if mask not in index:
                raise InvalidStrategyError(f"atom {mask:#x} is not a legal pure strategy here")
            vec[index[mask]] = prob
        return vec


def verify_ne_equivalence(spec: GameSpec, attacker_mix: MixedStrategy,
                          defender_mix: MixedStrategy, eps: float) -> bool:
    """True iff the pair is an eps-equilibrium of the original two-payoff game.

    Checks that no pure deviation improves either player's expected payoff in
    the non-zero-sum game by more than ``eps``. This is the independent check
    that a solution computed on the zero-sum-equivalent matrix really is an
    equilibrium of the game as specified.
    """
    na, nd = spec.strategy_counts()
    if na * nd > NORMAL_FORM_GUARD:
        raise CapacityError("game too large for the dense equilibrium check")
    rows = spec.attacker_strategies()
    cols = spec.defender_strategies()
    benefit = _value_table(spec.benefit)
    cost_a = _value_table(spec.attacker_cost)
    cost_d = _value_table(spec.defender_cost)
    a = np.array(rows)
    d = np.array(cols)
    hit = benefit[a[:, None] & ~d[None, :]]
    attacker_payoff = hit - cost_a[a][:, None]
    defender_payoff = -hit - cost_d[d][None, :]

    p = attacker_mix.as_vector(rows)
    q = defender_mix.as_vector(cols)
    attacker_now = float(p @ attacker_payoff @ q)
    attacker_best = float(np.max(attacker_payoff @ q))
    defender_now = float(p @ defender_payoff @ q)
    defender_best = float(np.max(p @ defender_payoff))
    return attacker_best <= attacker_now + eps and defender_best <= defender_now + eps

"""Set functions over bitmask subsets and their interaction transforms.

A set function assigns a value to every subset of {1, .., n}; subsets are
bitmask integers (see :mod:`setgames.bits`). The forward transform

    moebius(f)(U) = sum over V below U of (-1)^|U minus V| f(V)

isolates the pure interaction weight of each combination of targets, and the
inverse

    zeta(coeffs)(U) = sum over V below U of coeffs(V)

rebuilds the set function. On the dense lattice both run as in-place bitwise
scans in O(n 2^n); when only subsets up to a cardinality cap are needed the
sums are taken directly over submasks instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bits import masks_up_to_size, submasks
from .errors import CapacityError, InvalidInputError

MAX_GROUND = 30
MAX_DENSE = 24

# Relative cutoff under which transform coefficients are treated as exact
# zeros. Alternating sums of floats leave ~1e-16 residue on additive inputs;
# without the cutoff their support would spuriously cover the whole lattice.
SPARSITY_SCALE = 1e-12


def _check_finite(value) -> None:
    if isinstance(value, float) and not math.isfinite(value):
        raise InvalidInputError(f"non-finite value {value!r} in set function")


@dataclass(frozen=True)
class GroundSet:
    """The target universe {1, .., n}; subsets live in [0, 2^n) as bitmasks."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"ground set needs at least one target, got n={self.n}")
        if self.n > MAX_GROUND:
            raise CapacityError(f"n={self.n} exceeds the bitmask limit of {MAX_GROUND}")

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def check_mask(self, mask: int) -> None:
        if not 0 <= mask < self.size:
            raise InvalidInputError(f"mask {mask} out of range for n={self.n}")


@dataclass(frozen=True)
class SetFunction:
    """A function on subsets, stored as a mask -> value map plus a default.

    Lookups of unstored masks return ``default`` (normally 0), so a sparse
    entry map together with the default defines the function on the whole
    lattice. Instances are treated as immutable after construction.
    """

    ground: GroundSet
    entries: dict[int, float] = field(default_factory=dict)
    default: float = 0.0

    def __post_init__(self):
        _check_finite(self.default)
        for mask, value in self.entries.items():
            self.ground.check_mask(mask)
            _check_finite(value)

    def value(self, mask: int):
        return self.entries.get(mask, self.default)

    __call__ = value

    def max_abs(self) -> float:
        """Largest absolute value among stored entries and the default."""
        scale = abs(self.default)
        for v in self.entries.values():
            scale = max(scale, abs(v))
        return scale

    def to_dense(self) -> np.ndarray:
        """Values on all 2^n subsets as a float array indexed by mask."""
        n = self.ground.n
        if n > MAX_DENSE:
            raise CapacityError(f"dense table for n={n} exceeds the limit of {MAX_DENSE}")
        dense = np.full(self.ground.size, float(self.default))
        for mask, v in self.entries.items():
            dense[mask] = v
        return dense

    def to_dense_exact(self) -> list:
        """Values on all 2^n subsets as Fractions, for the exact code path."""
        n = self.ground.n
        if n > MAX_DENSE:
            raise CapacityError(f"dense table for n={n} exceeds the limit of {MAX_DENSE}")
        default = Fraction(self.default)
        dense = [default] * self.ground.size
        for mask, v in self.entries.items():
            dense[mask] = Fraction(v)
        return dense

    def is_zero(self) -> bool:
        return self.default == 0 and all(v == 0 for v in self.entries.values())


@dataclass(frozen=True)
class MobiusTransform:
    """Interaction coefficients of a set function; only nonzeros are stored."""

    ground: GroundSet
    entries: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for mask, value in self.entries.items():
            self.ground.check_mask(mask)
            _check_finite(value)

    def value(self, mask: int):
        return self.entries.get(mask, 0)

    __call__ = value

    def support(self) -> tuple[int, ...]:
        """Masks with a nonzero coefficient, ascending."""
        return tuple(sorted(self.entries))


def moebius(f: SetFunction, *, max_size: int | None = None, drop_tol: float | None = None,
            exact: bool = False) -> MobiusTransform:
    """Interaction coefficients of ``f``.

    Args:
        f: set function defined (entries plus default) on the whole lattice,
            or at least on all subsets of size <= ``max_size``.
        max_size: if given, compute coefficients only for subsets of at most
            this many targets, by direct submask sums. Otherwise the dense
            O(n 2^n) scan is used, which requires n <= 24.
        drop_tol: absolute cutoff below which coefficients are discarded as
            zeros. Defaults to 1e-12 times the largest absolute value of
            ``f``. Ignored in exact mode, where only exact zeros are dropped.
        exact: compute with rational arithmetic; values are converted to
            Fractions and results are exact.
    """
    n = f.ground.n
    if max_size is not None and max_size >= n:
        max_size = None
    if exact:
        entries = _moebius_exact(f, max_size)
        return MobiusTransform(f.ground, entries)

    if drop_tol is None:
        drop_tol = SPARSITY_SCALE * f.max_abs()

    if max_size is None:
        dense = f.to_dense()
        if not np.all(np.isfinite(dense)):
            raise InvalidInputError("non-finite value in set function")
        for i in range(n):
            half = dense.reshape(-1, 2, 1 << i)
            half[:, 1, :] -= half[:, 0, :]
        keep = np.nonzero(np.abs(dense) >= drop_tol)[0] if drop_tol > 0 else np.nonzero(dense)[0]
        entries = {int(m): float(dense[m]) for m in keep}
        return MobiusTransform(f.ground, entries)

    entries = {}
    for mask in masks_up_to_size(n, max_size):
        bits = mask.bit_count()
        acc = 0.0
        for sub in submasks(mask):
            term = f.value(sub)
            acc += term if (bits - sub.bit_count()) % 2 == 0 else -term
        if abs(acc) >= drop_tol and acc != 0:
            entries[mask] = acc
    return MobiusTransform(f.ground, entries)


def _moebius_exact(f: SetFunction, max_size: int | None) -> dict:
    n = f.ground.n
    if max_size is None:
        dense = f.to_dense_exact()
        for i in range(n):
            bit = 1 << i
            for m in range(f.ground.size):
                if m & bit:
                    dense[m] = dense[m] - dense[m ^ bit]
        return {m: v for m, v in enumerate(dense) if v != 0}
    entries = {}
    for mask in masks_up_to_size(n, max_size):
        bits = mask.bit_count()
        acc = Fraction(0)
        for sub in submasks(mask):
            term = Fraction(f.value(sub))
            acc += term if (bits - sub.bit_count()) % 2 == 0 else -term
        if acc != 0:
            entries[mask] = acc
    return entries


def zeta(coeffs: MobiusTransform, *, max_size: int | None = None,
         exact: bool = False) -> SetFunction:
    """Rebuild the set function whose interaction coefficients are ``coeffs``.

    Inverse of :func:`moebius`: the value at U is the sum of coefficients over
    all submasks of U. With ``max_size`` only subsets up to that size are
    materialized.
    """
    n = coeffs.ground.n
    if max_size is not None and max_size >= n:
        max_size = None

    if max_size is not None:
        entries = {}
        for mask in masks_up_to_size(n, max_size):
            acc = Fraction(0) if exact else 0.0
            for sub in submasks(mask):
                acc = acc + (Fraction(coeffs.value(sub)) if exact else coeffs.value(sub))
            if acc != 0:
                entries[mask] = acc
        return SetFunction(coeffs.ground, entries)

    if n > MAX_DENSE:
        raise CapacityError(f"dense inverse transform for n={n} exceeds the limit of {MAX_DENSE}")

    if exact:
        dense = [Fraction(0)] * coeffs.ground.size
        for mask, v in coeffs.entries.items():
            dense[mask] = Fraction(v)
        for i in range(n):
            bit = 1 << i
            for m in range(coeffs.ground.size):
                if m & bit:
                    dense[m] = dense[m] + dense[m ^ bit]
        return SetFunction(coeffs.ground, {m: v for m, v in enumerate(dense) if v != 0})

    dense = np.zeros(coeffs.ground.size)
    for mask, v in coeffs.entries.items():
        dense[mask] = v
    for i in range(n):
        half = dense.reshape(-1, 2, 1 << i)
        half[:, 1, :] += half[:, 0, :]
    entries = {int(m): float(dense[m]) for m in np.nonzero(dense)[0]}
    return SetFunction(coeffs.ground, entries, default=0.0)


def restrict_cardinality(f: SetFunction, cap: int) -> SetFunction:
    """Drop entries on subsets larger than ``cap``."""
    if not 0 <= cap <= f.ground.n:
        raise InvalidInputError(f"cap {cap} is outside [0, {f.ground.n}]")
    kept = {m: v for m, v in f.entries.items() if m.bit_count() <= cap}
    return SetFunction(f.ground, kept, default=f.default)

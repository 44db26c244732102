"""Closed-form flop counts for one incremental update.

``p`` new rows, ``k`` nodes, ``l`` rows already absorbed, ``c`` outputs.
Lower-order terms such as matrix additions are dropped, so these are a cost
model, not exact operation counts.  The ``p == k`` case uses the
large-batch formulas.  Results are exact :class:`~fractions.Fraction` values
because the square-root count carries a ``(2/3) k^3`` term.
"""

from fractions import Fraction
from typing import NamedTuple

__all__ = [
    "FlopInputs",
    "flops_existing",
    "flops_recursive",
    "flops_sqrt",
    "flops_for",
    "crossover_cheaper",
    "sqrt_minus_recursive_small_batch",
]


class FlopInputs(NamedTuple):
    p: int
    k: int
    l: int = 1  # noqa: E741
    c: int = 1

    def validated(self):
        if min(self) < 1:
            raise ValueError(f"all flop dimensions must be >= 1, got {self}")
        return self


def flops_existing(fi: FlopInputs) -> Fraction:
    p, k, l, c = fi.validated()
    if p >= k:
        return Fraction(8 * p * k * l + 4 * k * k * p + k**3 + 4 * c * p * k)
    return Fraction(8 * p * k * l + 4 * p * p * k + p**3 + 4 * c * p * k)


def flops_recursive(fi: FlopInputs) -> Fraction:
    p, k, _, c = fi.validated()
    if p >= k:
        return Fraction(2 * k * p * p + 2 * k * k * p + 3 * k**3 + 2 * c * k * k + 4 * c * p * k)
    return Fraction(3 * p * k * k + 3 * p * p * k + p**3 + 4 * c * p * k)


def flops_sqrt(fi: FlopInputs) -> Fraction:
    p, k, _, c = fi.validated()
    if p >= k:
        return Fraction(2 * k * k * p + k**3 + 2 * c * k * k + 4 * c * p * k)
    return Fraction(2, 3) * k**3 + 2 * p * k * k + 3 * p * p * k + p**3 + c * k * k + 4 * c * p * k


_BY_NAME = {"existing": flops_existing, "recursive": flops_recursive, "sqrt": flops_sqrt}


def flops_for(algorithm, fi: FlopInputs) -> Fraction:
    return _BY_NAME[algorithm](fi)


def sqrt_minus_recursive_small_batch(p, k, c) -> Fraction:
    """``k^2 (2k/3 + c - p)``, the closed-form count difference when p < k."""
    return Fraction(k * k) * (Fraction(2 * k, 3) + c - p)


def crossover_cheaper(p, k, c) -> str:
    """``"sqrt"`` if ``p > 2k/3 + c``, otherwise ``"recursive"`` (ties included)."""
    return "sqrt" if Fraction(p) > Fraction(2 * k, 3) + c else "recursive"

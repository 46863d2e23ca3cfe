"""Dirichlet characters of prime modulus.

Characters are indexed against the smallest primitive root g of M:

    chi_k(g**j) = e(k*j/(M-1)),   chi_k(n) = 0 when M | n,

where e(x) = exp(2*pi*i*x).  Values are exact roots of unity: the angle
k*j/(M-1) is reduced mod 1 in integer arithmetic before exponentiation,
and values on the real and imaginary axes are snapped exactly, so the
quadratic character takes values in {-1, 0, 1} with no rounding fuzz.

Index 0 is the principal character.  It can be constructed and evaluated,
but operations that require primitivity (Gauss sums, L-values) reject it
with PrincipalCharacterNotAllowed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .modular import NotPrime, PrimeModulus, is_prime, prime_modulus

__all__ = [
    "e",
    "PrincipalCharacterNotAllowed",
    "DirichletCharacter",
    "character",
    "char_eval",
    "enumerate_characters",
    "orthogonality_check",
]


class PrincipalCharacterNotAllowed(ValueError):
    """The principal character was passed where a primitive one is required."""


def e(x):
    """The normalized exponential exp(2*pi*i*x); accepts scalars or arrays."""
    return np.exp(2j * np.pi * np.asarray(x, dtype=np.float64))


def _root_of_unity(num: int, den: int) -> complex:
    """e(num/den) with the angle reduced exactly; axis values are exact."""
    num %= den
    if num == 0:
        return 1.0 + 0.0j
    if 2 * num == den:
        return -1.0 + 0.0j
    if 4 * num == den:
        return 1.0j
    if 4 * num == 3 * den:
        return -1.0j
    return complex(np.exp(2j * np.pi * (num / den)))


@lru_cache(maxsize=512)
def _value_table(M: int, index: int) -> np.ndarray:
    """chi(n) for n in [0, M) as a read-only complex array."""
    mod = prime_modulus(M)
    order = M - 1
    num = (index * mod.dlog) % order
    table = np.exp(2j * np.pi * (num / order))
    # snap the axis values exactly
    table[num == 0] = 1.0
    table[2 * num == order] = -1.0
    table[4 * num == order] = 1.0j
    table[4 * num == 3 * order] = -1.0j
    table[0] = 0.0
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character mod a prime M > 3, fixed by its index k."""

    modulus: PrimeModulus
    index: int

    def __post_init__(self):
        if not 0 <= self.index <= self.modulus.M - 2:
            raise ValueError(
                f"index must lie in [0, {self.modulus.M - 2}] for modulus {self.modulus.M}"
            )

    @property
    def M(self) -> int:
        return self.modulus.M

    def __call__(self, n: int) -> complex:
        j = self.modulus.dlog_of(n)
        if j < 0:
            return 0.0 + 0.0j
        return _root_of_unity(self.index * j, self.M - 1)

    def values(self, n) -> np.ndarray:
        """Vectorized chi(n) for an integer array."""
        n = np.asarray(n)
        return self.value_table()[np.mod(n, self.M)]

    def value_table(self) -> np.ndarray:
        """chi on a full residue system [0, M), cached per (M, index)."""
        return _value_table(self.M, self.index)

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, (self.M - 1 - self.index) % (self.M - 1))

    @property
    def is_principal(self) -> bool:
        return self.index == 0

    @property
    def is_primitive(self) -> bool:
        # prime modulus: every non-principal character is primitive
        return self.index != 0

    @property
    def is_quadratic(self) -> bool:
        return 2 * self.index == self.M - 1

    @property
    def order(self) -> int:
        return (self.M - 1) // math.gcd(self.index, self.M - 1)

    def __repr__(self) -> str:
        return f"DirichletCharacter(M={self.M}, index={self.index})"


def character(M: int, index: int) -> DirichletCharacter:
    """Convenience constructor from a bare modulus."""
    return DirichletCharacter(prime_modulus(M), index)


def char_eval(chi: DirichletCharacter, n: int) -> complex:
    """chi(n) as an exact root of unity (0 when M | n)."""
    return chi(n)


def enumerate_characters(M: int, which: str = "all") -> list[DirichletCharacter]:
    """Characters mod prime M > 3: 'all', 'primitive', or 'quadratic'.

    For prime modulus the non-principal characters are exactly the primitive
    ones, and the unique quadratic character has index (M-1)/2.
    """
    if not is_prime(M):
        raise NotPrime(f"{M} is not prime")
    if M <= 3:
        raise ValueError("enumerate_characters requires M > 3")
    mod = prime_modulus(M)
    if which == "all":
        indices = range(M - 1)
    elif which == "primitive":
        indices = range(1, M - 1)
    elif which == "quadratic":
        indices = [(M - 1) // 2]
    else:
        raise ValueError(f"unknown character filter {which!r}")
    return [DirichletCharacter(mod, k) for k in indices]


def orthogonality_check(M: int, tol: float = 1e-12) -> bool:
    """Row and column orthogonality of the full character table mod M.

    Checks sum_n chi(n) = 0 for every non-principal chi, and
    sum_chi chi(n) = 0 for every n != 1 in [0, M).
    """
    chars = enumerate_characters(M, "all")
    table = np.vstack([chi.value_table() for chi in chars])
    row_sums = table.sum(axis=1)
    col_sums = table.sum(axis=0)
    rows_ok = bool(np.all(np.abs(row_sums[1:]) < tol))
    cols = np.abs(col_sums)
    cols_ok = bool(np.all(np.delete(cols, 1) < tol))
    return rows_ok and cols_ok

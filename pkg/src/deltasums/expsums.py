"""Finite exponential and character sums over prime (and composite) moduli.

The sums implemented here:

* trivial_delta(n, m, q): the exact divisor-dissected delta symbol

      delta(n = m mod q) = (1/q) * sum_{c | q} sum_{a mod c, (a,c)=1} e(a(n-m)/c),

  an identity in which the inner sums are Ramanujan sums.

* ramanujan_sum(M, a) = sum over units z mod M of e(az/M).

* gauss_sum(chi) = sum_y chi(y) e(y/M), primitive chi only; |g_chi| = sqrt(M).

* kloosterman_sum(a, b, c) = sum over units x mod c of e((ax + b*xbar)/c),
  real by the x -> xbar symmetry, with the Weil bound 2*sqrt(p) at primes.

* generalized_kloosterman(chi, r, n) = sum over units x of chi(x) e((rx + n*xbar)/M).

* frak_k(chi, r, ell, n) = sum over units z of chibar(r + ell*z) e(n*zbar/M).
  When M | n and gcd(r, M) = 1 the sum collapses exactly to -chibar(r);
  otherwise it exhibits square-root cancellation.

* frak_c(chi, r1, r2, alpha, beta, n) =
      sum over units z with n + beta*zbar a unit of
          chibar(r1 + z) * chi(r2 + alpha*(n + beta*zbar)^{-1}).
  Degenerate parameter classes evaluate in closed form (frak_c_closed_form);
  generic parameters exhibit square-root cancellation.

Here xbar denotes the inverse of x for the relevant modulus, and
e(x) = exp(2*pi*i*x).  Brute-force sums are evaluated with exact integer
phase arithmetic (angles reduced mod 1 in integers before exponentiation)
and compensated summation via math.fsum on the real and imaginary parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .characters import DirichletCharacter, PrincipalCharacterNotAllowed
from .modular import inverse_table, unit_residues

__all__ = [
    "EllNotCoprime",
    "AlphaBetaNotCoprime",
    "ParameterConflict",
    "ExpSumResult",
    "CancellationProfile",
    "trivial_delta",
    "ramanujan_sum",
    "gauss_sum",
    "fourier_expansion_check",
    "kloosterman_sum",
    "generalized_kloosterman",
    "frak_k",
    "frak_k_closed_form",
    "frak_c",
    "frak_c_closed_form",
    "alpha_factorization_check",
    "weil_bound_profile",
    "sqrt_cancellation_profile",
]


class EllNotCoprime(ValueError):
    """The shift ell shares a factor with the modulus."""


class AlphaBetaNotCoprime(ValueError):
    """alpha*beta shares a factor with the modulus."""


class ParameterConflict(ValueError):
    """No summand satisfies the stated side conditions."""


def _csum(values: np.ndarray) -> complex:
    """Compensated complex reduction (exact fsum on each part)."""
    arr = np.asarray(values, dtype=np.complex128).ravel()
    return complex(math.fsum(arr.real), math.fsum(arr.imag))


@lru_cache(maxsize=None)
def _exp_table(c: int) -> np.ndarray:
    """e(j/c) for j in [0, c), read-only."""
    tab = np.exp(2j * np.pi * np.arange(c) / c)
    tab[0] = 1.0
    if c % 2 == 0:
        tab[c // 2] = -1.0
    tab.setflags(write=False)
    return tab


@lru_cache(maxsize=1 << 20)
def _unit_additive_sum(c: int, d: int) -> complex:
    """sum over units a mod c of e(a*d/c); d is reduced mod c by the caller."""
    units = unit_residues(c)
    return _csum(_exp_table(c)[(units * d) % c])


@dataclass(frozen=True)
class ExpSumResult:
    """A finite sum value with its modulus, evaluation route and size scale."""

    value: complex
    modulus: int
    method: str  # "brute_force" | "closed_form"
    normalized_size: float  # |value| / sqrt(modulus)

    @classmethod
    def brute(cls, value: complex, modulus: int) -> "ExpSumResult":
        return cls(value, modulus, "brute_force", abs(value) / math.sqrt(modulus))

    @classmethod
    def closed(cls, value: complex, modulus: int) -> "ExpSumResult":
        return cls(value, modulus, "closed_form", abs(value) / math.sqrt(modulus))


@dataclass(frozen=True)
class CancellationProfile:
    """Empirical |sum|/sqrt(M) statistics over random admissible parameters."""

    family: str
    modulus: int
    samples: int
    seed: int
    max_ratio: float
    mean_ratio: float


def trivial_delta(n: int, m: int, q: int) -> complex:
    """The divisor-dissected indicator of n = m (mod q).

    Evaluates (1/q) sum_{c|q} sum_{(a,c)=1} e(a(n-m)/c) by brute force over
    coprime residues; the value equals the indicator exactly for every q >= 1.
    """
    if q < 1:
        raise ValueError("trivial_delta requires q >= 1")
    d = n - m
    total = 0.0 + 0.0j
    c = 1
    # iterate divisors without materializing them: q is desk-scale
    while c * c <= q:
        if q % c == 0:
            total += _unit_additive_sum(c, d % c)
            c2 = q // c
            if c2 != c:
                total += _unit_additive_sum(c2, d % c2)
        c += 1
    return total / q


def ramanujan_sum(M: int, a: int) -> float:
    """sum over units z mod M of e(az/M), real-valued."""
    if M < 1:
        raise ValueError("ramanujan_sum requires M >= 1")
    return _unit_additive_sum(M, a % M).real


def gauss_sum(chi: DirichletCharacter) -> complex:
    """sum_y chi(y) e(y/M) for primitive chi; |value| = sqrt(M)."""
    if chi.is_principal:
        raise PrincipalCharacterNotAllowed("gauss_sum requires a primitive character")
    M = chi.M
    order = M - 1
    y = np.arange(1, M, dtype=np.int64)
    dlog = chi.modulus.dlog[1:]
    # combined angle (k*dlog)/(M-1) + y/M reduced exactly over denominator M(M-1)
    den = M * order
    num = (chi.index * dlog * M + y * order) % den
    return _csum(np.exp(2j * np.pi * (num / den)))


def fourier_expansion_check(chi: DirichletCharacter, a: int, tol: float = 1e-10) -> bool:
    """Verify chi(a) = (1/g_chibar) sum_y chibar(y) e(ay/M)."""
    if chi.is_principal:
        raise PrincipalCharacterNotAllowed("expansion requires a primitive character")
    M = chi.M
    conj_tab = chi.conjugate().value_table()
    y = np.arange(M, dtype=np.int64)
    rhs = _csum(conj_tab[y] * _exp_table(M)[(a % M) * y % M]) / gauss_sum(chi.conjugate())
    return abs(rhs - chi(a)) < tol


def kloosterman_sum(a: int, b: int, c: int) -> float:
    """sum over units x mod c of e((ax + b*xbar)/c); real by x -> xbar symmetry."""
    if c < 1:
        raise ValueError("kloosterman_sum requires c >= 1")
    units = unit_residues(c)
    inv = inverse_table(c)
    phases = ((a % c) * units + (b % c) * inv) % c
    return _csum(_exp_table(c)[phases]).real


def generalized_kloosterman(chi: DirichletCharacter, r: int, n: int) -> complex:
    """sum over units x mod M of chi(x) e((rx + n*xbar)/M)."""
    M = chi.M
    units = unit_residues(M)
    inv = inverse_table(M)
    tab = chi.value_table()
    phases = ((r % M) * units + (n % M) * inv) % M
    return _csum(tab[units] * _exp_table(M)[phases])


def frak_k(chi: DirichletCharacter, r: int, ell: int, n: int) -> ExpSumResult:
    """Brute-force sum over units z of chibar(r + ell*z) e(n*zbar/M)."""
    M = chi.M
    if math.gcd(ell, M) != 1:
        raise EllNotCoprime(f"gcd(ell={ell}, M={M}) != 1")
    z = unit_residues(M)
    zbar = inverse_table(M)
    conj_tab = chi.conjugate().value_table()
    w = ((r % M) + (ell % M) * z) % M
    terms = conj_tab[w] * _exp_table(M)[(n % M) * zbar % M]
    return ExpSumResult.brute(_csum(terms), M)


def frak_k_closed_form(chi: DirichletCharacter, r: int, ell: int, n: int) -> ExpSumResult | None:
    """Exact value -chibar(r) when M | n and gcd(r, M) = 1; None otherwise."""
    M = chi.M
    if math.gcd(ell, M) != 1:
        raise EllNotCoprime(f"gcd(ell={ell}, M={M}) != 1")
    if n % M == 0 and math.gcd(r, M) == 1:
        return ExpSumResult.closed(-chi.conjugate()(r), M)
    return None


def frak_c(
    chi: DirichletCharacter, r1: int, r2: int, alpha: int, beta: int, n: int
) -> ExpSumResult:
    """Brute-force paired character sum with an inverted-shift argument.

    sum over units z mod M, restricted to n + beta*zbar a unit, of
    chibar(r1 + z) * chi(r2 + alpha*(n + beta*zbar)^{-1}).
    """
    M = chi.M
    if math.gcd(alpha * beta, M) != 1:
        raise AlphaBetaNotCoprime(f"gcd(alpha*beta, {M}) != 1")
    z = unit_residues(M)
    zbar = inverse_table(M)
    t = ((n % M) + (beta % M) * zbar) % M
    keep = t != 0
    # inverse of t on the kept entries, via the unit tables
    full_inv = np.zeros(M, dtype=np.int64)
    full_inv[unit_residues(M)] = inverse_table(M)
    tab = chi.value_table()
    conj_tab = chi.conjugate().value_table()
    w = ((r1 % M) + z[keep]) % M
    u = ((r2 % M) + (alpha % M) * full_inv[t[keep]]) % M
    return ExpSumResult.brute(_csum(conj_tab[w] * tab[u]), M)


def frak_c_closed_form(
    chi: DirichletCharacter, r1: int, r2: int, alpha: int, beta: int, n: int
) -> ExpSumResult | None:
    """Closed forms of frak_c on the degenerate parameter classes.

    Requires gcd(r1*r2, M) = 1 in addition to gcd(alpha*beta, M) = 1; the
    classes are routed in this order:

    1. M | n:  chi(alpha*betabar) R_M(r2 - r1*alpha*betabar) - chi(r2*r1bar),
       with R_M the Ramanujan sum (M - 1 at multiples of M, else -1).
    2. M does not divide n and n = beta*r1bar - alpha*r2bar (mod M):
       -chi^2(r2*r1bar) chi(beta*alphabar) - chi(r2*r1bar).
    3. M does not divide n and r1 = nbar*beta, r2 = -nbar*alpha (mod M):
       -chi(n*r2*betabar) for chi of order > 2, and
       chi(nbar*r2*beta) * (M - 2) for quadratic chi.  (Direct enumeration
       gives M - 2: the excluded summand removes one unit from the full
       principal-character sum M - 1.)

    Generic parameters have no closed form and None is returned.
    """
    M = chi.M
    if math.gcd(alpha * beta, M) != 1:
        raise AlphaBetaNotCoprime(f"gcd(alpha*beta, {M}) != 1")
    if math.gcd(r1 * r2, M) != 1:
        return None
    r1bar = pow(r1, -1, M)
    r2bar = pow(r2, -1, M)
    abar = pow(alpha, -1, M)
    bbar = pow(beta, -1, M)
    if n % M == 0:
        rama = float(M - 1) if (r2 - r1 * alpha * bbar) % M == 0 else -1.0
        value = chi(alpha * bbar) * rama - chi(r2 * r1bar)
        return ExpSumResult.closed(value, M)
    nbar = pow(n % M, -1, M)
    if (beta * r1bar - alpha * r2bar - n) % M == 0:
        base = chi(r2 * r1bar)
        value = -base * base * chi(beta * abar) - base
        return ExpSumResult.closed(value, M)
    if (r1 - nbar * beta) % M == 0 and (r2 + nbar * alpha) % M == 0:
        if chi.is_quadratic:
            value = chi(nbar * r2 * beta) * (M - 2)
        else:
            value = -chi(n * r2 * bbar)
        return ExpSumResult.closed(value, M)
    return None


def alpha_factorization_check(
    chi: DirichletCharacter, p: int, r: int, ell: int, n: int, tol: float = 1e-10
) -> bool:
    """Factor a unit sum mod p*M through the Chinese remainder theorem.

    For both signs s = +-1, compares

      LHS = sum over units alpha mod pM with r = alpha*ell (mod p) of
            chibar(r - alpha*ell) e(s * alphabar * n / (pM))

    against

      RHS = e(s * (rM)^{-1} n ell / p) *
            sum over units alpha mod M of chibar(r - alpha*ell) e(s * (alpha*p)^{-1} n / M),

    where the congruence mod p pins alpha = r*ellbar (mod p).
    """
    M = chi.M
    from .modular import is_prime  # local to avoid polluting module surface

    if not is_prime(p):
        raise ParameterConflict(f"p = {p} must be prime")
    if p == M:
        raise ParameterConflict("p must differ from the character modulus")
    if math.gcd(r, p) != 1:
        raise ParameterConflict(f"gcd(r={r}, p={p}) != 1 leaves no admissible alpha")
    if math.gcd(ell, p) != 1:
        raise ParameterConflict(f"p | ell leaves the congruence r = alpha*ell unsolvable")
    q = p * M
    conj_tab = chi.conjugate().value_table()
    a_p = r * pow(ell, -1, p) % p
    alpha0 = unit_residues(M)
    # CRT lift: alpha = a_p (mod p), alpha = alpha0 (mod M)
    lift = (a_p * M * pow(M, -1, p) + alpha0 * p * pow(p, -1, M)) % q
    alphabar = np.array([pow(int(x), -1, q) for x in lift], dtype=np.int64)
    chi_part = conj_tab[(r - alpha0 * ell) % M]
    pref_num = pow(r * M % p, -1, p) * n * ell % p
    inner_phase = np.array(
        [pow(int(x) * p % M, -1, M) for x in alpha0], dtype=np.int64
    ) * (n % M) % M
    for s in (1, -1):
        lhs = _csum(chi_part * _exp_table(q)[(s * alphabar * (n % q)) % q])
        rhs = _exp_table(p)[(s * pref_num) % p] * _csum(
            chi_part * _exp_table(M)[(s * inner_phase) % M]
        )
        if abs(lhs - rhs) >= tol:
            return False
    return True


def weil_bound_profile(pmax: int) -> tuple[float, int]:
    """Largest |S(a,b;p)| / (2*sqrt(p)) over (a, b) != (0, 0) mod p, p <= pmax.

    Evaluates every Kloosterman sum mod p at once as a matrix product
    e(ax/p) @ e(b*xbar/p); returns (max ratio, the prime attaining it).
    The Weil bound asserts the ratio never exceeds 1; the fully degenerate
    pair a = b = 0, where the sum collapses to phi(p), is excluded.
    """
    from .modular import primes_in

    worst, worst_p = 0.0, 0
    for p in primes_in(2, pmax):
        units = unit_residues(p)
        inv = inverse_table(p)
        tab = _exp_table(p)
        left = tab[np.outer(np.arange(p), units) % p]
        right = tab[np.outer(inv, np.arange(p)) % p]
        mags = np.abs(left @ right)
        mags[0, 0] = 0.0
        ratio = float(mags.max()) / (2.0 * math.sqrt(p))
        if ratio > worst:
            worst, worst_p = ratio, p
    return worst, worst_p


def _profile_sample(family: str, chi: DirichletCharacter, rng: np.random.Generator) -> float:
    M = chi.M
    if family == "kloosterman":
        a = int(rng.integers(0, M))
        b = int(rng.integers(0, M))
        return abs(kloosterman_sum(a, b, M))
    if family == "generalized_kloosterman":
        r = int(rng.integers(1, M))
        n = int(rng.integers(1, M))
        return abs(generalized_kloosterman(chi, r, n))
    if family == "frak_k":
        r = int(rng.integers(1, M))
        ell = int(rng.integers(1, M))
        n = int(rng.integers(1, M))  # M never divides n, the generic regime
        return abs(frak_k(chi, r, ell, n).value)
    if family == "frak_c":
        while True:
            r1 = int(rng.integers(1, M))
            r2 = int(rng.integers(1, M))
            alpha = int(rng.integers(1, M))
            beta = int(rng.integers(1, M))
            n = int(rng.integers(1, M))
            if frak_c_closed_form(chi, r1, r2, alpha, beta, n) is None:
                return abs(frak_c(chi, r1, r2, alpha, beta, n).value)
    raise ValueError(f"unknown sum family {family!r}")


def sqrt_cancellation_profile(
    family: str, M: int, samples: int, seed: int = 1
) -> CancellationProfile:
    """Max and mean of |sum|/sqrt(M) over random admissible parameters.

    family is one of kloosterman, generalized_kloosterman, frak_k, frak_c.
    The character, where one is needed, cycles over the primitive indices.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    from .modular import prime_modulus

    mod = prime_modulus(M)
    rng = np.random.default_rng(seed)
    root = math.sqrt(M)
    ratios = []
    for i in range(samples):
        index = 1 + (i % (M - 2)) if M > 4 else 1
        chi = DirichletCharacter(mod, index)
        ratios.append(_profile_sample(family, chi, rng) / root)
    return CancellationProfile(
        family=family,
        modulus=M,
        samples=samples,
        seed=seed,
        max_ratio=max(ratios),
        mean_ratio=math.fsum(ratios) / samples,
    )

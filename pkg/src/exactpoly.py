"""
Exact rational coefficient families for the uniform expansions.

- RationalPoly: immutable polynomial over Fraction, labelled by its variable.
- generate_phi / generate_psi: φ_s(τ), ψ_s(τ) of the modified expansions.
- generate_uv: u_s(t), r_s(t), v_s(t) of the unmodified expansions.
- constants: g_s, γ_s (gamma-function series), α_m, β_m (Airy series).
- appendix_fk: the Laplace-integral coefficients f_k(λ) computed in Q(√σ).
- pn_polynomials, fk_polynomials: P_n(a) and f_k/ρ^k as polynomials.
- Identity checks reused by ``pcf check`` and the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from errors import DomainError, InternalError
from logs import get_logger

log = get_logger("pcf.exactpoly")

Rational = Fraction
Number = Union[int, Fraction]

FAMILIES = ("phi", "psi", "u", "r", "v", "f", "P")


# ------------ Polynomials ------------


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial with Fraction coefficients; ``coeffs[k]`` multiplies x^k."""

    coeffs: Tuple[Fraction, ...]
    variable: str = "t"

    def __post_init__(self) -> None:
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @staticmethod
    def const(c: Number, variable: str = "t") -> "RationalPoly":
        return RationalPoly((Fraction(c),), variable)

    @staticmethod
    def x(variable: str = "t") -> "RationalPoly":
        return RationalPoly((Fraction(0), Fraction(1)), variable)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def lowest_power(self) -> int:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return -1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    # ------------ arithmetic ------------

    def _lift(self, other: Any) -> "RationalPoly":
        if isinstance(other, RationalPoly):
            return other
        return RationalPoly.const(other, self.variable)

    def __add__(self, other: Any) -> "RationalPoly":
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return RationalPoly(tuple(self.coeff(k) + o.coeff(k) for k in range(n)), self.variable)

    __radd__ = __add__

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(tuple(-c for c in self.coeffs), self.variable)

    def __sub__(self, other: Any) -> "RationalPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> "RationalPoly":
        return self._lift(other) - self

    def __mul__(self, other: Any) -> "RationalPoly":
        if not isinstance(other, RationalPoly):
            c = Fraction(other)
            return RationalPoly(tuple(c * a for a in self.coeffs), self.variable)
        if self.is_zero or other.is_zero:
            return RationalPoly((), self.variable)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(tuple(out), self.variable)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RationalPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def deriv(self) -> "RationalPoly":
        return RationalPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k), self.variable)

    def integ(self) -> "RationalPoly":
        """Antiderivative vanishing at 0."""
        return RationalPoly(
            (Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(self.coeffs)),
            self.variable,
        )

    def compose(self, inner: "RationalPoly") -> "RationalPoly":
        """self(inner(y)); the result carries inner's variable."""
        out = RationalPoly((), inner.variable)
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def shift(self, c: Number, variable: Optional[str] = None) -> "RationalPoly":
        """p(y + c) as a polynomial in y."""
        return self.compose(RationalPoly((Fraction(c), Fraction(1)), variable or self.variable))

    def div_xk(self, k: int) -> "RationalPoly":
        """Exact division by x^k."""
        if any(self.coeff(j) for j in range(k)):
            raise InternalError(f"polynomial not divisible by {self.variable}^{k}")
        return RationalPoly(self.coeffs[k:], self.variable)

    def relabel(self, variable: str) -> "RationalPoly":
        return RationalPoly(self.coeffs, variable)

    # ------------ evaluation ------------

    def __call__(self, x: Any) -> Any:
        """Horner evaluation; exact for Fraction input, native for float or mpf."""
        acc: Any = 0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (int, Fraction)) else _as_native(c, x))
        return acc

    def to_floats(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs] or [0.0], dtype=float)

    def to_json(self) -> List[str]:
        return [str(c) for c in self.coeffs]

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"({c}){self.variable}^{k}")
        return " + ".join(terms)


def _as_native(c: Fraction, like: Any) -> Any:
    if isinstance(like, float):
        return c.numerator / c.denominator
    # mpmath numbers (and anything else supporting true division by int)
    return like.__class__(c.numerator) / c.denominator


ONE_TAU = RationalPoly.const(1, "τ")
TAU = RationalPoly.x("τ")
T = RationalPoly.x("t")


# ------------ φ_s, ψ_s ------------


@lru_cache(maxsize=16)
def generate_phi(S: int) -> Tuple[RationalPoly, ...]:
    """φ_0..φ_S in τ."""
    if S < 0:
        raise DomainError(f"order must be >= 0, got {S}")
    q = (TAU * TAU) * ((TAU + 1) * (TAU + 1)) * (-4)
    weight = RationalPoly((Fraction(3), Fraction(20), Fraction(20)), "τ")
    phi = [ONE_TAU]
    for _ in range(S):
        prev = phi[-1]
        phi.append(q * prev.deriv() - (weight * prev).integ() * Fraction(1, 4))
    return tuple(phi)


@lru_cache(maxsize=16)
def generate_psi(S: int) -> Tuple[RationalPoly, ...]:
    """ψ_0..ψ_S in τ."""
    phi = generate_phi(S)
    a = TAU * (TAU + 1) * (TAU * 2 + 1) * 2
    b = (TAU * TAU) * ((TAU + 1) * (TAU + 1)) * 8
    psi = [ONE_TAU]
    for s in range(1, S + 1):
        psi.append(phi[s] + a * phi[s - 1] + b * phi[s - 1].deriv())
    return tuple(psi)


# ------------ u_s, r_s, v_s ------------


def _u_chain(s: int, r_prev: RationalPoly, c0: Fraction) -> List[Fraction]:
    """Coefficients of a solution of (t²-1)u' - 3st·u = r_prev with u(0) = c0."""
    n = 3 * s + 1
    c = [Fraction(0)] * (n + 1)
    c[0] = c0
    c[1] = -r_prev.coeff(0)
    for m in range(1, n):
        c[m + 1] = ((m - 1 - 3 * s) * c[m - 1] - r_prev.coeff(m)) / (m + 1)
    return c


def _solve_u(s: int, r_prev: RationalPoly) -> RationalPoly:
    if s % 2 == 1:
        coeffs = _u_chain(s, r_prev, Fraction(0))
    else:
        a = _u_chain(s, r_prev, Fraction(0))
        b = _u_chain(s, r_prev, Fraction(1))
        top_a, top_b = a[3 * s], b[3 * s]
        if top_a == top_b:
            raise InternalError(f"u_{s}: homogeneous solution has no t^{3 * s} term")
        c0 = -top_a / (top_b - top_a)
        coeffs = [x + c0 * (y - x) for x, y in zip(a, b)]
    u = RationalPoly(tuple(coeffs), "t")
    residual = (T * T - 1) * u.deriv() - T * u * (3 * s) - r_prev
    if not residual.is_zero:
        raise InternalError(f"u_{s} is not a polynomial solution of its recursion")
    return u


@lru_cache(maxsize=16)
def generate_uv(
    S: int,
) -> Tuple[Tuple[RationalPoly, ...], Tuple[RationalPoly, ...], Tuple[RationalPoly, ...]]:
    """u_0..u_S, r_0..r_S and v_0..v_S in t."""
    if S < 0:
        raise DomainError(f"order must be >= 0, got {S}")
    three_t2_2 = RationalPoly((Fraction(2), Fraction(0), Fraction(3)), "t")
    t2m1 = T * T - 1
    u = [RationalPoly.const(1, "t")]
    r = [three_t2_2 * Fraction(1, 8)]
    for s in range(1, S + 1):
        us = _solve_u(s, r[s - 1])
        u.append(us)
        rs = three_t2_2 * us - T * r[s - 1] * (12 * (s + 1)) + t2m1 * r[s - 1].deriv() * 4
        r.append(rs * Fraction(1, 8))
    v = []
    for s in range(S + 1):
        vs = u[s]
        if s >= 1:
            vs = vs + T * u[s - 1] * Fraction(1, 2)
        if s >= 2:
            vs = vs - r[s - 2]
        v.append(vs)
    return tuple(u), tuple(r), tuple(v)


# ------------ Constants ------------


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    acc = sum((math.comb(n + 1, k) * bernoulli(k) for k in range(n)), Fraction(0))
    return -acc / (n + 1)


def gamma_coeffs(S: int) -> List[Fraction]:
    """γ_0..γ_S of Γ(½+z) ~ √(2π) e^{-z} z^z Σ γ_s z^{-s}."""
    # log series: ln Σγ_s z^{-s} = Σ_{k>=1} l_k z^{-k}
    l = [Fraction(0)] * (S + 1)
    for k in range(1, S + 1):
        b_half = (Fraction(2) ** (-k) - 1) * bernoulli(k + 1)
        l[k] = (-1) ** (k + 1) * b_half / (k * (k + 1))
    e = [Fraction(1)] + [Fraction(0)] * S
    for n in range(1, S + 1):
        e[n] = sum((k * l[k] * e[n - k] for k in range(1, n + 1)), Fraction(0)) / n
    return e


def airy_alpha(m: int) -> Fraction:
    """α_m = (2m+1)(2m+3)...(6m-1) / (m! 144^m)."""
    num = 1
    for j in range(2 * m + 1, 6 * m, 2):
        num *= j
    return Fraction(num, math.factorial(m) * 144**m)


def airy_beta(m: int) -> Fraction:
    return -Fraction(6 * m + 1, 6 * m - 1) * airy_alpha(m)


def g_coeffs(S: int) -> List[Fraction]:
    """g_0..g_S; odd entries are leading coefficients of u_s, even entries beyond 0 vanish."""
    u, _, _ = generate_uv(max(S, 0))
    out = [Fraction(1)]
    for s in range(1, S + 1):
        out.append(u[s].leading if s % 2 else Fraction(0))
    return out


def constants(S: int) -> Tuple[List[Fraction], List[Fraction], List[Fraction], List[Fraction]]:
    """(g, γ, α, β), each of length S+1."""
    if S < 0:
        raise DomainError(f"order must be >= 0, got {S}")
    return (
        g_coeffs(S),
        gamma_coeffs(S),
        [airy_alpha(m) for m in range(S + 1)],
        [airy_beta(m) for m in range(S + 1)],
    )


# ------------ Coefficient tables ------------


@dataclass(frozen=True)
class CoeffTables:
    """All families up to order S, plus float copies for the double evaluators."""

    order: int
    phi: Tuple[RationalPoly, ...]
    psi: Tuple[RationalPoly, ...]
    u: Tuple[RationalPoly, ...]
    r: Tuple[RationalPoly, ...]
    v: Tuple[RationalPoly, ...]
    g: Tuple[Fraction, ...]
    gamma_coeffs: Tuple[Fraction, ...]
    alpha: Tuple[Fraction, ...]
    beta: Tuple[Fraction, ...]
    phi_f: Tuple[np.ndarray, ...] = field(repr=False, compare=False, default=())
    psi_f: Tuple[np.ndarray, ...] = field(repr=False, compare=False, default=())
    u_f: Tuple[np.ndarray, ...] = field(repr=False, compare=False, default=())
    v_f: Tuple[np.ndarray, ...] = field(repr=False, compare=False, default=())

    def family(self, name: str) -> Sequence[RationalPoly]:
        if name not in ("phi", "psi", "u", "r", "v"):
            raise DomainError(f"unknown coefficient family: {name}")
        return getattr(self, name)


@lru_cache(maxsize=8)
def coeff_tables(S: int) -> CoeffTables:
    """Build (and memoize) every family up to order S.

    u and v are generated to 2S+1 so the oscillatory region can use index
    pairs (2s, 2s+1) for s <= S; α, β follow the same length.
    """
    if S < 0:
        raise DomainError(f"order must be >= 0, got {S}")
    n_uv = 2 * S + 1
    phi = generate_phi(S)
    psi = generate_psi(S)
    u, r, v = generate_uv(n_uv)
    g, gam, alpha, beta = constants(n_uv)
    log.debug("coefficient tables built to order %d", S)
    return CoeffTables(
        order=S,
        phi=tuple(phi),
        psi=tuple(psi),
        u=tuple(u),
        r=tuple(r),
        v=tuple(v),
        g=tuple(g),
        gamma_coeffs=tuple(gam),
        alpha=tuple(alpha),
        beta=tuple(beta),
        phi_f=tuple(p.to_floats() for p in phi),
        psi_f=tuple(p.to_floats() for p in psi),
        u_f=tuple(p.to_floats() for p in u),
        v_f=tuple(p.to_floats() for p in v),
    )


# ------------ Normalization series ------------


def big_h(mu: float, S: int = 6) -> float:
    """H(μ) ~ 1 + ½ Σ_{s>=1} (-1)^s γ_s / (½μ²)^s."""
    gam = gamma_coeffs(S)
    x = 0.5 * mu * mu
    return 1.0 + 0.5 * sum((-1) ** s * float(gam[s]) / x**s for s in range(1, S + 1))


def airy_wronskian_series(mu: float, S: int = 6) -> float:
    """μ⁴ Σ (-1)^s γ_s / (½μ²)^s, the right side of the modified Airy Wronskian."""
    gam = gamma_coeffs(S)
    x = 0.5 * mu * mu
    return mu**4 * sum((-1) ** s * float(gam[s]) / x**s for s in range(S + 1))


# ------------ P_n(a) and f_k polynomials ------------


def pn_polynomials(N: int) -> List[RationalPoly]:
    """P_0..P_N in a."""
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    a = RationalPoly.x("a")
    out = [RationalPoly.const(1, "a"), RationalPoly.const(Fraction(1, 2), "a")]
    for n in range(1, N):
        out.append(out[n] * (Fraction(2 * n + 1, 2)) + a * out[n - 1] * n)
    return out[: N + 1]


def fk_polynomials(K: int) -> List[RationalPoly]:
    """p_k(σ) with f_k(λ) = ρ^k p_k(σ), ρ = (2σ-1)²/σ; deg p_k = 2k."""
    phi = generate_phi(K)
    out = []
    for k, p in enumerate(phi):
        q = p.div_xk(k).shift(-1, "σ") * (Fraction(1, 2) ** k)
        out.append(q)
    return out


# ------------ Q(√σ) arithmetic ------------


@dataclass(frozen=True)
class QuadraticSurd:
    """p + q·√σ with rational p, q and a fixed non-square rational σ."""

    p: Fraction
    q: Fraction
    sigma: Fraction

    @staticmethod
    def rational(p: Number, sigma: Fraction) -> "QuadraticSurd":
        return QuadraticSurd(Fraction(p), Fraction(0), sigma)

    def _lift(self, other: Any) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            return other
        return QuadraticSurd(Fraction(other), Fraction(0), self.sigma)

    def __add__(self, other: Any) -> "QuadraticSurd":
        o = self._lift(other)
        return QuadraticSurd(self.p + o.p, self.q + o.q, self.sigma)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticSurd":
        return QuadraticSurd(-self.p, -self.q, self.sigma)

    def __sub__(self, other: Any) -> "QuadraticSurd":
        return self + (-self._lift(other))

    def __mul__(self, other: Any) -> "QuadraticSurd":
        o = self._lift(other)
        return QuadraticSurd(
            self.p * o.p + self.q * o.q * self.sigma,
            self.p * o.q + self.q * o.p,
            self.sigma,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "QuadraticSurd":
        o = self._lift(other)
        norm = o.p * o.p - o.q * o.q * self.sigma
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(sigma))")
        conj = QuadraticSurd(o.p / norm, -o.q / norm, self.sigma)
        return self * conj

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * math.sqrt(self.sigma)


def _exact_sqrt(x: Fraction) -> Optional[Fraction]:
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


# ------------ Appendix pipeline ------------


@dataclass(frozen=True)
class AppendixPipeline:
    sigma: Fraction
    lam: Fraction
    w0: Fraction
    d: Tuple[QuadraticSurd, ...]
    a_coeffs: Tuple[Tuple[QuadraticSurd, ...], ...]
    fk: Tuple[Fraction, ...]
    A: float
    Pn: Tuple[RationalPoly, ...]

    @property
    def rho(self) -> Fraction:
        return (2 * self.sigma - 1) ** 2 / self.sigma

    def phi_tilde(self, k: int) -> Fraction:
        """(-1)^k (2λ)^k f_k, which equals φ_k(σ - 1)."""
        return (-1) ** k * (2 * self.lam) ** k * self.fk[k]


def _series_mul(a: Sequence[QuadraticSurd], b: Sequence[QuadraticSurd], n: int) -> List[QuadraticSurd]:
    zero = a[0] * 0
    out = []
    for k in range(n):
        acc = zero
        for j in range(k + 1):
            if j < len(a) and k - j < len(b):
                acc = acc + a[j] * b[k - j]
        out.append(acc)
    return out


def _series_inv(a: Sequence[QuadraticSurd], n: int) -> List[QuadraticSurd]:
    out = [a[0]._lift(1) / a[0]]
    for k in range(1, n):
        acc = a[0] * 0
        for j in range(1, k + 1):
            if j < len(a):
                acc = acc + a[j] * out[k - j]
        out.append(-acc / a[0])
    return out


def _series_sqrt_unit(a: Sequence[QuadraticSurd], n: int) -> List[QuadraticSurd]:
    """Square root of a series with a[0] == 1."""
    out = [a[0]._lift(1)]
    for k in range(1, n):
        acc = a[k] if k < len(a) else a[0] * 0
        for j in range(1, k):
            acc = acc - out[j] * out[k - j]
        out.append(acc / 2)
    return out


def appendix_fk(K: int, sigma: Union[Fraction, str, int]) -> AppendixPipeline:
    """f_0..f_K for λ = σ(1-σ)/(2σ-1)², exact for rational σ in (½, 1)."""
    sigma = Fraction(sigma)
    if not (Fraction(1, 2) < sigma < 1):
        raise DomainError(f"sigma must lie in (1/2, 1), got {sigma}")
    if K < 0:
        raise DomainError(f"K must be >= 0, got {K}")

    w0 = (1 - sigma) / (2 * sigma - 1)
    lam = sigma * (1 - sigma) / (2 * sigma - 1) ** 2
    root = _exact_sqrt(sigma)

    def surd(p: Number, q: Number = 0) -> QuadraticSurd:
        if root is not None:
            return QuadraticSurd(Fraction(p) + Fraction(q) * root, Fraction(0), sigma)
        return QuadraticSurd(Fraction(p), Fraction(q), sigma)

    n_d = 2 * K + 4
    n_a = 2 * K + 3
    # d_1 = (2σ-1)/√σ = ((2σ-1)/σ)·√σ
    d: List[QuadraticSurd] = [surd(w0), surd(0, (2 * sigma - 1) / sigma)]
    lead = lam * (2 * w0 + 1)
    for n in range(1, n_d):
        d.append(surd(0))
        lhs = _lhs_coeff(d, lam, w0, n)
        d[n + 1] = (d[n] - lhs) / (d[1] * lead * (n + 2))

    # w'(u) and δ(u)/w0
    wprime = [d[k + 1] * (k + 1) for k in range(n_a)]
    den = [surd(1)] + [d[k] / w0 for k in range(1, n_a)]
    num = [surd(1), surd(1 / lam)]
    ratio = _series_mul(num, _series_inv(den, n_a), n_a)
    root_s = _series_sqrt_unit(ratio, n_a)
    pref = surd(0, 1 / (2 * sigma - 1)) if root is None else surd(root / (2 * sigma - 1))
    f0 = [pref * c for c in _series_mul(root_s, wprime, n_a)]

    rows = [f0]
    for _ in range(K):
        prev = rows[-1]
        rows.append(
            [
                prev[n + 2] * (lam * (n + 1)) + prev[n + 1] * Fraction(2 * n + 1, 2)
                for n in range(len(prev) - 2)
            ]
        )
    fk = []
    for k, row in enumerate(rows):
        val = row[0]
        if not val.is_rational:
            raise InternalError(f"f_{k} has an irrational part at sigma={sigma}")
        fk.append(val.p)

    wf, lf = float(w0), float(lam)
    A = 0.5 * wf * wf + wf - lf * math.log(wf) - lf + lf * math.log(lf)
    return AppendixPipeline(
        sigma=sigma,
        lam=lam,
        w0=w0,
        d=tuple(d),
        a_coeffs=tuple(tuple(r) for r in rows),
        fk=tuple(fk),
        A=A,
        Pn=tuple(pn_polynomials(2 * K + 2)),
    )


def _lhs_coeff(d: Sequence[QuadraticSurd], lam: Fraction, w0: Fraction, n: int) -> QuadraticSurd:
    """u^n coefficient of (λ+u)·w'·D·(2w0+1+uD), with D_k = d_{k+1}."""
    size = n + 1
    D = [d[k + 1] if k + 1 < len(d) else d[0] * 0 for k in range(size)]
    wp = [d[k + 1] * (k + 1) if k + 1 < len(d) else d[0] * 0 for k in range(size)]
    inner = [d[0]._lift(2 * w0 + 1)] + [D[k - 1] for k in range(1, size)]
    prod = _series_mul(_series_mul(wp, D, size), inner, size)
    out = prod[n] * lam
    if n >= 1:
        out = out + prod[n - 1]
    return out


# ------------ Identity checks ------------


def check_u_vs_phi(s_max: int = 4, samples: int = 20) -> float:
    """Largest relative mismatch of u_s(t) against (t²-1)^{3s/2} Σ g_{s-j} φ_j(τ(t))."""
    u, _, _ = generate_uv(s_max)
    phi = generate_phi(s_max)
    g = g_coeffs(s_max)
    worst = 0.0
    for t in np.linspace(1.05, 10.0, samples):
        t = float(t)
        root = math.sqrt((t - 1.0) * (t + 1.0))
        tau = 1.0 / (2.0 * root * (t + root))
        for s in range(1, s_max + 1):
            lhs = u[s](t)
            scale = (t * t - 1.0) ** (1.5 * s)
            terms = [float(g[s - j]) * phi[j](tau) for j in range(s + 1)]
            rhs = scale * sum(terms)
            # near a zero of u_s the sum cancels; measure against its term size
            size = max(abs(lhs), scale * sum(abs(x) for x in terms))
            worst = max(worst, abs(lhs - rhs) / size)
    return worst


def check_phi_tilde(k_max: int = 4, samples: int = 20) -> bool:
    """φ̃_k(σ) from the appendix pipeline equals φ_k(σ - 1) exactly."""
    phi = generate_phi(k_max)
    for i in range(samples):
        sigma = Fraction(11, 20) + Fraction(2 * i + 1, 5 * samples)
        pipe = appendix_fk(k_max, sigma)
        for k in range(k_max + 1):
            if pipe.phi_tilde(k) != phi[k](sigma - 1):
                log.debug("phi-tilde mismatch at k=%d sigma=%s", k, sigma)
                return False
    return True


PRINTED_PHI = {
    1: RationalPoly((0, Fraction(-3, 4), Fraction(-5, 2), Fraction(-5, 3)), "τ"),
}
PRINTED_PSI = {
    1: RationalPoly((0, Fraction(5, 4), Fraction(7, 2), Fraction(7, 3)), "τ"),
    2: RationalPoly(
        (0, 0)
        + tuple(Fraction(-c, 288) for c in (1215, 9684, 23028, 21840, 7280)),
        "τ",
    ),
}
PRINTED_U = {
    1: RationalPoly((0, Fraction(-6, 24), 0, Fraction(1, 24)), "t"),
    2: RationalPoly((Fraction(145, 1152), 0, Fraction(249, 1152), 0, Fraction(-9, 1152)), "t"),
}


def check_printed() -> Dict[str, bool]:
    phi = generate_phi(3)
    psi = generate_psi(3)
    u, _, _ = generate_uv(2)
    return {
        "phi_1": phi[1] == PRINTED_PHI[1],
        "phi_3_low_terms": phi[3].lowest_power >= 3,
        "phi_2_at_1": phi[2](Fraction(1)) == Fraction(53017, 288),
        "psi_1": psi[1] == PRINTED_PSI[1],
        "psi_2": psi[2] == PRINTED_PSI[2],
        "u_1": u[1] == PRINTED_U[1],
        "u_2": u[2] == PRINTED_U[2],
    }


def check_degrees(S: int = 8) -> bool:
    phi = generate_phi(S)
    u, _, _ = generate_uv(S)
    for s in range(1, S + 1):
        want_u = 3 * s if s % 2 else 3 * s - 2
        if u[s].degree != want_u:
            return False
        if phi[s].degree != 3 * s or phi[s].lowest_power < s:
            return False
    return True


# ------------ JSON ------------


def family_json(family: str, order: int) -> Dict[str, Any]:
    """{"family", "order", "coeffs"} for one member of a family."""
    if order < 0:
        raise DomainError(f"order must be >= 0, got {order}")
    if family == "phi":
        poly = generate_phi(order)[order]
    elif family == "psi":
        poly = generate_psi(order)[order]
    elif family in ("u", "r", "v"):
        u, r, v = generate_uv(order)
        poly = {"u": u, "r": r, "v": v}[family][order]
    elif family == "f":
        poly = fk_polynomials(order)[order]
    elif family == "P":
        poly = pn_polynomials(order)[order]
    else:
        raise DomainError(f"unknown coefficient family: {family}")
    return {
        "family": family,
        "order": order,
        "variable": poly.variable,
        "coeffs": poly.to_json() or ["0"],
    }

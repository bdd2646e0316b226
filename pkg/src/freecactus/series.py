"""Truncated formal power series over exact rationals, the counting
recursion for the odd-separating family, and the generating-function
identities it satisfies.

A TruncatedSeries carries coefficients c_0..c_N for a fixed order N and
every operation stays exact: results of binary operations carry the
minimum order of the operands, compositional inverses are extracted
coefficient by coefficient, and square roots branch to the positive
constant term.  On top of that sit the series pair (A, B) counting the
odd-separating partitions by parity, residual checks for the four
functional equations tying them together, the closed form of the inverted
moment series, and the degree-six polynomial satisfied by the Cauchy
transform."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from freecactus.cumulants import (
    CumulantSpec,
    format_rational,
    moments_from_cumulants,
)

DEFAULT_SERIES_ORDER = 12


@dataclass(frozen=True)
class TruncatedSeries:
    """A power series known exactly up to and including z^order."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("series order must be non-negative")
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != self.order + 1:
            raise ValueError(
                f"order {self.order} needs {self.order + 1} coefficients, "
                f"got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    # ------------------------------------------------------- constructors

    @classmethod
    def from_coefficients(cls, values, order: int | None = None) -> "TruncatedSeries":
        """Build a series from leading coefficients, zero-padded to order."""
        vals = [Fraction(v) for v in values]
        if order is None:
            order = len(vals) - 1 if vals else 0
        if len(vals) > order + 1:
            raise ValueError(
                f"{len(vals)} coefficients exceed order {order}"
            )
        vals += [Fraction(0)] * (order + 1 - len(vals))
        return cls(order, tuple(vals))

    @classmethod
    def constant(cls, value, order: int) -> "TruncatedSeries":
        return cls.from_coefficients([Fraction(value)], order)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls.from_coefficients([], order)

    @classmethod
    def identity(cls, order: int) -> "TruncatedSeries":
        """The series z."""
        if order < 1:
            raise ValueError("the identity series needs order at least 1")
        return cls.from_coefficients([0, 1], order)

    # ------------------------------------------------------------- access

    def __getitem__(self, n: int) -> Fraction:
        if not 0 <= n <= self.order:
            raise IndexError(
                f"coefficient {n} is beyond the carried order {self.order}"
            )
        return self.coeffs[n]

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def first_nonzero(self) -> int | None:
        """Index of the lowest nonzero coefficient, or None for the zero
        series; handy when reporting a residual that failed."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(
                f"cannot extend order {self.order} to {order}; coefficients "
                f"beyond the truncation are unknown"
            )
        return TruncatedSeries(order, self.coeffs[: order + 1])

    def to_json_obj(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    # --------------------------------------------------------- arithmetic

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(other, self.order)
        return None

    def _aligned(self, other):
        n = min(self.order, other.order)
        return self.truncate(n), other.truncate(n), n

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, n = self._aligned(other)
        return TruncatedSeries(
            n, tuple(x + y for x, y in zip(a.coeffs, b.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, n = self._aligned(other)
        out = [Fraction(0)] * (n + 1)
        for i, x in enumerate(a.coeffs):
            if x == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += x * b.coeffs[j]
        return TruncatedSeries(n, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("series powers take non-negative integers")
        result = TruncatedSeries.constant(1, self.order)
        for _ in range(exponent):
            result = result * self
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, n = self._aligned(other)
        if b.coeffs[0] == 0:
            raise ValueError(
                f"series division needs a unit divisor, got c_0 = 0"
            )
        out = [Fraction(0)] * (n + 1)
        for k in range(n + 1):
            acc = a.coeffs[k]
            for i in range(1, k + 1):
                acc -= b.coeffs[i] * out[k - i]
            out[k] = acc / b.coeffs[0]
        return TruncatedSeries(n, tuple(out))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def shift_down(self, k: int = 1) -> "TruncatedSeries":
        """Divide by z^k, requiring the low coefficients to vanish.  The
        carried order drops by k since the top information is spent."""
        if k < 0 or k > self.order:
            raise ValueError(f"cannot shift a series of order {self.order} down by {k}")
        for i in range(k):
            if self.coeffs[i] != 0:
                raise ValueError(
                    f"cannot divide by z^{k}: c_{i} = {self.coeffs[i]} is nonzero"
                )
        return TruncatedSeries(self.order - k, self.coeffs[k:])

    # ------------------------------------------------ composition and roots

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner), by Horner evaluation; inner must have no constant
        term or the substitution would need infinitely many coefficients."""
        if inner.coeffs[0] != 0:
            raise ValueError(
                f"composition needs inner c_0 = 0, got c_0 = {inner.coeffs[0]}"
            )
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        result = TruncatedSeries.constant(self.coeffs[n], n)
        for k in range(n - 1, -1, -1):
            result = result * inner + self.coeffs[k]
        return result

    def comp_inverse(self) -> "TruncatedSeries":
        """The compositional inverse, coefficient by coefficient.

        At each order the only unknown enters linearly through c_1, so
        composing with the partial inverse and correcting the top
        coefficient is a complete triangular solve."""
        if self.coeffs[0] != 0:
            raise ValueError(
                f"compositional inverse needs c_0 = 0, got c_0 = {self.coeffs[0]}"
            )
        if self.order < 1 or self.coeffs[1] == 0:
            c1 = self.coeffs[1] if self.order >= 1 else "absent"
            raise ValueError(
                f"compositional inverse needs c_1 invertible, got c_1 = {c1}"
            )
        inv = [Fraction(0)] * (self.order + 1)
        inv[1] = 1 / self.coeffs[1]
        for k in range(2, self.order + 1):
            partial = TruncatedSeries(k, tuple(inv[: k + 1]))
            residue = self.truncate(k).compose(partial).coeffs[k]
            inv[k] = -residue / self.coeffs[1]
        return TruncatedSeries(self.order, tuple(inv))

    def sqrt(self) -> "TruncatedSeries":
        """The square root branch with positive constant term.  Needs c_0
        to be the square of a positive rational so every later coefficient
        stays rational."""
        c0 = self.coeffs[0]
        if c0 <= 0:
            raise ValueError(
                f"series sqrt needs a positive constant term, got c_0 = {c0}"
            )
        np_, dp = c0.numerator, c0.denominator
        rn, rd = math.isqrt(np_), math.isqrt(dp)
        if rn * rn != np_ or rd * rd != dp:
            raise ValueError(
                f"series sqrt needs c_0 to be a rational square, got c_0 = {c0}"
            )
        root = Fraction(rn, rd)
        out = [root] + [Fraction(0)] * self.order
        for k in range(1, self.order + 1):
            acc = self.coeffs[k]
            for i in range(1, k):
                acc -= out[i] * out[k - i]
            out[k] = acc / (2 * root)
        return TruncatedSeries(self.order, tuple(out))


# --------------------------------------------------- the counting recursion


def _count_lists(n_max: int) -> tuple[list[int], list[int]]:
    """Family sizes by parity: alpha[i] counts the even ground set 2i
    (alpha[0] = 1 for the empty partition), beta[i] the odd ground set
    2i - 1.

    The recursion mirrors the removal of the block containing the last
    element: beta picks up 1/(1 - B) against the shifted alpha sequence,
    alpha picks up the even-length compositions 1/(1 - B^2) plus the
    boundary convolution of beta with itself one order up.
    """
    alpha = [1] + [0] * n_max
    beta = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        g = [0] * n
        g[0] = 1
        for m in range(1, n):
            g[m] = sum(beta[i] * g[m - i] for i in range(1, m + 1))
        beta[n] = sum(g[m] * alpha[n - 1 - m] for m in range(n))
        b2 = [0] * (n + 2)
        for u in range(2, n + 2):
            b2[u] = sum(beta[i] * beta[u - i] for i in range(1, u))
        h = [0] * (n + 1)
        h[0] = 1
        for m in range(2, n + 1):
            h[m] = sum(b2[i] * h[m - i] for i in range(2, m + 1))
        alpha[n] = sum(b2[u] * h[n - u] for u in range(2, n + 1)) + b2[n + 1]
    return alpha, beta


def y_count_recursive(m: int) -> int:
    """Size of the odd-separating family on [m], from the recursion alone;
    no partition is ever materialized, so this reaches far beyond the
    enumeration cap."""
    if m < 1:
        raise ValueError("ground set size must be at least 1")
    alpha, beta = _count_lists((m + 1) // 2)
    return alpha[m // 2] if m % 2 == 0 else beta[(m + 1) // 2]


def y_series(order: int = DEFAULT_SERIES_ORDER) -> tuple[TruncatedSeries, TruncatedSeries]:
    """The pair (A, B) of counting series: A collects the even ground set
    sizes, B the odd ones.  Both are constant-free by construction."""
    alpha, beta = _count_lists(order)
    a = TruncatedSeries.from_coefficients([0] + alpha[1 : order + 1], order)
    b = TruncatedSeries.from_coefficients([0] + beta[1 : order + 1], order)
    return a, b


def free_poisson_pair_cumulants(n_max: int) -> list[Fraction]:
    """kappa_n(ab + ba) for free Poisson(1) variables a and b, n up to
    n_max: twice the even-index family count, computed by recursion."""
    alpha, _beta = _count_lists(n_max)
    return [Fraction(2 * alpha[n]) for n in range(1, n_max + 1)]


# --------------------------------------------------- functional equations


@dataclass(frozen=True)
class FunctionalEquationReport:
    """Residual series for the four identities tying A and B together.
    Every residual must be the zero series for an honest counting pair."""

    residuals: tuple[tuple[str, TruncatedSeries], ...]

    @property
    def all_pass(self) -> bool:
        return all(r.is_zero for _name, r in self.residuals)

    def failing(self) -> list[str]:
        return [name for name, r in self.residuals if not r.is_zero]

    def to_json_obj(self) -> dict:
        out = {}
        for name, r in self.residuals:
            entry = {"pass": r.is_zero, "residual": r.to_json_obj()}
            if not r.is_zero:
                entry["first_nonzero_order"] = r.first_nonzero()
            out[name] = entry
        return out


def check_functional_equations(
    a: TruncatedSeries, b: TruncatedSeries
) -> FunctionalEquationReport:
    """Evaluate the four functional equations on a candidate pair.

    even_from_odd expresses A through B (the B^2/x term costs one order
    of precision), odd_from_even goes the other way, and the two quartics
    eliminate one series entirely: a degree-four polynomial relation for
    A + 1, and B(1 - 2B)(1 - B)(1 + B) = x for B."""
    if a.order != b.order:
        raise ValueError(
            f"series orders must match, got {a.order} and {b.order}"
        )
    one = TruncatedSeries.constant(1, a.order)
    x = TruncatedSeries.identity(a.order)
    b2 = b * b
    even_from_odd = a - b2 / (one - b2) - b2.shift_down(1)
    odd_from_even = b - (a + 1) * x / (one - b)
    a1 = a + 1
    even_quartic = (
        4 * a1**4 * x * x + 7 * a1**3 * x - 4 * a1**2 * x - 2 * a1**2 + a1 + 1
    )
    odd_quartic = b * (1 - 2 * b) * (1 - b) * (1 + b) - x
    return FunctionalEquationReport(
        (
            ("even_from_odd", even_from_odd),
            ("odd_from_even", odd_from_even),
            ("even_quartic", even_quartic),
            ("odd_quartic", odd_quartic),
        )
    )


# ------------------------------------------------------------ closed forms


def minverse_closed_form(order: int = DEFAULT_SERIES_ORDER) -> TruncatedSeries:
    """Taylor coefficients of the closed-form compositional inverse of the
    anti-commutator moment series for the free Poisson(1) pair:

        (-7z - 6 + 3 sqrt((z + 2)(9z + 2))) / (4 (z + 2)^2 (z + 1))

    The radicand expands to 4 + 20z + 9z^2, whose square root exists as a
    rational series; the denominator is a unit with constant term 16."""
    if order < 1:
        raise ValueError("closed form needs order at least 1")
    radicand = TruncatedSeries.from_coefficients([4, 20, 9], order)
    numerator = 3 * radicand.sqrt() - TruncatedSeries.from_coefficients(
        [6, 7], order
    )
    denominator = TruncatedSeries.from_coefficients([16, 32, 20, 4], order)
    return numerator / denominator


class RMSeries(NamedTuple):
    R: TruncatedSeries
    M: TruncatedSeries


def r_m_transfer(
    cumulants: CumulantSpec | Sequence, order: int = DEFAULT_SERIES_ORDER
) -> RMSeries:
    """The cumulant series R(z) and moment series M(z) of one
    distribution, both constant-free and truncated at the same order.

    Their compositional inverses are tied by M^(-1)(z) = R^(-1)(z)/(1+z)
    whenever the inverses exist (first cumulant nonzero); tests and the
    CLI verification suite assert that identity on concrete data."""
    if order < 1:
        raise ValueError("transfer needs order at least 1")
    if isinstance(cumulants, CumulantSpec):
        spec = cumulants
    else:
        values = [Fraction(c) for c in cumulants]
        if len(values) < order:
            raise ValueError(
                f"need {order} cumulants for order {order}, got {len(values)}"
            )
        spec = CumulantSpec.explicit(values)
    kappas = [spec.kappa(n) for n in range(1, order + 1)]
    moments = moments_from_cumulants(spec, order)
    r = TruncatedSeries.from_coefficients([Fraction(0)] + kappas, order)
    m = TruncatedSeries.from_coefficients([Fraction(0)] + moments, order)
    return RMSeries(R=r, M=m)


def cauchy_polynomial_residual(
    n_moments: int, moments: Sequence | None = None
) -> list[Fraction]:
    """Substitute the Cauchy transform, as a series in w = 1/z, into the
    degree-six polynomial it must satisfy, and return the residual
    coefficients for w^0..w^{n_moments}.

    G carries m_0 = 1 on w and the j-th moment on w^(j+1).  Every
    polynomial term z^k G^j has j >= k, so no negative powers of w survive
    and the listed coefficients are exact for the given truncation.  By
    default the moments are those of the free Poisson(1) anti-commutator,
    generated from the counting recursion; passing explicit moments lets a
    caller probe how the residual reacts to wrong data."""
    if n_moments < 2:
        raise ValueError("the residual needs at least 2 moments")
    if moments is None:
        moments = moments_from_cumulants(
            CumulantSpec.explicit(free_poisson_pair_cumulants(n_moments)), n_moments
        )
    values = [Fraction(m) for m in moments]
    if len(values) < n_moments:
        raise ValueError(
            f"need {n_moments} moments, got {len(values)}"
        )
    values = values[:n_moments]
    top = n_moments + 5
    g = [Fraction(0)] * (top + 1)
    g[1] = Fraction(1)
    for j, m in enumerate(values, start=2):
        g[j] = m

    def convolve(u, v):
        out = [Fraction(0)] * (top + 1)
        for i, x in enumerate(u):
            if x == 0:
                continue
            for j in range(top + 1 - i):
                out[i + j] += x * v[j]
        return out

    powers = {1: g}
    for j in range(2, 7):
        powers[j] = convolve(powers[j - 1], g)

    terms = (
        (2, 4, 6),
        (8, 3, 5),
        (12, 2, 4),
        (8, 1, 3),
        (2, 0, 2),
        (7, 3, 4),
        (13, 2, 3),
        (5, 1, 2),
        (-1, 0, 1),
        (-4, 2, 2),
        (-4, 1, 1),
    )
    residual = [Fraction(0)] * (n_moments + 1)
    residual[0] = Fraction(8)
    for coeff, k, j in terms:
        power = powers[j]
        for e in range(n_moments + 1):
            residual[e] += coeff * power[e + k]
    return residual

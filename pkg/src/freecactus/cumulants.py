"""Exact free-cumulant calculus for products, anti-commutators and
weighted quadratic forms.

All values are ``fractions.Fraction``; nothing in this module touches a
float.  The central objects are distribution specs (semicircular, free
Poisson, or an explicit cumulant list) and the formulas expressing the
cumulants of ab + ba, of as + sa with s semicircular, and of a general
quadratic form sum w_ij a_i a_j, as sums over the partition and cactus
structures of the companion modules.

A brute-force oracle lives here too.  It knows nothing about those
formulas: it expands powers of the expression into words, computes each
mixed word moment as a sum over color-compatible non-crossing partitions
(grouped by block profile, which is the same sum), and inverts the
moment-cumulant recursion.  The tests drive both sides against each other.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from freecactus import _kernel
from freecactus.cactus import (
    bipartition,
    build_graph,
    enumerate_oriented_cacti,
    g_exponent,
    is_connected,
)
from freecactus.errors import CumulantOrderError, ResourceCapError
from freecactus.partitions import (
    Partition,
    enumerate_nc,
    enumerate_y,
    kreweras,
    level_counts,
    refines,
)

DEFAULT_ANTICOM_ORACLE_CAP = 5
DEFAULT_QUADRATIC_ORACLE_CAP = 4


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into an exact rational."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse rational {text!r}") from None


def format_rational(x: Fraction) -> str:
    """Render a rational as "p/q", or plain "p" for integers."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class CumulantSpec:
    """The free-cumulant sequence of one variable.

    Three kinds: semicircular (kappa_2 = 1, everything else 0), free
    Poisson with a rate (every cumulant equals the rate), and an explicit
    finite list.  Explicit specs default to zero beyond the list; strict
    ones raise CumulantOrderError instead, for data that must never be
    silently extended.
    """

    kind: str
    rate: Fraction | None = None
    values: tuple[Fraction, ...] | None = None
    strict: bool = False
    name: str = ""

    @classmethod
    def semicircular(cls) -> "CumulantSpec":
        return cls(kind="semicircular", name="semicircular")

    @classmethod
    def free_poisson(cls, rate) -> "CumulantSpec":
        rate = Fraction(rate)
        return cls(
            kind="free_poisson", rate=rate, name=f"poisson:{format_rational(rate)}"
        )

    @classmethod
    def explicit(cls, values, padding: str = "zero", name: str = "") -> "CumulantSpec":
        if padding not in ("zero", "error"):
            raise ValueError(f"padding must be 'zero' or 'error', got {padding!r}")
        vals = tuple(Fraction(v) for v in values)
        if not name:
            name = "cumulants:[" + ",".join(format_rational(v) for v in vals) + "]"
        return cls(kind="explicit", values=vals, strict=padding == "error", name=name)

    def kappa(self, n: int) -> Fraction:
        """The free cumulant of order n (n >= 1)."""
        if n < 1:
            raise ValueError("cumulant orders start at 1")
        if self.kind == "semicircular":
            return Fraction(1) if n == 2 else Fraction(0)
        if self.kind == "free_poisson":
            return self.rate
        if n <= len(self.values):
            return self.values[n - 1]
        if self.strict:
            raise CumulantOrderError(
                f"spec {self.name or 'explicit'} defines cumulants up to order "
                f"{len(self.values)}, order {n} was requested"
            )
        return Fraction(0)

    def scaled(self, t) -> "CumulantSpec":
        """The spec of t times the variable: kappa_n picks up t^n.

        Only meaningful for explicit specs and free Poisson is not closed
        under scaling, so the result is always an explicit spec; callers
        say how far it must reach via the length of the original list.
        """
        if self.kind != "explicit":
            raise ValueError("scaled() expects an explicit spec")
        t = Fraction(t)
        return CumulantSpec.explicit(
            [v * t**j for j, v in enumerate(self.values, start=1)],
            padding="error" if self.strict else "zero",
            name=f"{format_rational(t)}*({self.name})",
        )


def parse_spec(text: str) -> CumulantSpec:
    """Parse the distribution mini-grammar.

    Accepted forms: "semicircular", "poisson:<p/q>", and
    "cumulants:[<p/q>,<p/q>,...]".
    """
    text = text.strip()
    if text == "semicircular":
        return CumulantSpec.semicircular()
    if text.startswith("poisson:"):
        return CumulantSpec.free_poisson(parse_rational(text[len("poisson:") :]))
    if text.startswith("cumulants:"):
        body = text[len("cumulants:") :].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"malformed cumulant list in {text!r}")
        inner = body[1:-1].strip()
        values = [parse_rational(tok) for tok in inner.split(",")] if inner else []
        return CumulantSpec.explicit(values, name=text)
    raise ValueError(
        f"unknown distribution spec {text!r}; expected 'semicircular', "
        f"'poisson:<p/q>' or 'cumulants:[...]'"
    )


@dataclass(frozen=True)
class WeightMatrix:
    """A symmetric k x k matrix of exact rationals."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        k = len(self.entries)
        if k < 1:
            raise ValueError("weight matrix must be at least 1x1")
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        for i, row in enumerate(rows):
            if len(row) != k:
                raise ValueError(f"weight matrix row {i} has length {len(row)}, not {k}")
        for i in range(k):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(
                        f"weight matrix is not symmetric at ({i},{j}): "
                        f"{rows[i][j]} vs {rows[j][i]}"
                    )

    @property
    def k(self) -> int:
        return len(self.entries)

    @classmethod
    def from_json_obj(cls, obj) -> "WeightMatrix":
        if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
            raise ValueError("weight matrix JSON must be an array of arrays")
        return cls(tuple(tuple(parse_rational(x) for x in row) for row in obj))

    def to_json_obj(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.entries]


def kappa_pi(p: Partition, word: Sequence[int], specs: Sequence[CumulantSpec]) -> Fraction:
    """Product of block cumulants, zero when a block mixes colors.

    ``word[i]`` is the 0-based color of position i+1, an index into
    ``specs``.  Mixed cumulants of free variables vanish, which is what
    the zero encodes.
    """
    if len(word) != p.ground_size:
        raise ValueError(
            f"word length {len(word)} does not match ground set {p.ground_size}"
        )
    total = Fraction(1)
    for block in p.blocks:
        color = word[block[0] - 1]
        if any(word[x - 1] != color for x in block):
            return Fraction(0)
        total *= specs[color].kappa(len(block))
    return total


# ------------------------------------------------ moment-cumulant conversion


def _mul_trunc(a: list[Fraction], b: list[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (min(len(a) + len(b) - 1, order + 1))
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j > order:
                break
            out[i + j] += ai * bj
    return out


def _moments_from_kappas(kappas: list[Fraction]) -> list[Fraction]:
    n_max = len(kappas)
    moments = [Fraction(1)]  # order 0
    for n in range(1, n_max + 1):
        power = [Fraction(1)]
        total = Fraction(0)
        for k in range(1, n + 1):
            power = _mul_trunc(power, moments, n)
            if n - k < len(power):
                total += kappas[k - 1] * power[n - k]
        moments.append(total)
    return moments[1:]


def moments_from_cumulants(spec: CumulantSpec, n_max: int) -> list[Fraction]:
    """Moments m_1..m_{n_max} of a distribution given by its cumulants.

    Uses the triangular recursion m_n = sum over k of kappa_k times the
    coefficient of z^{n-k} in M(z)^k, with M the moment series including
    m_0 = 1.  This equals the sum over non-crossing partitions of block
    cumulant products; the tests check that equality against a literal
    enumeration.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    return _moments_from_kappas([spec.kappa(n) for n in range(1, n_max + 1)])


def cumulants_from_moments(moments: Sequence) -> list[Fraction]:
    """Invert the moment recursion: cumulants kappa_1..kappa_N from
    moments m_1..m_N.  Exact, and mutually inverse with
    ``moments_from_cumulants``."""
    ms = [Fraction(1)] + [Fraction(m) for m in moments]
    kappas: list[Fraction] = []
    for n in range(1, len(ms)):
        power = [Fraction(1)]
        lower = Fraction(0)
        for k in range(1, n):
            power = _mul_trunc(power, ms, n)
            if n - k < len(power):
                lower += kappas[k - 1] * power[n - k]
        kappas.append(ms[n] - lower)
    return kappas


# --------------------------------------------------------- closed formulas


def product_cumulant(
    a: CumulantSpec, b: CumulantSpec, n: int, cap: int | None = None
) -> Fraction:
    """kappa_n(ab) for free a, b: the sum over non-crossing partitions of
    kappa_tau(a) times kappa over the Kreweras complement of tau applied
    to b."""
    total = Fraction(0)
    for tau in enumerate_nc(n, cap=cap):
        left = Fraction(1)
        for block in tau.blocks:
            left *= a.kappa(len(block))
        if left == 0:
            continue
        right = Fraction(1)
        for block in kreweras(tau).blocks:
            right *= b.kappa(len(block))
        total += left * right
    return total


def anticommutator_cumulant(
    a: CumulantSpec, b: CumulantSpec, n: int, cap: int | None = None
) -> Fraction:
    """kappa_n(ab + ba) by the partition formula.

    Iterates the odd-separating partitions sigma of [2n]; pi is the
    Kreweras complement of sigma, whose block graph is then connected and
    bipartite.  The breadth-first bipartition rooted at the block of 1
    splits pi into (pi', pi''), and each sigma contributes the a/b block
    product plus the same with a and b exchanged.
    """
    total = Fraction(0)
    for sigma in enumerate_y(2 * n, cap=cap):
        pi = kreweras(sigma)
        parts = bipartition(build_graph(pi))
        assert parts is not None, "complement of an odd-separating partition"
        sizes_a = [len(pi.blocks[v]) for v in parts[0]]
        sizes_b = [len(pi.blocks[v]) for v in parts[1]]
        direct = Fraction(1)
        swapped = Fraction(1)
        for s in sizes_a:
            direct *= a.kappa(s)
            swapped *= b.kappa(s)
        for s in sizes_b:
            direct *= b.kappa(s)
            swapped *= a.kappa(s)
        total += direct + swapped
    return total


def anticommutator_cumulant_graphwise(
    a: CumulantSpec, b: CumulantSpec, n: int, cap: int | None = None
) -> Fraction:
    """kappa_n(ab + ba) by the cactus-class formula: over bipartite
    oriented cactus classes with n edges, 2^f_C times the two-sided
    degree-cumulant product.  Must agree with the partition route."""
    total = Fraction(0)
    classes = enumerate_oriented_cacti(n, bipartite_only=True, cap=cap)
    for rep, _members in classes.values():
        side_a, side_b = rep.bipartition
        direct = Fraction(1)
        swapped = Fraction(1)
        for v in side_a:
            direct *= a.kappa(rep.degrees[v])
            swapped *= b.kappa(rep.degrees[v])
        for v in side_b:
            direct *= b.kappa(rep.degrees[v])
            swapped *= a.kappa(rep.degrees[v])
        total += 2**rep.f_c * (direct + swapped)
    return total


def semicircular_anticommutator(
    a: CumulantSpec, m: int, cap: int | None = None
) -> Fraction:
    """kappa_m(as + sa) for s standard semicircular, free from a.

    Zero at odd orders.  At order 2n the sum runs over ALL oriented cactus
    classes with n edges, bipartite or not, each weighted 2^(g_C + 1)
    with the degree cumulants of a alone.
    """
    if m < 1:
        raise ValueError("cumulant orders start at 1")
    if m % 2:
        return Fraction(0)
    total = Fraction(0)
    for rep, _members in enumerate_oriented_cacti(m // 2, cap=cap).values():
        term = Fraction(2) ** (g_exponent(rep) + 1)
        for d in rep.degrees:
            term *= a.kappa(d)
        total += term
    return total


def even_anticommutator(
    a: CumulantSpec, b: CumulantSpec, m: int, cap: int | None = None
) -> Fraction:
    """kappa_m(ab + ba) for even a and b, by the double-sum formula.

    Both specs must have vanishing odd cumulants up to order m.  Odd
    orders give zero.  At order 2n the value is twice the sum over pairs
    (pi1, pi2) of non-crossing partitions of [n] with pi2 refining the
    Kreweras complement of pi1, of the doubled-block-size cumulant
    products of a over pi1 and b over pi2.
    """
    for j in range(1, m + 1, 2):
        if a.kappa(j) != 0 or b.kappa(j) != 0:
            raise ValueError(
                f"even_anticommutator needs even specs; odd cumulant of order {j} "
                f"is nonzero"
            )
    if m % 2:
        return Fraction(0)
    n = m // 2
    total = Fraction(0)
    inner_cache = list(enumerate_nc(n, cap=cap))
    for p1 in inner_cache:
        left = Fraction(1)
        for block in p1.blocks:
            left *= a.kappa(2 * len(block))
        if left == 0:
            continue
        bound = kreweras(p1)
        inner = Fraction(0)
        for p2 in inner_cache:
            if not refines(p2, bound):
                continue
            right = Fraction(1)
            for block in p2.blocks:
                right *= b.kappa(2 * len(block))
            inner += right
        total += left * inner
    return 2 * total


def _colored_sum(
    p: Partition, specs: Sequence[CumulantSpec], weights: WeightMatrix
) -> Fraction:
    """Sum over all block colorings of one connected partition: the edge
    weight product times the per-block cumulants of the colored specs."""
    edges = build_graph(p).edges
    sizes = p.block_sizes()
    total = Fraction(0)
    for coloring in itertools.product(range(weights.k), repeat=len(sizes)):
        weight = Fraction(1)
        for u, v in edges:
            w = weights.entries[coloring[u]][coloring[v]]
            if w == 0:
                weight = Fraction(0)
                break
            weight *= w
        if weight == 0:
            continue
        term = weight
        for i, size in enumerate(sizes):
            term *= specs[coloring[i]].kappa(size)
            if term == 0:
                break
        total += term
    return total


def quadratic_form_cumulant(
    specs: Sequence[CumulantSpec],
    weights: WeightMatrix,
    n: int,
    route: str = "partition",
    cap: int | None = None,
) -> Fraction:
    """kappa_n of the quadratic form sum of w_ij a_i a_j over free a_1..a_k.

    The partition route sums over connected non-crossing partitions of
    [2n] and all block colorings.  The graph route evaluates the same sum
    grouped by oriented cactus class: the colored sum of one class
    representative times the 2^f_C class size, which is legitimate because
    the colored sum only depends on the class.  Both routes agree exactly.
    """
    if len(specs) != weights.k:
        raise ValueError(
            f"got {len(specs)} specs for a {weights.k}x{weights.k} weight matrix"
        )
    if route == "partition":
        total = Fraction(0)
        for p in enumerate_nc(2 * n, cap=cap):
            if not is_connected(build_graph(p)):
                continue
            total += _colored_sum(p, specs, weights)
        return total
    if route == "graph":
        total = Fraction(0)
        for rep, members in enumerate_oriented_cacti(n, cap=cap).values():
            total += 2**rep.f_c * _colored_sum(members[0], specs, weights)
        return total
    raise ValueError(f"route must be 'partition' or 'graph', got {route!r}")


def free_poisson_anticommutator_polynomial(n: int, cap: int | None = None) -> list[int]:
    """Coefficient sequence of the rate polynomial of kappa_n(ab + ba) for
    two free Poisson variables of the same rate.

    Returns [d_0, .., d_h]: the cumulant equals the sum of d_r times
    rate^(n+1-r), with h = floor(n/2).  Each d_r is twice the level-r
    count of odd-separating partitions of [2n]; d_0 = 2^n C_n leads."""
    counts = level_counts(2 * n, cap=cap)
    return [2 * c for c in counts]


# ------------------------------------------------------------------- oracle


@lru_cache(maxsize=4096)
def _profiles(colors: tuple[int, ...]):
    return _kernel.word_profile_counts(len(colors), colors)


def _word_moment(colors: tuple[int, ...], specs: Sequence[CumulantSpec]) -> Fraction:
    """Mixed moment of a colored word: the literal sum over color-kernel
    refining non-crossing partitions of block cumulant products, grouped
    by (color, size) block profile."""
    total = Fraction(0)
    for profile, count in _profiles(colors).items():
        term = Fraction(count)
        for color, size in profile:
            term *= specs[color].kappa(size)
            if term == 0:
                break
        total += term
    return total


def oracle_anticommutator_moments(
    a: CumulantSpec, b: CumulantSpec, n_max: int, cap: int | None = None
) -> list[Fraction]:
    """Moments of ab + ba to order n_max, from first principles only.

    The j-th power expands into 2^j words, each factor contributing ab or
    ba; every word moment is a sum over non-crossing partitions refining
    the word's color kernel.  Nothing here knows about the closed
    formulas."""
    cap = DEFAULT_ANTICOM_ORACLE_CAP if cap is None else cap
    if n_max > cap:
        raise ResourceCapError(
            f"anticommutator oracle asked for order {n_max}, beyond its cap {cap}"
        )
    specs = (a, b)
    out = []
    for j in range(1, n_max + 1):
        total = Fraction(0)
        for bits in itertools.product((0, 1), repeat=j):
            colors = []
            for bit in bits:
                colors.append(bit)
                colors.append(1 - bit)
            total += _word_moment(tuple(colors), specs)
        out.append(total)
    return out


def oracle_anticommutator_cumulants(
    a: CumulantSpec, b: CumulantSpec, n_max: int, cap: int | None = None
) -> list[Fraction]:
    return cumulants_from_moments(oracle_anticommutator_moments(a, b, n_max, cap=cap))


def oracle_quadratic_moments(
    specs: Sequence[CumulantSpec],
    weights: WeightMatrix,
    n_max: int,
    cap: int | None = None,
) -> list[Fraction]:
    """Moments of the quadratic form to order n_max, by brute expansion
    into k^(2j) colored words weighted by their edge factors."""
    cap = DEFAULT_QUADRATIC_ORACLE_CAP if cap is None else cap
    if n_max > cap:
        raise ResourceCapError(
            f"quadratic oracle asked for order {n_max}, beyond its cap {cap}"
        )
    if len(specs) != weights.k:
        raise ValueError(
            f"got {len(specs)} specs for a {weights.k}x{weights.k} weight matrix"
        )
    out = []
    for j in range(1, n_max + 1):
        total = Fraction(0)
        for word in itertools.product(range(weights.k), repeat=2 * j):
            weight = Fraction(1)
            for t in range(j):
                w = weights.entries[word[2 * t]][word[2 * t + 1]]
                if w == 0:
                    weight = Fraction(0)
                    break
                weight *= w
            if weight == 0:
                continue
            total += weight * _word_moment(word, specs)
        out.append(total)
    return out


def oracle_quadratic_cumulants(
    specs: Sequence[CumulantSpec],
    weights: WeightMatrix,
    n_max: int,
    cap: int | None = None,
) -> list[Fraction]:
    return cumulants_from_moments(oracle_quadratic_moments(specs, weights, n_max, cap=cap))


def random_explicit_spec(rng: random.Random, length: int) -> CumulantSpec:
    """A reproducible random explicit spec: numerators in [-3, 3],
    denominators in {1, 2, 3}.  Shared by the property tests and the CLI
    verification suite so both exercise the same distribution family."""
    values = [
        Fraction(rng.randint(-3, 3), rng.choice((1, 2, 3))) for _ in range(length)
    ]
    return CumulantSpec.explicit(values)

"""Univariate polynomials over Gaussian rationals.

Provides exact gcd, square-free decomposition and distinct-root counting, plus
a numeric root-extraction fallback via companion-matrix eigenvalues.  Root
*counting* is always exact; only root *locations* may fall back to floating
point when they are irrational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scalars import GaussianRational, ZERO, ONE, gaussian_sqrt

DEFAULT_ROOT_TOL = 1e-9


class Poly:
    """Polynomial with :class:`GaussianRational` coefficients, degree-0 first.

    The zero polynomial has an empty coefficient tuple; otherwise the leading
    coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [GaussianRational.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @staticmethod
    def constant(c) -> "Poly":
        return Poly([c])

    @staticmethod
    def linear(c0, c1) -> "Poly":
        """c0 + c1*t."""
        return Poly([c0, c1])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def leading(self) -> GaussianRational:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return Poly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, s: GaussianRational) -> "Poly":
        return Poly([c * s for c in self.coeffs])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = self.leading().inverse()
        return self.scale(inv)

    def divmod(self, other: "Poly"):
        """Exact Euclidean division; works because scalars form a field."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [ZERO] * (dq + 1)
        inv_lead = other.leading().inverse()
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * inv_lead
            quot[k] = c
            if not c.is_zero():
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return Poly(quot), Poly(rem[: other.degree])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self) -> "Poly":
        return Poly([c * i for i, c in enumerate(self.coeffs) if i])

    def eval(self, x: GaussianRational) -> GaussianRational:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_complex(self, x: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + complex(c)
        return acc

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = [f"({c})*t^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return "Poly(" + " + ".join(terms) + ")"


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd by the Euclidean remainder sequence (exact field arithmetic)."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    a, b = p, q
    while not b.is_zero():
        # normalize each remainder to keep coefficient bit-growth in check
        a, b = b, (a % b).monic() if not (a % b).is_zero() else Poly()
    return a.monic()


def poly_gcd_many(ps) -> Poly:
    """Monic gcd of a nonempty iterable of polynomials, zero members ignored."""
    acc = Poly()
    for p in ps:
        if p.is_zero():
            continue
        acc = p.monic() if acc.is_zero() else poly_gcd(acc, p)
        if acc.degree == 0:
            return acc  # gcd is a unit; no need to look further
    return acc


def square_free_part(p: Poly) -> Poly:
    """p / gcd(p, p'), monic; carries each distinct root exactly once."""
    if p.is_zero():
        raise ValueError("square-free part of zero polynomial")
    if p.degree == 0:
        return Poly.constant(ONE)
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


@dataclass(frozen=True)
class RootSummary:
    """Distinct-root data of a polynomial (or family of polynomials).

    ``all_zero`` marks the degenerate sentinel for an identically-zero family.
    ``numeric_roots`` is populated only on request and may contain floating
    approximations; ``exact_roots`` holds the Gaussian-rational roots that were
    verified exactly.
    """

    distinct_root_count: int
    includes_infinity: bool = False
    all_zero: bool = False
    exact_roots: tuple = ()
    numeric_roots: tuple = ()

    @property
    def all_roots_exact(self) -> bool:
        return len(self.exact_roots) == self.distinct_root_count


def companion_eigenvalues(p: Poly) -> list[complex]:
    """Eigenvalues of the companion matrix of monic(p)."""
    q = p.monic()
    n = q.degree
    if n <= 0:
        return []
    mat = np.zeros((n, n), dtype=complex)
    for i in range(1, n):
        mat[i, i - 1] = 1.0
    for i in range(n):
        mat[i, n - 1] = -complex(q.coeffs[i])
    return list(np.linalg.eigvals(mat))


_DENOM_LADDER = (10, 100, 10**4, 10**6, 10**9, 10**12)


def _rationalize(x: float):
    for d in _DENOM_LADDER:
        f = Fraction(x).limit_denominator(d)
        yield f


def exact_roots_of(p: Poly) -> tuple[list[GaussianRational], list[complex]]:
    """Split the distinct roots of ``p`` into exact Gaussian-rational roots and
    numeric leftovers.

    Degree 1 and 2 are solved in closed form; higher degrees go through the
    companion matrix followed by exact verification of rationalized candidates.
    """
    sf = square_free_part(p)
    if sf.degree <= 0:
        return [], []
    if sf.degree == 1:
        c0, c1 = sf.coeffs
        return [-c0 / c1], []
    if sf.degree == 2:
        c0, c1, c2 = sf.coeffs
        disc = c1 * c1 - GaussianRational(4) * c0 * c2
        sq = gaussian_sqrt(disc)
        if sq is not None:
            two_a = GaussianRational(2) * c2
            r1 = (-c1 + sq) / two_a
            r2 = (-c1 - sq) / two_a
            return ([r1] if r1 == r2 else [r1, r2]), []
    exact: list[GaussianRational] = []
    numeric: list[complex] = []
    remaining = sf
    for ev in companion_eigenvalues(sf):
        found = None
        for fr in _rationalize(ev.real):
            for fi in _rationalize(ev.imag):
                cand = GaussianRational(fr, fi)
                if remaining.eval(cand).is_zero():
                    found = cand
                    break
            if found is not None:
                break
        if found is not None and found not in exact:
            exact.append(found)
            remaining = remaining // Poly.linear(-found, ONE)
        elif found is None:
            numeric.append(ev)
    return exact, numeric


def distinct_roots(p: Poly, want_numeric: bool = False) -> RootSummary:
    """Exact distinct-root count of a nonzero polynomial.

    The count is deg(sf) where sf is the square-free part; it never depends on
    numeric root extraction.
    """
    if p.is_zero():
        raise ValueError("distinct_roots of zero polynomial")
    sf = square_free_part(p)
    count = max(sf.degree, 0)
    exact: tuple = ()
    numeric: tuple = ()
    if count and want_numeric:
        ex, nu = exact_roots_of(sf)
        exact = tuple(ex)
        numeric = tuple(nu)
    return RootSummary(distinct_root_count=count, exact_roots=exact, numeric_roots=numeric)


def common_root_summary(ps, want_numeric: bool = False) -> RootSummary:
    """Distinct common roots of the nonzero members of a polynomial family."""
    ps = list(ps)
    if not ps:
        raise ValueError("empty polynomial list")
    if all(p.is_zero() for p in ps):
        return RootSummary(distinct_root_count=0, all_zero=True)
    g = poly_gcd_many(ps)
    if g.degree <= 0:
        return RootSummary(distinct_root_count=0)
    return distinct_roots(g, want_numeric=want_numeric)

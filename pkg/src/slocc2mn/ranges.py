"""Counting product states in the ranges of adjoint reduced density matrices.

For a tripartite state and an absent party X, the range of the reduced state
of the other two parties is a subspace of bipartite vectors, viewed here as a
subspace of matrices; product states are its rank-one elements.  Counting is
exact throughout: finite counts come from gcd degree drops, infinities from
exact degeneracy tests.  Only witness *coordinates* may be numeric, when a
root is irrational.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .scalars import GaussianRational, ZERO, ONE
from .polynomials import Poly, poly_gcd, square_free_part, exact_roots_of
from .matrices import Matrix, Pencil, stack_vectorized, primitive_vector, certified_nullspace
from .states import PureState, PARTIES, LocalRankProfile

RANGE_PAIR = {"A": ("B", "C"), "B": ("A", "C"), "C": ("A", "B")}


class UnsupportedSubspaceError(ValueError):
    """Raised when a subspace shape/dimension combination is not handled."""


@dataclass(frozen=True)
class MatrixSubspace:
    """A subspace of rows x cols matrices given by an independent basis."""

    rows: int
    cols: int
    basis: tuple[Matrix, ...]

    def __post_init__(self):
        if not self.basis:
            raise ValueError("subspace needs a nonempty basis")
        for m in self.basis:
            if m.shape() != (self.rows, self.cols):
                raise ValueError("basis matrix shape mismatch")
        if stack_vectorized(self.basis).rank() != len(self.basis):
            raise ValueError("basis matrices are linearly dependent")

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def element(self, coeffs) -> Matrix:
        acc = Matrix.zero(self.rows, self.cols)
        for c, m in zip(coeffs, self.basis):
            c = GaussianRational.coerce(c)
            if not c.is_zero():
                acc = acc + m.scale(c)
        return acc


@dataclass(frozen=True)
class ProductWitness:
    """A rank-one element of a subspace: coefficients and factors u (x) v.

    Exact witnesses carry GaussianRational tuples; numeric witnesses carry
    complex tuples and exact=False.
    """

    coeffs: tuple
    u: tuple
    v: tuple
    exact: bool = True


@dataclass(frozen=True)
class ProductCount:
    """Finite(n) or Infinite count of product states in a subspace."""

    kind: str  # 'finite' | 'infinite'
    count: int = 0
    witnesses: tuple[ProductWitness, ...] = ()
    exact: bool = True
    family_note: str = ""

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"

    def key(self):
        return ("inf",) if self.is_infinite else ("fin", self.count)

    def render(self) -> str:
        return "inf" if self.is_infinite else str(self.count)


def rank_one_factor(m: Matrix):
    """Split an exact rank-one matrix into (u, v) with m = u v^T."""
    for i in range(m.rows):
        for j in range(m.cols):
            if not m[i, j].is_zero():
                pivot = m[i, j]
                u = tuple(m[r, j] for r in range(m.rows))
                v = tuple(m[i, c] * pivot.inverse() for c in range(m.cols))
                return u, v
    raise ValueError("zero matrix has no rank-one factorization")


def _count_pencil_span(sub: MatrixSubspace) -> ProductCount:
    """Product states in span{M0, M1}: rank-one points of the projective line."""
    m0, m1 = sub.basis
    pen = Pencil(m0, m1)
    minors = pen.minor_polynomials(2) if min(sub.rows, sub.cols) >= 2 else []
    if not minors:
        # single-row or single-column ambient: every nonzero element is rank one
        return ProductCount(kind="infinite", family_note="ambient has no 2x2 minors")
    nonzero = [p for p in minors if not p.is_zero()]
    if not nonzero:
        return ProductCount(kind="infinite", family_note="every pencil element has rank <= 1")
    g = Poly()
    for p in nonzero:
        g = p.monic() if g.is_zero() else poly_gcd(g, p)
        if g.degree == 0:
            break
    witnesses = []
    count = 0
    exact = True
    if g.degree > 0:
        sf = square_free_part(g)
        count += sf.degree
        roots, numeric = exact_roots_of(sf)
        for t in roots:
            mat = pen.at(t)
            u, v = rank_one_factor(mat)
            witnesses.append(ProductWitness(coeffs=(ONE, t), u=u, v=v))
        for z in numeric:
            exact = False
            a = m0.to_complex() + complex(z) * m1.to_complex()
            uu, ss, vv = np.linalg.svd(a)
            witnesses.append(
                ProductWitness(
                    coeffs=(1.0, complex(z)),
                    u=tuple(uu[:, 0] * ss[0]),
                    v=tuple(vv[0, :]),
                    exact=False,
                )
            )
    if m1.rank() <= 1:
        count += 1
        u, v = rank_one_factor(m1)
        witnesses.append(ProductWitness(coeffs=(ZERO, ONE), u=u, v=v))
    return ProductCount(kind="finite", count=count, witnesses=tuple(witnesses), exact=exact)


@dataclass
class RankOnePoint:
    """Rank-one elements of a two-row subspace at one pencil parameter.

    ``parameter`` is an exact scalar, a complex number (numeric=True), or the
    string 'infinity'.  ``null_basis`` spans the coefficient vectors (over the
    subspace basis) whose elements are rank one at this parameter.
    """

    parameter: object
    null_basis: list
    numeric: bool = False


@dataclass
class RankOneLocus:
    """Full description of the rank-one locus of a two-row matrix subspace."""

    generic_infinite: bool
    points: list[RankOnePoint] = field(default_factory=list)
    generic_nullity: int = 0
    a_mat: Matrix | None = None
    b_mat: Matrix | None = None
    exact: bool = True

    def sample_generic_parameters(self):
        """Rational parameters for probing the generic (infinite) part."""
        from fractions import Fraction

        vals = [0, 1, -1, 2, -2, 3, -3, Fraction(1, 2), Fraction(-1, 2),
                Fraction(3, 2), 5, -5, 7, Fraction(2, 3), -7, 11]
        return [GaussianRational(v) for v in vals]


def _two_row_locus(sub: MatrixSubspace) -> RankOneLocus:
    """Rank-one locus of span{B_1..B_k} with each B_i a 2 x K matrix.

    Writing row pairs (a_i, b_i), coefficient vectors c with a rank-one element
    at slope t are the nullvectors of B - t A where A = [a_i], B = [b_i] as
    K x k matrices; slope infinity corresponds to nullvectors of A.
    """
    k = sub.dimension
    kk = sub.cols
    a_mat = Matrix([[sub.basis[i][0, r] for i in range(k)] for r in range(kk)])
    b_mat = Matrix([[sub.basis[i][1, r] for i in range(k)] for r in range(kk)])
    pen = Pencil(b_mat, a_mat.scale(GaussianRational(-1)))  # B - t*A
    if k > kk:
        # more basis elements than columns: nonzero nullvector at every slope
        return RankOneLocus(
            generic_infinite=True, generic_nullity=k - kk, a_mat=a_mat, b_mat=b_mat
        )
    g_rank = pen.generic_rank()
    if g_rank < k:
        return RankOneLocus(
            generic_infinite=True, generic_nullity=k - g_rank, a_mat=a_mat, b_mat=b_mat
        )
    locus = RankOneLocus(generic_infinite=False, a_mat=a_mat, b_mat=b_mat)
    gk = pen.minor_root_multiple(k)
    if gk.is_zero():
        raise AssertionError("generic rank says full but all maximal minors vanish")
    if gk.degree > 0:
        sf = square_free_part(gk)
        roots, numeric = exact_roots_of(sf)
        for t in roots:
            nb = pen.at(t).nullspace()
            if nb:  # spurious candidate roots carry no nullvector
                locus.points.append(RankOnePoint(parameter=t, null_basis=nb))
        for z in numeric:
            mat = b_mat.to_complex() - complex(z) * a_mat.to_complex()
            _, s, vh = np.linalg.svd(mat)
            tol = 1e-9 * max(1.0, s[0] if len(s) else 1.0)
            # SVD right-singular vectors for near-zero singular values
            nb = [tuple(vh[i, :]) for i in range(mat.shape[1]) if i >= len(s) or s[i] < tol]
            if nb:
                locus.exact = False
                locus.points.append(
                    RankOnePoint(parameter=complex(z), null_basis=nb, numeric=True)
                )
    na = a_mat.nullspace()
    if na:
        locus.points.append(RankOnePoint(parameter="infinity", null_basis=na))
    return locus


def _locus_witness(locus: RankOneLocus, sub: MatrixSubspace, point: RankOnePoint):
    c = point.null_basis[0]
    if point.numeric:
        a = locus.a_mat.to_complex()
        b = locus.b_mat.to_complex()
        cv = np.array(c, dtype=complex)
        v = a @ cv
        t = point.parameter
        return ProductWitness(coeffs=tuple(cv), u=(1.0, t), v=tuple(v), exact=False)
    if point.parameter == "infinity":
        v = locus.b_mat.apply_vector(c)
        return ProductWitness(coeffs=tuple(c), u=(ZERO, ONE), v=tuple(v))
    v = locus.a_mat.apply_vector(c)
    return ProductWitness(coeffs=tuple(c), u=(ONE, point.parameter), v=tuple(v))


def _count_two_row(sub: MatrixSubspace) -> ProductCount:
    locus = _two_row_locus(sub)
    if locus.generic_infinite:
        return ProductCount(
            kind="infinite",
            family_note="rank-one elements exist at every pencil slope",
        )
    for p in locus.points:
        if len(p.null_basis) >= 2:
            return ProductCount(
                kind="infinite",
                exact=not p.numeric,
                family_note="a degenerate slope carries a multi-dimensional product family",
            )
    witnesses = tuple(_locus_witness(locus, sub, p) for p in locus.points)
    exact = all(w.exact for w in witnesses)
    return ProductCount(kind="finite", count=len(locus.points), witnesses=witnesses, exact=exact)


def count_product_states(sub: MatrixSubspace) -> ProductCount:
    """Count the rank-one elements (up to scale of each factor) of a subspace.

    Supported shapes: one-dimensional subspaces, two-dimensional subspaces of
    arbitrary matrices (a pencil), two-row ambient matrices with any basis
    size, and dimension-saturated subspaces (always infinite).  Anything else
    raises UnsupportedSubspaceError.
    """
    k = sub.dimension
    rows, cols = sub.rows, sub.cols
    if k == 1:
        m = sub.basis[0]
        if m.rank() <= 1:
            u, v = rank_one_factor(m)
            return ProductCount(
                kind="finite", count=1, witnesses=(ProductWitness(coeffs=(ONE,), u=u, v=v),)
            )
        return ProductCount(kind="finite", count=0)
    if k > (rows - 1) * cols or k > rows * (cols - 1):
        # saturated: the subspace meets the rank-one variety along a positive-
        # dimensional family for every value of the free parameter
        return ProductCount(kind="infinite", family_note="dimension-saturated subspace")
    if k == 2:
        return _count_pencil_span(sub)
    if rows == 2:
        return _count_two_row(sub)
    raise UnsupportedSubspaceError(
        f"counting not supported for a {k}-dimensional subspace of {rows}x{cols} matrices"
    )


def exact_rank_one_in_span(sub: MatrixSubspace) -> ProductWitness | None:
    """Some exact rank-one element of the subspace, or None.

    Unlike count_product_states this also serves subspaces with infinitely
    many product elements, picking an arbitrary exact one.
    """
    if sub.dimension == 1:
        m = sub.basis[0]
        if m.rank() <= 1:
            u, v = rank_one_factor(m)
            return ProductWitness(coeffs=(ONE,), u=u, v=v)
        return None
    if sub.dimension == 2:
        pc = _count_pencil_span(sub)
        if pc.is_infinite:
            u, v = rank_one_factor(sub.basis[0])
            return ProductWitness(coeffs=(ONE, ZERO), u=u, v=v)
        for w in pc.witnesses:
            if w.exact:
                return w
        return None
    if sub.rows != 2:
        raise UnsupportedSubspaceError("rank-one sampling needs two-row matrices")
    locus = _two_row_locus(sub)
    for p in locus.points:
        if not p.numeric:
            return _locus_witness(locus, sub, p)
    if locus.generic_infinite:
        pen = Pencil(locus.b_mat, locus.a_mat.scale(GaussianRational(-1)))
        for t in locus.sample_generic_parameters():
            nb = pen.at(t).nullspace()
            if nb:
                c = nb[0]
                v = locus.a_mat.apply_vector(c)
                return ProductWitness(coeffs=tuple(c), u=(ONE, t), v=tuple(v))
    return None


# -- ranges of a tripartite state --------------------------------------------


def range_subspace(s: PureState, absent_party: str) -> MatrixSubspace:
    """Range of the reduced state of the two parties other than absent_party,
    as a subspace of (first party) x (second party) matrices."""
    slices = s.slices(absent_party)
    _, chosen = _independent_slices(slices)
    rows, cols = slices[0].shape()
    return MatrixSubspace(rows=rows, cols=cols, basis=tuple(chosen))


@dataclass(frozen=True)
class Signature:
    """Local ranks plus the three product counts [a_A, a_B, a_C].

    a_X counts product states in the range of the reduced density matrix of
    the two parties other than X.
    """

    ranks: LocalRankProfile
    counts: tuple[ProductCount, ProductCount, ProductCount]

    def key(self):
        return tuple(c.key() for c in self.counts)

    def render(self) -> str:
        return "[" + ",".join(c.render() for c in self.counts) + "]"


def slocc_signature(s: PureState) -> Signature:
    counts = []
    for party in PARTIES:
        sub = range_subspace(s, party)
        counts.append(count_product_states(sub))
    return Signature(ranks=s.local_ranks(), counts=tuple(counts))


def bc_pencil(s: PureState) -> Pencil:
    """The pencil spanned by the two A-slices (requires A-rank 2)."""
    sub = range_subspace(s, "A")
    if sub.dimension != 2:
        raise ValueError("BC pencil needs an A-rank of exactly 2")
    return Pencil(sub.basis[0], sub.basis[1])


# -- partner ranks -----------------------------------------------------------


def _independent_slices(slices):
    chosen: list[int] = []
    mats: list[Matrix] = []
    for j, m in enumerate(slices):
        if m.is_zero():
            continue
        trial = mats + [m]
        if stack_vectorized(trial).rank() == len(trial):
            chosen.append(j)
            mats.append(m)
    return chosen, mats


def partner_rank(s: PureState, absent_party: str, witness: ProductWitness):
    """Schmidt rank of the witness's conjugate adjoint state.

    The witness u (x) v lies in the range over the party pair (Y, Z); the
    partner is the adjoint state of the Z-factor v with respect to party Z,
    which is defined up to adding adjoint states of directions annihilating v.
    We report the minimum Schmidt rank over that family, an SLOCC invariant.
    The partner matrices have two rows (the A party), so the result is 1 or 2.

    Returns (rank, exact_flag).
    """
    if not witness.exact:
        raise ValueError("partner rank needs an exact witness")
    y_party, z_party = RANGE_PAIR[absent_party]
    v = witness.v
    slices = s.slices(z_party)
    d_z = len(slices)
    if len(v) != d_z:
        raise ValueError("witness factor length does not match party dimension")
    stacked = stack_vectorized(slices)
    kernel = stacked.transpose().nullspace()  # {g : sum g_j S_j = 0}
    kernel_hits_v = any(
        not sum((g[j] * v[j] for j in range(d_z)), ZERO).is_zero() for g in kernel
    )
    chosen, mats = _independent_slices(slices)
    sub = MatrixSubspace(rows=mats[0].rows, cols=mats[0].cols, basis=tuple(mats))

    def functional(c) -> GaussianRational:
        return sum((c[i] * v[chosen[i]] for i in range(len(chosen))), ZERO)

    if kernel_hits_v:
        # the hyperplane condition is vacuous: partner rank 1 iff any rank-one
        # element exists in the slice span at all
        pc = count_product_states(sub)
        return (1 if pc.is_infinite or pc.count > 0 else 2), True

    locus = _two_row_locus(sub)
    exact = locus.exact
    for p in locus.points:
        if p.numeric:
            vv = np.array([complex(x) for x in v], dtype=complex)
            for c in p.null_basis:
                val = sum(complex(c[i]) * complex(v[chosen[i]]) for i in range(len(chosen)))
                if abs(val) > 1e-9:
                    return 1, False
            exact = False
        else:
            for c in p.null_basis:
                if not functional(c).is_zero():
                    return 1, True
    if locus.generic_infinite:
        pen = Pencil(locus.b_mat, locus.a_mat.scale(GaussianRational(-1)))
        for t in locus.sample_generic_parameters():
            for c in pen.at(t).nullspace():
                if not functional(c).is_zero():
                    return 1, True
        # slope infinity: rank-one elements with vanishing first row
        for c in locus.a_mat.nullspace():
            if not functional(c).is_zero():
                return 1, True
        # slopes where the nullity jumps above its generic value
        g_rank = pen.generic_rank()
        if 0 < g_rank <= min(pen.a.rows, pen.a.cols):
            gj = pen.minor_root_multiple(g_rank)
            if not gj.is_zero() and gj.degree > 0:
                roots, numeric = exact_roots_of(gj)
                for t in roots:
                    for c in pen.at(t).nullspace():
                        if not functional(c).is_zero():
                            return 1, True
                for z in numeric:
                    # only a genuine rank drop (not a spurious candidate
                    # root) leaves the answer resting on floating point
                    if pen.numeric_rank_at(complex(z), 1e-9) < g_rank:
                        exact = False
    return 2, exact


def product_witness_adjoint_profile(s: PureState, absent_party: str):
    """(witness, partner rank) for every product witness in the chosen range.

    Rejects ranges with infinitely many product states.
    """
    sub = range_subspace(s, absent_party)
    pc = count_product_states(sub)
    if pc.is_infinite:
        raise ValueError("partner profile undefined for an infinite product family")
    out = []
    for w in pc.witnesses:
        r, _ = partner_rank(s, absent_party, w)
        out.append((w, r))
    return out


def partner_rank_multiset(s: PureState, absent_party: str):
    return tuple(sorted(r for _, r in product_witness_adjoint_profile(s, absent_party)))


# -- quadric profile of the product-direction locus --------------------------


def quadric_profile(s: PureState, absent_party: str = "C"):
    """Projective invariant of the closure of product directions in a range.

    Samples the second factors (column-space vectors) of rank-one elements of
    the range subspace over many pencil slopes, computes the exact linear
    space of quadratic forms vanishing on all samples, and returns
    (dimension of that space, maximal rank among random members).  Both
    numbers are invariant under invertible local operators.
    """
    import random as _random

    slices = s.slices(absent_party)
    chosen, mats = _independent_slices(slices)
    sub = MatrixSubspace(rows=mats[0].rows, cols=mats[0].cols, basis=tuple(mats))
    if sub.rows != 2:
        raise ValueError("quadric profile implemented for two-row ranges only")
    locus = _two_row_locus(sub)
    rng = _random.Random(4099)
    n = sub.cols
    pairs = [(p, q) for p in range(n) for q in range(p, n)]
    cap = 4 * len(pairs)
    samples: list[tuple] = []
    seen: set = set()

    def add_sample(vec):
        if len(samples) >= cap or all(x.is_zero() for x in vec):
            return
        key = primitive_vector(vec)
        if key not in seen:
            seen.add(key)
            samples.append(key)

    def combos(basis):
        basis = [primitive_vector(c) for c in basis]
        for c in basis:
            yield c
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                yield tuple(x + y for x, y in zip(basis[i], basis[j]))
        for _ in range(2):
            coeffs = [GaussianRational(rng.randint(1, 5)) for _ in basis]
            yield tuple(
                sum((coeffs[i] * basis[i][r] for i in range(len(basis))), ZERO)
                for r in range(len(basis[0]))
            )

    pen = Pencil(locus.b_mat, locus.a_mat.scale(GaussianRational(-1)))
    params = locus.sample_generic_parameters()
    for t in params:
        nb = pen.at(t).nullspace()
        for c in combos(nb) if nb else []:
            add_sample(locus.a_mat.apply_vector(c))
    na = locus.a_mat.nullspace()
    for c in combos(na) if na else []:
        add_sample(locus.b_mat.apply_vector(c))
    for p in locus.points:
        if p.numeric:
            continue
        if p.parameter == "infinity":
            for c in combos(p.null_basis):
                add_sample(locus.b_mat.apply_vector(c))
        else:
            for c in combos(p.null_basis):
                add_sample(locus.a_mat.apply_vector(c))
    if not samples:
        return (len(pairs), n)
    rows = []
    for vec in samples:
        rows.append([
            vec[p] * vec[q] if p == q else GaussianRational(2) * vec[p] * vec[q]
            for (p, q) in pairs
        ])
    system = Matrix(rows)
    quadrics = certified_nullspace(system)
    qdim = len(quadrics)
    if qdim == 0:
        return (0, 0)
    best = 0
    for _ in range(3):
        coeffs = [GaussianRational(rng.randint(1, 7)) for _ in quadrics]
        entries = [
            sum((coeffs[i] * quadrics[i][j] for i in range(qdim)), ZERO)
            for j in range(len(pairs))
        ]
        q_mat = [[ZERO] * n for _ in range(n)]
        for (p, q), val in zip(pairs, entries):
            q_mat[p][q] = val
            q_mat[q][p] = val
        best = max(best, Matrix(q_mat).rank())
    return (qdim, best)

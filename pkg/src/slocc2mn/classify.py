"""SLOCC classification and equivalence decisions for 2 x M x N states.

The classifier matches a tiered invariant vector — local ranks, signature,
BC pencil rank profile, partner-rank multisets, and (as a last tie-breaker)
the quadric profile of the AB product-direction locus — against the canonical
library for the state's compressed shape.  Reduction steps extract a product
state from the AB-range and shrink the C dimension by one, producing an
auditable elementary-ILO word.  Equivalence verdicts follow a fixed pipeline
of invariant comparisons before attempting an explicit witness.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .scalars import GaussianRational, ZERO, ONE
from .matrices import Matrix, Pencil
from .states import PureState, PARTIES, compress_to_ranks
from .operators import (
    OperatorTriple,
    ElementaryFactor,
    decompose_elementary,
    mapping_vector_to_basis,
    random_invertible,
)
from .ranges import (
    ProductWitness,
    MatrixSubspace,
    range_subspace,
    count_product_states,
    exact_rank_one_in_span,
    slocc_signature,
    partner_rank,
    quadric_profile,
    Signature,
)
from .families import ClassLabel, make_canonical, all_labels_for_shape


class StateInvariants:
    """Lazily computed, cached SLOCC invariants of one state."""

    def __init__(self, s: PureState):
        self.state = s
        self._cache: dict = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def ranks(self):
        return self._get("ranks", self.state.local_ranks)

    @property
    def signature(self) -> Signature:
        return self._get("signature", lambda: slocc_signature(self.state))

    def signature_key(self):
        return (self.ranks.as_tuple(), self.signature.key())

    def bc_profile_key(self):
        def compute():
            if self.ranks.r_a != 2:
                return None
            sub = range_subspace(self.state, "A")
            return Pencil(sub.basis[0], sub.basis[1]).rank_profile().key()

        return self._get("bc_profile", compute)

    def partner_key(self):
        def compute():
            out = []
            for party, pc in zip(PARTIES, self.signature.counts):
                if pc.is_infinite:
                    out.append("inf")
                elif pc.count == 0:
                    out.append(())
                elif not all(w.exact for w in pc.witnesses):
                    out.append("numeric")
                else:
                    ranks = sorted(
                        partner_rank(self.state, party, w)[0] for w in pc.witnesses
                    )
                    out.append(tuple(ranks))
            return tuple(out)

        return self._get("partner", compute)

    def quadric_key(self):
        def compute():
            if self.ranks.r_a != 2:
                return None
            try:
                return quadric_profile(self.state, "C")
            except ValueError:
                return None

        return self._get("quadric", compute)


_TIERS = (
    ("signature", StateInvariants.signature_key),
    ("pencil rank profile", StateInvariants.bc_profile_key),
    ("partner-rank multiset", StateInvariants.partner_key),
    ("quadric profile", StateInvariants.quadric_key),
)

_CANONICAL_TABLE: dict[tuple, dict[ClassLabel, StateInvariants]] = {}


def canonical_invariants(dims) -> dict[ClassLabel, StateInvariants]:
    dims = tuple(dims)
    if dims not in _CANONICAL_TABLE:
        _CANONICAL_TABLE[dims] = {
            label: StateInvariants(make_canonical(label))
            for label in all_labels_for_shape(dims)
        }
    return _CANONICAL_TABLE[dims]


@dataclass
class ReductionStep:
    """One product-state extraction shrinking the C dimension by one.

    Replaying ``ilo_word`` (elementary factors, applied left to right) on the
    input yields |0, M-1, N-1> plus the residual embedded at C indices < N-1.
    """

    extracted_witness: ProductWitness
    ilo_word: list[ElementaryFactor]
    residual: PureState
    input_dims: tuple


@dataclass
class ClassificationResult:
    label: ClassLabel
    proof: list[ReductionStep] = field(default_factory=list)
    invariants: StateInvariants | None = None
    permutation: str = "ABC"
    note: str = ""

    def as_tuple(self):
        return (self.label, self.proof)


def apply_ilo_word(s: PureState, word) -> PureState:
    dims = s.dims
    cur = s
    for f in word:
        d = dims[PARTIES.index(f.party)]
        cur = cur.apply_local(f.party, f.to_matrix(d))
    return cur


def extract_and_reduce(s: PureState) -> ReductionStep:
    """Extract a product state from the AB-range and reduce per the lemma.

    Requires a compressed state: dims equal local ranks (2, M, N) with
    2 <= M <= N <= 2M.  Returns the ILO word carrying s to
    |0, M-1, N-1> + residual, with the residual supported on C < N-1 and
    holding no (0, M-1, j) amplitudes.
    """
    dims = s.dims
    ranks = s.local_ranks().as_tuple()
    if dims != ranks:
        raise ValueError("extract_and_reduce needs a compressed state (dims == ranks)")
    d_a, d_b, d_c = dims
    if d_a != 2 or not (2 <= d_b <= d_c <= 2 * d_b):
        raise ValueError(f"unsupported shape {dims} for reduction")
    m, n = d_b, d_c
    sub = range_subspace(s, "C")
    if sub.dimension != n:
        raise AssertionError("compressed state must have independent C-slices")
    witness = exact_rank_one_in_span(sub)
    if witness is None:
        raise ValueError("no exact product witness available in the AB-range")
    coeffs = tuple(witness.coeffs)
    k0 = next(i for i, c in enumerate(coeffs) if not GaussianRational.coerce(c).is_zero())

    # C operator: row N-1 carries the witness combination, remaining rows keep
    # the other original slices in order
    rows = []
    for j in range(n):
        if j == k0:
            continue
        rows.append([ONE if c == j else ZERO for c in range(n)])
    rows.append(list(coeffs))
    v_c = Matrix(rows)
    v_a = mapping_vector_to_basis(witness.u, 2, 0)
    v_b = mapping_vector_to_basis(witness.v, m, m - 1)

    # factors are applied to the state left to right, which composes matrices
    # in reverse, so each decomposition is reversed to reproduce its matrix
    word: list[ElementaryFactor] = []
    word.extend(reversed(decompose_elementary("C", v_c)))
    word.extend(reversed(decompose_elementary("A", v_a)))
    word.extend(reversed(decompose_elementary("B", v_b)))

    staged = s.apply_local("C", v_c).apply_local("A", v_a).apply_local("B", v_b)
    lead = staged.amplitude((0, m - 1, n - 1))
    if lead != ONE:
        raise AssertionError("extraction did not normalize the witness amplitude")
    cleanup: list[ElementaryFactor] = []
    for j in range(n - 1):
        e = staged.amplitude((0, m - 1, j))
        if not e.is_zero():
            f = ElementaryFactor(party="C", kind="add", i=n - 1, j=j, alpha=-e)
            cleanup.append(f)
    if cleanup:
        for f in cleanup:
            staged = staged.apply_local("C", f.to_matrix(n))
        word.extend(cleanup)

    amps = {}
    for idx, val in staged.amps.items():
        if idx == (0, m - 1, n - 1):
            continue
        if idx[2] == n - 1:
            raise AssertionError("unexpected support left at C index N-1")
        if idx[0] == 0 and idx[1] == m - 1:
            raise AssertionError("cleanup left a (0, M-1, j) amplitude")
        amps[idx] = val
    residual = PureState((2, m, n - 1), amps)
    r = residual.local_ranks()
    if r.r_b < m - 1:
        raise AssertionError("residual B-rank dropped below M-1")
    if (r.r_a, r.r_b, r.r_c) not in {
        (2, m - 1, n - 1), (2, m, n - 1), (1, m - 1, n - 1), (1, m, n - 1)
    }:
        raise AssertionError(f"residual ranks {r.as_tuple()} outside the four-way split")
    return ReductionStep(
        extracted_witness=ProductWitness(coeffs=coeffs, u=witness.u, v=witness.v),
        ilo_word=word,
        residual=residual,
        input_dims=dims,
    )


def _sorted_party_order(dims) -> str:
    order = sorted(range(3), key=lambda q: (dims[q], q))
    return "".join(PARTIES[q] for q in order)


def reduction_trace(s: PureState, max_steps: int = 12) -> list[ReductionStep]:
    """Chain of reduction steps from a compressed (2, M, N) state down to a
    base case (stops when a local rank hits 1 or the shape leaves coverage)."""
    steps: list[ReductionStep] = []
    cur = s
    for _ in range(max_steps):
        ranks = cur.local_ranks()
        if ranks.min() < 2:
            break
        comp, _ = compress_to_ranks(cur)
        comp = comp.permute_parties(_sorted_party_order(comp.dims))
        d = comp.dims
        if d[0] != 2 or not (2 <= d[1] <= d[2] <= 2 * d[1]):
            break
        try:
            step = extract_and_reduce(comp)
        except ValueError:
            break
        steps.append(step)
        cur = step.residual
    return steps


def classify(s: PureState, want_proof: bool = True) -> ClassificationResult:
    """Assign a ClassLabel by invariant matching against the canonical library."""
    ranks = s.local_ranks()
    if ranks.min() < 2:
        return ClassificationResult(
            label=ClassLabel("NotTrueTripartite"),
            note=f"local ranks {ranks.as_tuple()}",
        )
    comp, _ = compress_to_ranks(s)
    order = _sorted_party_order(comp.dims)
    norm = comp.permute_parties(order)
    inv = StateInvariants(norm)
    if norm.dims[0] != 2:
        return ClassificationResult(
            label=ClassLabel("Unknown"), invariants=inv, permutation=order,
            note=f"smallest local rank {norm.dims[0]} > 2 is outside coverage",
        )
    table = canonical_invariants(norm.dims)
    if not table:
        return ClassificationResult(
            label=ClassLabel("Unknown"), invariants=inv, permutation=order,
            note=f"shape {norm.dims} has no covered families",
        )
    candidates = list(table)
    for _, tier_fn in _TIERS:
        if len(candidates) <= 1 and candidates and tier_fn is not _TIERS[0][1]:
            break
        val = tier_fn(inv)
        candidates = [L for L in candidates if tier_fn(table[L]) == val]
    if len(candidates) == 1:
        proof = reduction_trace(norm) if want_proof else []
        return ClassificationResult(
            label=candidates[0], proof=proof, invariants=inv, permutation=order
        )
    note = (
        "no canonical class matches the invariant vector"
        if not candidates
        else "invariant vector matches several classes: "
        + ", ".join(c.render() for c in candidates)
    )
    return ClassificationResult(
        label=ClassLabel("Unknown"), invariants=inv, permutation=order, note=note
    )


# -- equivalence --------------------------------------------------------------


@dataclass
class EquivalenceVerdict:
    kind: str  # 'Equivalent' | 'Inequivalent' | 'Undecided'
    witness: OperatorTriple | None = None
    separating_invariant: str | None = None
    detail: str = ""


def _distinguished_points(pen: Pencil):
    """Projective pencil parameters with dropped rank, with their ranks.

    Returns (points, all_exact); each point is ((alpha, beta), rank) meaning
    the member alpha*T0 + beta*T1.
    """
    prof = pen.rank_profile()
    points = []
    exact = True
    for p in prof.exceptional:
        if p.location == "infinity":
            points.append(((ZERO, ONE), p.rank))
        elif getattr(p, "numeric", False):
            exact = False
        else:
            points.append(((ONE, GaussianRational.coerce(p.parameter)), p.rank))
    return points, exact


def _cross(p, q) -> GaussianRational:
    return p[0] * q[1] - p[1] * q[0]


def _solve_bc_given_a(g: Matrix, t_slices, s_slices, m: int, n: int, rng):
    """Solve P @ T'_i = S_i @ R linearly; return (P, R) invertible or None."""
    tp = [
        t_slices[0].scale(g[i, 0]) + t_slices[1].scale(g[i, 1]) for i in range(2)
    ]
    n_unknowns = m * m + n * n
    rows = []
    for i in range(2):
        for r in range(m):
            for c in range(n):
                row = [ZERO] * n_unknowns
                for k in range(m):
                    row[r * m + k] = row[r * m + k] + tp[i][k, c]
                for k in range(n):
                    row[m * m + k * n + c] = row[m * m + k * n + c] - s_slices[i][r, k]
                rows.append(row)
    null = Matrix(rows).nullspace()
    if not null:
        return None

    def build(vec):
        p = Matrix([[vec[r * m + k] for k in range(m)] for r in range(m)])
        rr = Matrix([[vec[m * m + k * n + c] for c in range(n)] for k in range(n)])
        return p, rr

    tries = [v for v in null]
    for _ in range(10):
        coeffs = [GaussianRational(rng.randint(-4, 4)) for _ in null]
        combo = tuple(
            sum((coeffs[i] * null[i][j] for i in range(len(null))), ZERO)
            for j in range(n_unknowns)
        )
        tries.append(combo)
    for vec in tries:
        p, rr = build(vec)
        if not p.det().is_zero() and not rr.det().is_zero():
            return p, rr
    return None


def _witness_same_dims(s1: PureState, s2: PureState, rng) -> OperatorTriple | None:
    """Witness between compressed states of equal dims, pivoting on party A."""
    dims = s1.dims
    if dims[0] != 2:
        return None
    m, n = dims[1], dims[2]
    t1 = s1.slices("A")
    t2 = s2.slices("A")
    pen1 = Pencil(t1[0], t1[1])
    pen2 = Pencil(t2[0], t2[1])
    pts1, exact1 = _distinguished_points(pen1)
    pts2, exact2 = _distinguished_points(pen2)

    candidates: list[Matrix] = []
    if exact1 and exact2 and pts1 and len(pts1) == len(pts2):
        by_rank1: dict[int, list] = {}
        by_rank2: dict[int, list] = {}
        for p, r in pts1:
            by_rank1.setdefault(r, []).append(p)
        for p, r in pts2:
            by_rank2.setdefault(r, []).append(p)
        if set(by_rank1) == set(by_rank2) and all(
            len(by_rank1[r]) == len(by_rank2[r]) for r in by_rank1
        ):
            groups = sorted(by_rank1)
            perms_per_group = [
                list(itertools.permutations(range(len(by_rank1[r])))) for r in groups
            ]
            total = 1
            for pg in perms_per_group:
                total *= len(pg)
            if total <= 24:
                for combo in itertools.product(*perms_per_group):
                    rows = []
                    for gi, r in enumerate(groups):
                        src = by_rank1[r]
                        tgt = by_rank2[r]
                        for a, b in enumerate(combo[gi]):
                            # constraint cross(g^T q, p) = 0 with q in pencil-2
                            # coordinates, p in pencil-1 coordinates
                            p = src[a]
                            q = tgt[b]
                            rows.append([
                                q[0] * p[1], q[1] * p[1], -q[0] * p[0], -q[1] * p[0]
                            ])  # unknowns (g00, g10, g01, g11)
                    nl = Matrix(rows).nullspace()
                    for vec in nl:
                        gm = Matrix([[vec[0], vec[2]], [vec[1], vec[3]]])
                        if not gm.det().is_zero():
                            candidates.append(gm)
                    for _ in range(4 if len(nl) > 1 else 0):
                        cs = [GaussianRational(rng.randint(-3, 3)) for _ in nl]
                        vec = tuple(
                            sum((cs[i] * nl[i][j] for i in range(len(nl))), ZERO)
                            for j in range(4)
                        )
                        gm = Matrix([[vec[0], vec[2]], [vec[1], vec[3]]])
                        if not gm.det().is_zero():
                            candidates.append(gm)
    candidates.append(Matrix.identity(2))
    for _ in range(8):
        candidates.append(random_invertible(2, rng, allow_imag=False))

    for gm in candidates:
        sol = _solve_bc_given_a(gm, t1, t2, m, n, rng)
        if sol is None:
            continue
        p, rr = sol
        v_c = rr.inverse().transpose()
        triple = OperatorTriple(gm, p, v_c, check=False)
        if triple.apply(s1).equals_up_to_scalar(s2):
            return triple
    return None


def _embed_block(v: Matrix, dim: int) -> Matrix:
    grid = [[ONE if r == c else ZERO for c in range(dim)] for r in range(dim)]
    for r in range(v.rows):
        for c in range(v.cols):
            grid[r][c] = v[r, c]
    # zero the off-block parts of the leading rows/columns
    for r in range(v.rows):
        for c in range(v.cols, dim):
            grid[r][c] = ZERO
    for r in range(v.rows, dim):
        for c in range(v.cols):
            grid[r][c] = ZERO
    return Matrix(grid)


def find_equivalence_witness(
    s1: PureState, s2: PureState, seed: int = 0
) -> OperatorTriple | None:
    """Explicit ILO triple carrying s1 to s2 up to a global scalar, or None."""
    if s1.dims == s2.dims and s1.equals_up_to_scalar(s2):
        return OperatorTriple.identity(s1.dims)
    if s1.local_ranks().as_tuple() != s2.local_ranks().as_tuple():
        return None
    rng = random.Random(seed)
    comp1, ch1 = compress_to_ranks(s1)
    comp2, ch2 = compress_to_ranks(s2)
    if comp1.dims != comp2.dims:
        return None
    inner = None
    if comp1.dims[0] == 2:
        inner = _witness_same_dims(comp1, comp2, rng)
    elif comp1.dims[1] == 2 or comp1.dims[2] == 2:
        # pivot on whichever party has rank two
        pivot = "B" if comp1.dims[1] == 2 else "C"
        order = {"B": "BAC", "C": "CAB"}[pivot]
        w = _witness_same_dims(
            comp1.permute_parties(order), comp2.permute_parties(order), rng
        )
        if w is not None:
            mats = {order[i]: [w.v_a, w.v_b, w.v_c][i] for i in range(3)}
            inner = OperatorTriple(mats["A"], mats["B"], mats["C"], check=False)
    if inner is None:
        return None
    mats = []
    inner_mats = inner.matrices()
    for q, party in enumerate(PARTIES):
        emb = _embed_block(inner_mats[party], s1.dims[q])
        mats.append(ch2[party].inverse() @ emb @ ch1[party])
    triple = OperatorTriple(*mats, check=False)
    if triple.apply(s1).equals_up_to_scalar(s2):
        return triple
    return None


def decide_equivalence(s1: PureState, s2: PureState, seed: int = 0) -> EquivalenceVerdict:
    """Fixed pipeline: ranks, signature, pencil profile, partner multisets,
    class labels; Equivalent verdicts carry an explicit verified witness."""
    if s1.dims == s2.dims and s1.equals_up_to_scalar(s2):
        return EquivalenceVerdict(
            kind="Equivalent", witness=OperatorTriple.identity(s1.dims),
            detail="states are equal up to a global scalar",
        )
    inv1, inv2 = StateInvariants(s1), StateInvariants(s2)
    if inv1.ranks.as_tuple() != inv2.ranks.as_tuple():
        return EquivalenceVerdict(
            kind="Inequivalent", separating_invariant="local ranks",
            detail=f"{inv1.ranks.as_tuple()} vs {inv2.ranks.as_tuple()}",
        )
    if inv1.signature.key() != inv2.signature.key():
        return EquivalenceVerdict(
            kind="Inequivalent", separating_invariant="signature",
            detail=f"{inv1.signature.render()} vs {inv2.signature.render()}",
        )
    if (
        inv1.bc_profile_key() is not None
        and inv2.bc_profile_key() is not None
        and inv1.bc_profile_key() != inv2.bc_profile_key()
    ):
        return EquivalenceVerdict(
            kind="Inequivalent", separating_invariant="pencil rank profile",
            detail=f"{inv1.bc_profile_key()} vs {inv2.bc_profile_key()}",
        )
    pk1, pk2 = inv1.partner_key(), inv2.partner_key()
    if "numeric" not in pk1 and "numeric" not in pk2 and pk1 != pk2:
        return EquivalenceVerdict(
            kind="Inequivalent", separating_invariant="partner-rank multiset",
            detail=f"{pk1} vs {pk2}",
        )
    c1 = classify(s1, want_proof=False)
    c2 = classify(s2, want_proof=False)
    sentinel = {"Unknown", "NotTrueTripartite"}
    if c1.label.family not in sentinel and c2.label.family not in sentinel:
        if c1.label == c2.label and c1.permutation == c2.permutation:
            w = find_equivalence_witness(s1, s2, seed=seed)
            if w is not None:
                return EquivalenceVerdict(
                    kind="Equivalent", witness=w,
                    detail=f"both classify as {c1.label.render()}",
                )
            return EquivalenceVerdict(
                kind="Undecided",
                detail="same class label but no exact witness found",
            )
        if c1.label != c2.label:
            return EquivalenceVerdict(
                kind="Inequivalent", separating_invariant="class label",
                detail=f"{c1.label.render()} vs {c2.label.render()}",
            )
    return EquivalenceVerdict(kind="Undecided", detail="outside covered families")

"""Tripartite pure states with exact amplitudes.

States are stored sparse (index triple -> scalar); the canonical families all
have O(M) nonzero amplitudes.  Equality is up to a global nonzero scalar: the
first nonzero amplitude in lexicographic index order is scaled to one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import GaussianRational, ZERO, ONE
from .matrices import Matrix

PARTIES = ("A", "B", "C")


@dataclass(frozen=True)
class LocalRankProfile:
    r_a: int
    r_b: int
    r_c: int

    def as_tuple(self):
        return (self.r_a, self.r_b, self.r_c)

    def min(self):
        return min(self.as_tuple())


class PureState:
    """Pure state of an (d_A, d_B, d_C) system, unnormalized, exact."""

    __slots__ = ("dims", "amps")

    def __init__(self, dims, amplitudes):
        dims = tuple(int(d) for d in dims)
        if len(dims) != 3 or any(d < 1 for d in dims):
            raise ValueError(f"bad dims {dims}")
        amps = {}
        for idx, val in dict(amplitudes).items():
            i, j, k = idx
            if not (0 <= i < dims[0] and 0 <= j < dims[1] and 0 <= k < dims[2]):
                raise ValueError(f"index {idx} out of range for dims {dims}")
            v = GaussianRational.coerce(val)
            if not v.is_zero():
                amps[(i, j, k)] = v
        if not amps:
            raise ValueError("state must have at least one nonzero amplitude")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @staticmethod
    def from_kets(dims, kets) -> "PureState":
        """Build from a list of (i, j, k) or ((i, j, k), coeff) entries."""
        amps: dict = {}
        for item in kets:
            if len(item) == 3 and all(isinstance(x, int) for x in item):
                idx, coeff = tuple(item), ONE
            else:
                idx, coeff = tuple(item[0]), GaussianRational.coerce(item[1])
            amps[idx] = amps.get(idx, ZERO) + coeff
        return PureState(dims, amps)

    def amplitude(self, idx) -> GaussianRational:
        return self.amps.get(tuple(idx), ZERO)

    def scaled(self, s) -> "PureState":
        s = GaussianRational.coerce(s)
        if s.is_zero():
            raise ValueError("cannot scale a state by zero")
        return PureState(self.dims, {k: v * s for k, v in self.amps.items()})

    def normalized_leading(self) -> "PureState":
        """Scale so the lexicographically first nonzero amplitude is 1."""
        first = min(self.amps)
        return self.scaled(self.amps[first].inverse())

    def equals_up_to_scalar(self, other: "PureState") -> bool:
        if self.dims != other.dims:
            return False
        return self.normalized_leading().amps == other.normalized_leading().amps

    def __eq__(self, other):
        return (
            isinstance(other, PureState)
            and self.dims == other.dims
            and self.equals_up_to_scalar(other)
        )

    def __hash__(self):
        n = self.normalized_leading()
        return hash((n.dims, tuple(sorted(n.amps.items(), key=lambda kv: kv[0]))))

    def __repr__(self):
        terms = ", ".join(
            f"{idx}:{val}" for idx, val in sorted(self.amps.items())
        )
        return f"PureState(dims={self.dims}, {{{terms}}})"

    # -- unfoldings and slices ----------------------------------------------

    def unfolding(self, party: str) -> Matrix:
        """Party-vs-rest matrix; rows indexed by the party, columns by the
        remaining two parties in A<B<C order."""
        p = PARTIES.index(party)
        others = [q for q in range(3) if q != p]
        d_row = self.dims[p]
        d_col = self.dims[others[0]] * self.dims[others[1]]
        grid = [[ZERO] * d_col for _ in range(d_row)]
        for (i, j, k), v in self.amps.items():
            idx = (i, j, k)
            col = idx[others[0]] * self.dims[others[1]] + idx[others[1]]
            grid[idx[p]][col] = v
        return Matrix(grid)

    def slice(self, party: str, index: int) -> Matrix:
        """Sub-tensor at a fixed party index, as a matrix over the remaining
        parties (first remaining party = rows)."""
        p = PARTIES.index(party)
        others = [q for q in range(3) if q != p]
        grid = [[ZERO] * self.dims[others[1]] for _ in range(self.dims[others[0]])]
        for (i, j, k), v in self.amps.items():
            idx = (i, j, k)
            if idx[p] == index:
                grid[idx[others[0]]][idx[others[1]]] = v
        return Matrix(grid)

    def slices(self, party: str):
        return [self.slice(party, i) for i in range(self.dims[PARTIES.index(party)])]

    # -- core operations -----------------------------------------------------

    def local_ranks(self) -> LocalRankProfile:
        return LocalRankProfile(
            self.unfolding("A").rank(),
            self.unfolding("B").rank(),
            self.unfolding("C").rank(),
        )

    def reduced_density(self, parties) -> Matrix:
        """Unnormalized reduced density matrix of a proper nonempty subset of
        parties: rho = U @ conj(U).T for the joint unfolding U."""
        parties = tuple(sorted(set(parties), key=PARTIES.index))
        if not parties or len(parties) == 3:
            raise ValueError("parties must be a proper nonempty subset of A, B, C")
        keep = [PARTIES.index(p) for p in parties]
        drop = [q for q in range(3) if q not in keep]
        d_row = 1
        for q in keep:
            d_row *= self.dims[q]
        d_col = 1
        for q in drop:
            d_col *= self.dims[q]
        grid = [[ZERO] * d_col for _ in range(d_row)]
        for idx, v in self.amps.items():
            row = 0
            for q in keep:
                row = row * self.dims[q] + idx[q]
            col = 0
            for q in drop:
                col = col * self.dims[q] + idx[q]
            grid[row][col] = v
        u = Matrix(grid)
        return u @ u.conjugate().transpose()

    def apply_local(self, party: str, m: Matrix) -> "PureState":
        """Contract the chosen index with a square matrix (new = m @ old)."""
        p = PARTIES.index(party)
        d = self.dims[p]
        if m.shape() != (d, d):
            raise ValueError(f"operator shape {m.shape()} does not match dim {d}")
        amps: dict = {}
        for idx, v in self.amps.items():
            src = idx[p]
            for dst in range(d):
                coeff = m[dst, src]
                if coeff.is_zero():
                    continue
                new_idx = list(idx)
                new_idx[p] = dst
                key = tuple(new_idx)
                acc = amps.get(key, ZERO) + coeff * v
                if acc.is_zero():
                    amps.pop(key, None)
                else:
                    amps[key] = acc
        if not amps:
            raise ValueError("local operator annihilates the state (singular)")
        return PureState(self.dims, amps)

    def permute_parties(self, order) -> "PureState":
        """Relabel parties; order is a permutation string such as 'BAC'."""
        perm = [PARTIES.index(ch) for ch in order]
        if sorted(perm) != [0, 1, 2]:
            raise ValueError(f"bad permutation {order!r}")
        dims = tuple(self.dims[p] for p in perm)
        amps = {tuple(idx[p] for p in perm): v for idx, v in self.amps.items()}
        return PureState(dims, amps)


@dataclass(frozen=True)
class AdjointForm:
    """Expansion s = sum_i |i>_party (x) partner_i with independent partners.

    ``basis_change`` is the invertible matrix applied to the chosen party so
    that the party slices of the transformed state are the listed partners
    (zero beyond the local rank).
    """

    party: str
    basis_change: Matrix
    partner_states: tuple[Matrix, ...]

    def reconstruct(self, dims) -> PureState:
        """Rebuild the original state (undoing the basis change)."""
        p = PARTIES.index(self.party)
        others = [q for q in range(3) if q != p]
        amps: dict = {}
        for i, mat in enumerate(self.partner_states):
            for r in range(mat.rows):
                for c in range(mat.cols):
                    v = mat[r, c]
                    if v.is_zero():
                        continue
                    idx = [0, 0, 0]
                    idx[p] = i
                    idx[others[0]] = r
                    idx[others[1]] = c
                    amps[tuple(idx)] = v
        staged = PureState(dims, amps)
        return staged.apply_local(self.party, self.basis_change.inverse())


def adjoint_form(s: PureState, party: str) -> AdjointForm:
    """Row-reduce the party unfolding to produce an adjoint expansion."""
    u = s.unfolding(party)
    r, pivots, t = u.rref()
    rank = len(pivots)
    s2 = s.apply_local(party, t)
    partners = tuple(s2.slice(party, i) for i in range(rank))
    return AdjointForm(party=party, basis_change=t, partner_states=partners)


def compress_to_ranks(s: PureState):
    """Shrink each party dimension to its local rank.

    Returns (state, per-party basis changes applied in the original dims).
    The basis changes map the support onto the leading basis vectors; trailing
    dimensions are dropped.
    """
    changes = {}
    cur = s
    for party in PARTIES:
        u = cur.unfolding(party)
        _, pivots, t = u.rref()
        changes[party] = t
        cur = cur.apply_local(party, t)
    ranks = cur.local_ranks().as_tuple()
    dims = cur.dims
    new_dims = ranks
    amps = {}
    for idx, v in cur.amps.items():
        if all(idx[q] < new_dims[q] for q in range(3)):
            amps[idx] = v
        elif not v.is_zero():
            raise AssertionError("support outside rank block after compression")
    return PureState(new_dims, amps), changes

"""Pure-state container: unfoldings, ranks, local actions, compression."""

import random

import numpy as np
import pytest

from slocc2mn.scalars import GaussianRational, ZERO, ONE
from slocc2mn.matrices import Matrix
from slocc2mn.states import PureState, adjoint_form, compress_to_ranks
from slocc2mn.operators import random_ilo, random_invertible
from slocc2mn.families import ClassLabel, make_canonical


GHZ = make_canonical(ClassLabel("GHZ"))
W = make_canonical(ClassLabel("W"))


def test_from_kets_amplitudes():
    assert GHZ.amplitude((0, 0, 0)) == ONE
    assert GHZ.amplitude((1, 1, 1)) == ONE
    assert GHZ.amplitude((0, 1, 1)).is_zero()


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        PureState((2, 2), {(0, 0): ONE})
    with pytest.raises(ValueError):
        PureState((2, 2, 2), {(0, 0, 2): ONE})
    with pytest.raises(ValueError):
        PureState((2, 2, 2), {})


def test_unfolding_shapes_and_entries():
    u = GHZ.unfolding("A")
    assert u.shape() == (2, 4)
    assert u[0, 0] == ONE and u[1, 3] == ONE
    assert GHZ.unfolding("B").shape() == (2, 4)
    s = make_canonical(ClassLabel("Psi1"))
    assert s.unfolding("B").shape() == (3, 6)


def test_slices_recompose_unfolding():
    s = make_canonical(ClassLabel("Psi4"))
    for party in "ABC":
        u = s.unfolding(party)
        for i, sl in enumerate(s.slices(party)):
            flat = [e for row in sl.entries for e in row]
            assert list(u.entries[i]) == flat


def test_local_ranks_of_known_states():
    assert GHZ.local_ranks().as_tuple() == (2, 2, 2)
    assert W.local_ranks().as_tuple() == (2, 2, 2)
    prod = PureState.from_kets((2, 2, 2), [(0, 0, 0)])
    assert prod.local_ranks().as_tuple() == (1, 1, 1)
    bipartite = PureState.from_kets((2, 2, 2), [(0, 0, 0), (0, 1, 1)])
    assert bipartite.local_ranks().as_tuple() == (1, 2, 2)


def test_reduced_density_rank_equals_local_rank():
    for s in (GHZ, W, make_canonical(ClassLabel("Psi3"))):
        for party in "ABC":
            rho = s.reduced_density(party)
            assert rho.rank() == s.local_ranks().as_tuple()["ABC".index(party)]
            # hermitian
            assert rho == rho.conjugate().transpose()


def test_reduced_density_matches_numpy_partial_trace():
    s = make_canonical(ClassLabel("Psi2"))
    rho = s.reduced_density("A").to_complex()
    # dense tensor oracle
    t = np.zeros((2, 3, 3), dtype=complex)
    for (i, j, k), v in s.amps.items():
        t[i, j, k] = complex(v)
    flat = t.reshape(2, 9)
    ref = flat @ flat.conj().T
    assert np.allclose(rho, ref)


def test_apply_local_matches_unfolding_product():
    rng = random.Random(40)
    s = make_canonical(ClassLabel("Psi6"))
    for party, dim in zip("ABC", s.dims):
        g = random_invertible(dim, rng)
        s2 = s.apply_local(party, g)
        assert s2.unfolding(party) == g @ s.unfolding(party)


def test_apply_local_rejects_annihilation():
    with pytest.raises(ValueError):
        GHZ.apply_local("A", Matrix.zero(2, 2))


def test_permute_parties_round_trip():
    s = make_canonical(ClassLabel("Theta0", 2))
    assert s.permute_parties("BCA").permute_parties("CAB") == s
    assert s.permute_parties("ABC") == s
    back = s.permute_parties("ACB").permute_parties("ACB")
    assert back == s


def test_scaling_and_scalar_equality():
    two = GHZ.scaled(GaussianRational(2))
    assert two.amps != GHZ.amps
    assert two.equals_up_to_scalar(GHZ)
    assert two == GHZ  # state equality is projective
    assert hash(two) == hash(GHZ)
    assert not W.equals_up_to_scalar(GHZ)


def test_adjoint_form_round_trip():
    for label in ("GHZ", "W", "Psi5"):
        s = make_canonical(ClassLabel(label))
        for party in "ABC":
            form = adjoint_form(s, party)
            assert len(form.partner_states) == s.local_ranks().as_tuple()[
                "ABC".index(party)
            ]
            # partners are linearly independent by construction
            assert form.reconstruct(s.dims) == s


def test_compress_to_ranks_is_ilo_image():
    rng = random.Random(41)
    s = make_canonical(ClassLabel("Upsilon1", 2))  # 2 x 3 x 5
    # embed into larger ambient dims via zero-padding plus a random ILO
    amps = dict(s.amps)
    big = PureState((3, 4, 6), amps)
    g = random_ilo(big.dims, 99)
    messy = g.apply(big)
    comp, changes = compress_to_ranks(messy)
    assert comp.dims == messy.local_ranks().as_tuple() == (2, 3, 5)
    # replaying the recorded basis changes on the messy state reproduces the
    # compressed state inside the leading block
    cur = messy
    for party in "ABC":
        cur = cur.apply_local(party, changes[party])
    for idx, v in cur.amps.items():
        assert all(idx[q] < comp.dims[q] for q in range(3))
        assert comp.amplitude(idx) == v

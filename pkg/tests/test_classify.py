"""Classifier and equivalence decisions."""

import random

import pytest

from slocc2mn.scalars import GaussianRational, ONE
from slocc2mn.states import PureState, compress_to_ranks
from slocc2mn.operators import random_ilo
from slocc2mn.families import (
    ClassLabel,
    make_canonical,
    all_labels_for_shape,
    SMALL_FAMILIES,
    PARAMETRIC_FAMILIES,
)
from slocc2mn.classify import (
    classify,
    decide_equivalence,
    extract_and_reduce,
    reduction_trace,
    apply_ilo_word,
    find_equivalence_witness,
    canonical_invariants,
)


def covered_labels(max_m=3):
    labels = [ClassLabel(n) for n in SMALL_FAMILIES if not n.startswith("Phi")]
    for name in PARAMETRIC_FAMILIES:
        lo = 2 if name in ("Upsilon0", "Theta4") else 1
        labels.extend(ClassLabel(name, m) for m in range(lo, max_m + 1))
    return labels


def test_self_classification_of_canonical_states():
    for label in covered_labels():
        res = classify(make_canonical(label), want_proof=False)
        assert res.label == label, f"{label.render()} classified as {res.label.render()}"


def test_classification_stable_under_ilo():
    rng_seeds = (3, 17)
    for label in covered_labels(max_m=2):
        s = make_canonical(label)
        for seed in rng_seeds:
            g = random_ilo(s.dims, seed)
            assert classify(g.apply(s), want_proof=False).label == label


def test_not_true_tripartite():
    prod = PureState.from_kets((2, 2, 2), [(0, 0, 0), (0, 1, 1)])
    res = classify(prod)
    assert res.label == ClassLabel("NotTrueTripartite")


def test_uncovered_shape_is_unknown():
    # (2, 4, 4) and (2, 4, 5) have no canonical library entries
    for fam in ("Phi0Example", "Phi1Example"):
        res = classify(make_canonical(ClassLabel(fam)))
        assert res.label == ClassLabel("Unknown")
        assert "covered" in res.note


def test_classification_permutes_parties_when_needed():
    s = make_canonical(ClassLabel("Upsilon2", 2)).permute_parties("CBA")
    res = classify(s, want_proof=False)
    assert res.label == ClassLabel("Upsilon2", 2)
    assert res.permutation != "ABC"


def test_reduction_step_contract():
    s = make_canonical(ClassLabel("Upsilon0", 3))  # (2, 3, 6)
    step = extract_and_reduce(s)
    m, n = 3, 6
    # replaying the ILO word reproduces |0, M-1, N-1> + residual
    replayed = apply_ilo_word(s, step.ilo_word)
    assert replayed.amplitude((0, m - 1, n - 1)) == ONE
    for idx, v in step.residual.amps.items():
        assert replayed.amplitude(idx) == v
    assert len(replayed.amps) == len(step.residual.amps) + 1
    assert step.residual.dims == (2, m, n - 1)


def test_reduction_trace_terminates_on_base_case():
    s = make_canonical(ClassLabel("Theta1", 2))
    steps = reduction_trace(s)
    assert steps
    last = steps[-1].residual
    assert last.local_ranks().min() < 2 or last.dims[0] != 2


def test_classify_proof_replays_exactly():
    res = classify(make_canonical(ClassLabel("Upsilon1", 2)))
    assert res.proof
    for step in res.proof:
        assert step.residual.dims[2] == step.input_dims[2] - 1


def test_decide_equivalence_symmetric_and_reflexive():
    s1 = make_canonical(ClassLabel("Psi6"))
    s2 = make_canonical(ClassLabel("Psi4"))
    assert decide_equivalence(s1, s1).kind == "Equivalent"
    v12 = decide_equivalence(s1, s2)
    v21 = decide_equivalence(s2, s1)
    assert v12.kind == v21.kind == "Inequivalent"
    assert v12.separating_invariant == v21.separating_invariant


def test_equivalent_verdict_carries_verified_witness():
    s = make_canonical(ClassLabel("Psi6"))
    g = random_ilo(s.dims, 11)
    moved = g.apply(s)
    verdict = decide_equivalence(s, moved)
    assert verdict.kind == "Equivalent"
    assert verdict.witness is not None
    assert verdict.witness.apply(s).equals_up_to_scalar(moved)


def test_find_equivalence_witness_rejects_different_classes():
    s1 = make_canonical(ClassLabel("GHZ"))
    s2 = make_canonical(ClassLabel("W"))
    assert find_equivalence_witness(s1, s2) is None


def test_witness_found_across_embeddings():
    base = make_canonical(ClassLabel("Upsilon1", 1))  # (2, 2, 3)
    big = PureState((2, 3, 4), dict(base.amps))
    g = random_ilo(big.dims, 21)
    moved = g.apply(big)
    w = find_equivalence_witness(big, moved)
    assert w is not None
    assert w.apply(big).equals_up_to_scalar(moved)


def test_canonical_invariants_cached_and_complete():
    table = canonical_invariants((2, 3, 3))
    assert set(table) == set(all_labels_for_shape((2, 3, 3)))
    assert canonical_invariants((2, 3, 3)) is table


def test_canonical_invariant_vectors_pairwise_distinct():
    """Within every covered shape some invariant tier separates each pair."""
    shapes = [(2, 2, 2), (2, 3, 3), (2, 2, 3), (2, 3, 4), (2, 4, 6)]
    for dims in shapes:
        table = canonical_invariants(dims)
        labels = list(table)
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                a, b = table[labels[i]], table[labels[j]]
                separated = (
                    a.signature_key() != b.signature_key()
                    or a.bc_profile_key() != b.bc_profile_key()
                    or a.partner_key() != b.partner_key()
                    or a.quadric_key() != b.quadric_key()
                )
                assert separated, (labels[i].render(), labels[j].render())

"""Canonical family states, labels, and the 2x3x3 expression generators."""

import pytest

from slocc2mn.scalars import GaussianRational
from slocc2mn.families import (
    SMALL_FAMILIES,
    PARAMETRIC_FAMILIES,
    ClassLabel,
    FamilyParams,
    make_canonical,
    make_expression,
    expression_branch_label,
    all_labels_for_shape,
)
from slocc2mn.classify import classify


def test_label_parse_render_round_trip():
    for text in ("GHZ", "Psi4", "Upsilon0(3)", "Theta5(2)", "Upsilon1(1)"):
        assert ClassLabel.parse(text).render() == text


def test_label_validation():
    with pytest.raises(ValueError):
        ClassLabel("GHZ", 2)  # no parameter allowed
    with pytest.raises(ValueError):
        ClassLabel("Upsilon0")  # parameter required
    with pytest.raises(ValueError):
        ClassLabel("Upsilon0", 1)  # minimum parameter is 2
    with pytest.raises(ValueError):
        ClassLabel("Theta4", 1)  # absent from the 2x3x4 shape
    with pytest.raises(ValueError):
        ClassLabel("NoSuchFamily")


def test_canonical_dims():
    expected = {
        ("GHZ", None): (2, 2, 2),
        ("W", None): (2, 2, 2),
        ("Psi1", None): (2, 3, 3),
        ("Phi0Example", None): (2, 4, 4),
        ("Upsilon0", 3): (2, 3, 6),
        ("Upsilon1", 2): (2, 3, 5),
        ("Upsilon2", 2): (2, 3, 5),
        ("Theta0", 2): (2, 4, 6),
        ("Theta3", 1): (2, 3, 4),
    }
    for (fam, m), dims in expected.items():
        s = make_canonical(ClassLabel(fam, m))
        assert s.dims == dims
        # every canonical representative is a true tripartite state
        assert s.local_ranks().as_tuple() == dims


def test_sentinels_have_no_canonical_state():
    with pytest.raises(ValueError):
        make_canonical(ClassLabel("Unknown"))


def test_all_labels_for_shape():
    assert [l.render() for l in all_labels_for_shape((2, 2, 2))] == ["GHZ", "W"]
    assert len(all_labels_for_shape((2, 3, 3))) == 6
    assert [l.render() for l in all_labels_for_shape((2, 2, 3))] == [
        "Upsilon1(1)",
        "Upsilon2(1)",
    ]
    theta_m1 = [l.render() for l in all_labels_for_shape((2, 3, 4))]
    assert "Theta4(1)" not in theta_m1 and len(theta_m1) == 5
    assert len(all_labels_for_shape((2, 4, 6))) == 6
    assert all_labels_for_shape((3, 4, 5)) == []
    assert all_labels_for_shape((2, 4, 4)) == []  # deliberately uncovered shape


def test_labels_are_dims_consistent():
    for dims in ((2, 2, 2), (2, 3, 3), (2, 2, 3), (2, 3, 4), (2, 4, 6), (2, 3, 6)):
        for label in all_labels_for_shape(dims):
            assert make_canonical(label).dims == dims


def test_expression_structures():
    p = FamilyParams.of(a=1, b=2)
    s = make_expression("I", p)
    assert s.dims == (2, 3, 3)
    assert s.amplitude((0, 2, 2)) == GaussianRational(1)
    assert s.amplitude((1, 2, 2)) == GaussianRational(2)
    s5 = make_expression("V", FamilyParams.of())
    assert len(s5.amps) == 4


def test_expression_rejects_zero_brackets():
    with pytest.raises(ValueError):
        make_expression("I", FamilyParams.of(a=0, b=0))
    with pytest.raises(ValueError):
        make_expression("III", FamilyParams.of(a=1, b=1, c=0, d=0, f=1, g=1))
    with pytest.raises(ValueError):
        make_expression("nope", FamilyParams.of(a=1, b=1))


def test_expression_branch_rules_match_classifier():
    cases = [
        ("I", dict(a=1, b=1)),
        ("I", dict(a=1, b=0)),
        ("II", dict(a=1, b=2)),
        ("II", dict(a=1, b=0)),
        ("IV", dict(a=2, b=1, c=1, d=1, f=1, g=2)),
        ("IV", dict(a=1, b=0, c=1, d=0, f=0, g=1)),
        ("V", dict()),
    ]
    for which, kw in cases:
        params = FamilyParams.of(**kw)
        state = make_expression(which, params)
        if state.local_ranks().as_tuple() != (2, 3, 3):
            continue
        assert classify(state, want_proof=False).label == expression_branch_label(
            which, params
        )


def test_branch_rule_rejects_expression_three():
    with pytest.raises(ValueError):
        expression_branch_label("III", FamilyParams.of(a=1, b=1, c=1, d=1, f=1, g=1))

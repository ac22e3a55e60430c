import pytest

from hurwitz_engine.services.cutjoin import (
    cutjoin_rhs,
    prefix_poset,
    rgs_recurrence_sides,
    verify_rgs_recurrence,
)
from hurwitz_engine.services.parabolic import classify_pqc
from hurwitz_engine.services.real_orbit_group import build_group, preset_datum
from hurwitz_engine.utils.errors import (
    BudgetExceededError,
    InvalidParameterError,
    NonCrystallographicError,
    NotPqcError,
)


def pqc_representatives(group):
    return [cls[0] for cls in group.conjugacy_classes() if classify_pqc(group, cls[0]).is_pqc]


def test_identity_of_b2(b2, lattices):
    result = cutjoin_rhs(b2, b2.identity, lattices(b2))
    assert result.ltr == 4
    assert result.first_sum == 0
    assert result.second_sum == 48
    assert result.total == 48
    assert result.first_terms_pqc


@pytest.mark.parametrize("fixture", ["a2", "a3", "b2", "b3"])
def test_recursion_reproduces_full_counts(request, lattices, fixture):
    group = request.getfixturevalue(fixture)
    lattice = lattices(group)
    for g in pqc_representatives(group):
        result = cutjoin_rhs(group, g, lattice)
        assert result.total == lattice.count_full(g, result.ltr)
        assert result.first_terms_pqc


def test_reflection_uses_both_sums(b2, lattices):
    result = cutjoin_rhs(b2, b2.reflections[0], lattices(b2))
    assert result.ltr == 3
    assert result.first_sum > 0
    assert result.second_sum > 0


@pytest.mark.parametrize("fixture", ["a2", "a3", "b2"])
def test_rgs_recurrence(request, lattices, fixture):
    group = request.getfixturevalue(fixture)
    lattice = lattices(group)
    for g in pqc_representatives(group):
        assert verify_rgs_recurrence(group, g, lattice)


def test_rgs_recurrence_sides_of_a2(a2, lattices):
    sides = rgs_recurrence_sides(a2, a2.identity, lattices(a2))
    # ltr * Fred * #RGS * I(W_g)/I(W) = 4 * 1 * 3 * 1/3
    assert sides.lhs == 4
    assert sides.holds


def test_rgs_recurrence_needs_crystallographic_group():
    h3 = build_group(preset_datum("H3"))
    with pytest.raises(NonCrystallographicError):
        rgs_recurrence_sides(h3, h3.identity, None)


def test_cutjoin_rejects(b2, g312, lattices):
    with pytest.raises(InvalidParameterError):
        cutjoin_rhs(g312, g312.identity, lattices(g312))
    longest = b2.element_from_word([1, 2, 1, 2])
    with pytest.raises(NotPqcError):
        cutjoin_rhs(b2, longest, lattices(b2))


def test_prefix_poset_of_b2(b2, lattices):
    poset = prefix_poset(b2, lattices(b2))
    assert poset.height == 4
    assert poset.chain_count == 48
    assert poset.prefix_lengths_hold
    assert poset.levels[0] == [(b2.identity, 0)]
    assert poset.levels[4] == [(b2.identity, b2.full_mask)]

    middle = {x for x, _ in poset.middle_rank()}
    assert b2.element_from_word([1, 2, 1, 2]) in middle
    assert b2.element_from_word([1, 2]) in middle
    assert b2.element_from_word([2, 1]) in middle
    assert b2.identity in middle


def test_prefix_poset_chains_match_counts(a2, a3, lattices):
    for group, expected in ((a2, 24), (a3, 2880)):
        assert prefix_poset(group, lattices(group)).chain_count == expected


def test_prefix_poset_dot(b2, lattices):
    poset = prefix_poset(b2, lattices(b2))
    dot = poset.to_dot()
    assert dot.startswith("digraph prefix_poset {")
    assert "rankdir=BT;" in dot
    assert dot.count("rank=same;") == 5
    assert dot.count(" -> ") == len(poset.covers())
    summary = poset.to_dict()
    assert summary["chain_count"] == "48"
    assert sum(summary["level_sizes"]) == poset.graph.number_of_nodes()


def test_prefix_poset_budget(b2, lattices):
    with pytest.raises(BudgetExceededError):
        prefix_poset(b2, lattices(b2), max_nodes=3)


def test_prefix_poset_needs_real_group(g312, lattices):
    with pytest.raises(InvalidParameterError):
        prefix_poset(g312, lattices(g312))


def test_first_sum_only_uses_parabolics_containing_gt(a2, lattices):
    lattice = lattices(a2)
    coxeter = a2.element_from_word([1, 2])
    result = cutjoin_rhs(a2, coxeter, lattice)
    assert result.total == lattice.count_full(coxeter, result.ltr) == 3
    assert result.first_terms_pqc
    for term in result.first_terms:
        gt = a2.rmul[term.reflection][coxeter]
        assert lattice.contains(term.mask, gt)
        assert term.value > 0

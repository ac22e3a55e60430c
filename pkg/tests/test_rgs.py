from fractions import Fraction

import pytest

from hurwitz_engine.services.cyclo_gram import main_theorem_rhs
from hurwitz_engine.services.parabolic import classify_pqc
from hurwitz_engine.services.rgs import (
    NONE,
    ROOTED_TREE,
    TREE,
    UNICYCLE,
    aggregate_constant,
    count_rgs_formula,
    dedekind_psi,
    enumerate_rgs,
    enumerate_rgs_by_graph,
    enumerate_rgs_by_product,
    expected_aggregate_constant,
    grammian_histogram,
    lattice_basis_generates,
    relative_graph_classify,
)
from hurwitz_engine.services.wreath_core import GroupSpec, WreathElement, WreathGroup, reflections_of
from hurwitz_engine.utils.errors import InvalidParameterError, NotPqcError, NotWellGeneratedError


def element(group, perm, colors):
    return group.id_of_element(WreathElement(tuple(perm), tuple(colors)))


def subsets(records):
    return [r.reflections for r in records]


@pytest.mark.parametrize("fixture,count", [("s3", 3), ("g212", 4), ("b2", 4), ("a2", 3), ("s4", 16), ("d3", 16)])
def test_rgs_count_of_identity(request, fixture, count):
    group = request.getfixturevalue(fixture)
    assert len(enumerate_rgs(group, group.identity)) == count


def test_quasi_coxeter_elements_have_the_empty_set(a3):
    coxeter = a3.element_from_word([1, 2, 3])
    assert subsets(enumerate_rgs(a3, coxeter)) == [()]


@pytest.mark.parametrize("fixture", ["s3", "s4", "g212", "d3", "g312", "g333"])
def test_formula_matches_search(request, fixture):
    group = request.getfixturevalue(fixture)
    for cls in group.conjugacy_classes():
        g = cls[0]
        classification = classify_pqc(group, g)
        if not classification.is_pqc:
            continue
        assert count_rgs_formula(group.spec, classification) == len(enumerate_rgs(group, g))


@pytest.mark.parametrize("fixture", ["g212", "d3", "g312", "g333"])
def test_graph_route_matches_search(request, fixture):
    group = request.getfixturevalue(fixture)
    for cls in group.conjugacy_classes():
        g = cls[0]
        if not classify_pqc(group, g).is_pqc:
            assert enumerate_rgs_by_graph(group, g) == []
            continue
        assert subsets(enumerate_rgs_by_graph(group, g)) == subsets(enumerate_rgs(group, g))


@pytest.mark.parametrize("fixture", ["s3", "g212", "b2", "a3"])
def test_product_route_matches_search(request, fixture):
    group = request.getfixturevalue(fixture)
    for cls in group.conjugacy_classes():
        g = cls[0]
        if classify_pqc(group, g).is_pqc:
            assert enumerate_rgs_by_product(group, g) == subsets(enumerate_rgs(group, g))


def test_small_formula_values(g312, g333):
    full = classify_pqc(g312, element(g312, (1, 2), (1, 0)))
    assert count_rgs_formula(g312.spec, full) == 3
    pair = classify_pqc(g333, element(g333, (1, 3, 2), (1, 2, 0)))
    assert count_rgs_formula(g333.spec, pair) == 1


def test_formula_rejects_non_pqc(g333):
    bad = classify_pqc(g333, element(g333, (1, 2, 3), (1, 1, 1)))
    with pytest.raises(NotPqcError):
        count_rgs_formula(g333.spec, bad)


def test_not_well_generated():
    group = WreathGroup(GroupSpec(4, 2, 2))
    with pytest.raises(NotWellGeneratedError):
        enumerate_rgs(group, group.identity)


def test_relative_graph_shapes():
    refl = reflections_of(GroupSpec(3, 1, 3))
    by_label = {r.label(): r for r in refl}
    singletons = [(1,), (2,), (3,)]

    tree = relative_graph_classify([by_label["[(12);0]"], by_label["[(23);1]"]], singletons, 3)
    assert tree.kind == TREE

    rooted = relative_graph_classify(
        [by_label["[(12);0]"], by_label["[(23);0]"], refl[-1]], singletons, 3,
    )
    assert rooted.kind == ROOTED_TREE
    assert rooted.loop_is_diagonal

    cycle = relative_graph_classify(
        [by_label["[(12);1]"], by_label["[(23);0]"], by_label["[(13);0]"]], singletons, 3,
    )
    assert cycle.kind == UNICYCLE
    assert cycle.datum == 1

    split = relative_graph_classify([by_label["[(12);0]"]], singletons, 3)
    assert split.kind == NONE


@pytest.mark.parametrize(
    "fixture,perm,colors,expected",
    [
        ("g212", (1, 2), (0, 0), Fraction(1, 2)),
        ("d3", (1, 2, 3), (0, 0, 0), Fraction(1, 4)),
        ("g312", (1, 2), (1, 0), Fraction(1)),
        ("g333", (1, 3, 2), (1, 2, 0), Fraction(1)),
    ],
)
def test_aggregate_constant(request, fixture, perm, colors, expected):
    group = request.getfixturevalue(fixture)
    g = element(group, perm, colors)
    classification = classify_pqc(group, g)
    value = main_theorem_rhs(group, g)
    assert expected_aggregate_constant(group.spec, classification) == expected
    assert aggregate_constant(value.rgs_sum, value.rgs_count, classification) == expected


def test_aggregate_constant_needs_sets(g312):
    classification = classify_pqc(g312, g312.identity)
    with pytest.raises(NotPqcError):
        aggregate_constant(Fraction(0), 0, classification)


def test_dedekind_psi():
    assert [dedekind_psi(m) for m in (1, 2, 3, 4, 6)] == [1, 3, 4, 6, 12]


def test_grammian_histogram_of_b2(b2):
    histogram = grammian_histogram(enumerate_rgs(b2, b2.identity))
    assert sum(histogram.values()) == 4
    assert all(Fraction(key) != 0 for key in histogram)


def test_lattice_basis_generates(b2):
    def position(vector):
        target = tuple(Fraction(x) for x in vector)
        return next(
            r for r in range(b2.reflection_count)
            if tuple(Fraction(x) for x in b2.root_vector(r)) in (target, tuple(-x for x in target))
        )

    assert lattice_basis_generates(b2, [0, 1])
    assert not lattice_basis_generates(b2, [position((1, 0)), position((0, 1))])
    with pytest.raises(InvalidParameterError):
        lattice_basis_generates(b2, [0])

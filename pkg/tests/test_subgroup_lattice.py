import pytest
import sympy

from hurwitz_engine.services.parabolic import classify_pqc
from hurwitz_engine.services.real_orbit_group import build_group, preset_datum
from hurwitz_engine.services.subgroup_lattice import (
    Lattice,
    closure,
    count_tuples,
    enumerate_lattice,
    hurwitz_orbit,
    phi_polynomial,
    reduced_factorizations,
)
from hurwitz_engine.services.wreath_core import WreathElement
from hurwitz_engine.utils.errors import BudgetExceededError, InvalidParameterError

X = sympy.Symbol("X")


def test_s3_lattice_and_mobius(s3, lattices):
    lattice = lattices(s3)
    assert len(lattice) == 5
    assert lattice.mobius_of(s3.full_mask) == 1
    assert lattice.mobius_of(0) == 2
    assert sorted(lattice.mobius_of(1 << r) for r in range(3)) == [-1, -1, -1]
    assert lattice.subgroups[lattice.top].order == 6


def test_closure(s3, b2):
    assert closure(s3, [0, 1]).mask == s3.full_mask
    assert closure(s3, 0b001).order == 2
    # the two orthogonal reflections of B2 generate A1 x A1
    orthogonal = [r for r in range(1, 4) if b2.multiply(b2.reflections[0], b2.reflections[r]) == b2.multiply(b2.reflections[r], b2.reflections[0])]
    assert closure(b2, [0] + orthogonal).order == 4
    with pytest.raises(InvalidParameterError):
        closure(s3, [7])


def test_tuple_counts_in_s3(s3, lattices):
    lattice = lattices(s3)
    assert count_tuples(s3, s3.identity, 4) == 27
    assert lattice.count_tuples(s3.identity, 4) == 27
    assert lattice.count_full(s3.identity, 4) == 24
    three_cycle = s3.id_of_element(WreathElement((2, 3, 1), (0, 0, 0)))
    assert count_tuples(s3, three_cycle, 2) == 3
    assert lattice.count_full(three_cycle, 2) == 3


def test_count_tuples_outside_subgroup(s3, lattices):
    lattice = lattices(s3)
    three_cycle = s3.id_of_element(WreathElement((2, 3, 1), (0, 0, 0)))
    with pytest.raises(InvalidParameterError):
        lattice.count_tuples(three_cycle, 2, mask=0b001)
    with pytest.raises(InvalidParameterError):
        count_tuples(s3, three_cycle, 2, mask=0b001)
    assert count_tuples(s3, s3.identity, 2, mask=0b001) == 1


@pytest.mark.parametrize("fixture,expected", [("s3", 24), ("s4", 2880), ("b2", 48), ("g212", 48), ("a3", 2880)])
def test_full_count_of_identity(request, lattices, fixture, expected):
    group = request.getfixturevalue(fixture)
    lattice = lattices(group)
    ltr = lattice.full_reflection_length(group.identity, 12)
    assert ltr == 2 * group.rank
    assert lattice.count_full(group.identity, ltr) == expected


def test_full_counts_below_ltr_vanish(b2, lattices):
    lattice = lattices(b2)
    assert all(lattice.count_full(b2.identity, n) == 0 for n in range(4))


def test_full_series_within_top_matches_mobius(b2, lattices):
    lattice = lattices(b2)
    for g in range(b2.order):
        assert lattice.full_count_within(b2.full_mask, g, 4) == lattice.count_full(g, 4)


def test_budget(s4):
    with pytest.raises(BudgetExceededError):
        enumerate_lattice(s4, max_size=5)


def test_record_round_trip(b2, lattices):
    lattice = lattices(b2)
    again = Lattice.from_record(b2, lattice.to_record())
    assert again.mobius == lattice.mobius
    assert [h.mask for h in again.subgroups] == [h.mask for h in lattice.subgroups]
    assert again.count_full(b2.identity, 4) == 48


def test_hurwitz_orbit_of_four_cycle(s4):
    g = s4.id_of_element(WreathElement((2, 3, 4, 1), (0, 0, 0, 0)))
    reduced = reduced_factorizations(s4, g)
    assert len(reduced) == 16
    start = min(reduced)
    assert hurwitz_orbit(s4, start) == reduced


@pytest.mark.parametrize("fixture", ["s4", "b2", "b3", "g333"])
def test_hurwitz_action_is_transitive_on_quasi_coxeter_elements(request, fixture):
    group = request.getfixturevalue(fixture)
    checked = 0
    for cls in group.conjugacy_classes():
        g = cls[0]
        if group.lengths[g] != group.rank or not classify_pqc(group, g).is_pqc:
            continue
        reduced = reduced_factorizations(group, g)
        assert hurwitz_orbit(group, min(reduced)) == reduced
        checked += 1
    assert checked > 0


def test_hurwitz_orbit_budget(s4):
    g = s4.id_of_element(WreathElement((2, 3, 4, 1), (0, 0, 0, 0)))
    start = min(reduced_factorizations(s4, g))
    with pytest.raises(BudgetExceededError):
        hurwitz_orbit(s4, start, max_size=3)


def test_phi_of_a2(s3, lattices):
    phi = phi_polynomial(lattices(s3), s3.identity)
    assert phi.ltr == 4
    assert [int(c) for c in phi.coefficients] == [1, 4, 1]
    assert phi.value_at(1) == 6
    assert phi.kappas == {-3: 1, -1: -9, 0: 16, 1: -9, 3: 1}


def test_phi_of_b2(b2, lattices):
    phi = phi_polynomial(lattices(b2), b2.identity)
    assert phi.degree == 4
    assert [int(c) for c in phi.coefficients] == [1, 4, 6, 4, 1]
    assert phi.is_nonnegative()


def test_phi_type_b_relation(s3, b3, lattices):
    phi_s3 = phi_polynomial(lattices(s3), s3.identity).as_poly(X)
    phi_b3 = phi_polynomial(lattices(b3), b3.identity).as_poly(X)
    expected = phi_s3.as_expr().subs(X, X ** 2) * (X + 1) ** 4 * (1 + X + X ** 2) ** 2
    assert sympy.expand(phi_b3.as_expr() - expected) == 0
    assert phi_b3.eval(1) == 864


def test_phi_type_d_relation(s3, d3, lattices):
    phi_s3 = phi_polynomial(lattices(s3), s3.identity).as_poly(X).as_expr()
    phi_d3 = phi_polynomial(lattices(d3), d3.identity).as_poly(X)
    numerator = (X + 1) ** 4 * phi_s3.subs(X, X ** 2) - 2 ** 4 * X ** 3 * phi_s3
    assert sympy.expand(phi_d3.as_expr() * (X - 1) ** 2 - numerator) == 0
    assert phi_d3.all_coeffs() == [1, 6, 21, 40, 21, 6, 1]


def test_phi_needs_real_group(g312, lattices):
    with pytest.raises(InvalidParameterError):
        phi_polynomial(lattices(g312), g312.identity)


@pytest.mark.parametrize("fixture", ["s3", "s4", "b2", "b3", "g333"])
def test_tuple_counts_split_over_generated_subgroups(request, lattices, fixture):
    group = request.getfixturevalue(fixture)
    lattice = lattices(group)
    for cls in group.conjugacy_classes():
        g = cls[0]
        for length in range(1, 5):
            split = sum(
                lattice.full_count_within(h.mask, g, length)
                for h in lattice.subgroups
                if lattice.contains(h.mask, g)
            )
            assert split == lattice.count_tuples(g, length)


@pytest.mark.parametrize("fixture", ["s4", "a3", "b2", "b3"])
def test_real_counts_vanish_off_parity(request, lattices, fixture):
    group = request.getfixturevalue(fixture)
    series = lattices(group).tuple_series(group.full_mask, 5)
    for length, counts in enumerate(series):
        for g in range(group.order):
            if (length - group.lengths[g]) % 2:
                assert counts[g] == 0


@pytest.mark.parametrize(
    "name",
    [
        "A1", "A2", "A3", "B2", "B3", "G2", "I2(5)",
        pytest.param("A4", marks=pytest.mark.slow),
        pytest.param("D4", marks=pytest.mark.slow),
        pytest.param("H3", marks=pytest.mark.slow),
    ],
)
def test_phi_of_identity_is_nonnegative(lattices, name):
    group = build_group(preset_datum(name))
    phi = phi_polynomial(lattices(group), group.identity)
    assert phi.ltr == 2 * group.rank
    assert phi.is_nonnegative()


def test_phi_of_a2_coxeter_element(a2, lattices):
    phi = phi_polynomial(lattices(a2), a2.element_from_word([1, 2]))
    assert phi.ltr == 2
    assert phi.degree == 4
    assert [int(c) for c in phi.coefficients] == [1, 2, 3, 2, 1]

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hurwitz_engine.services.cyclo_gram import (
    CYCLOTOMIC,
    FLOAT,
    RATIONAL,
    CycloNum,
    bareiss_determinant,
    canonical_roots,
    gram_determinant,
    main_theorem_rhs,
    rational_from_float,
)
from hurwitz_engine.services.parabolic import canonical_factorization, classify_pqc
from hurwitz_engine.services.real_orbit_group import build_group, datum_from_vectors, preset_datum
from hurwitz_engine.services.subgroup_lattice import hurwitz_orbit, reduced_factorizations
from hurwitz_engine.services.wreath_core import GroupSpec, WreathElement, WreathGroup
from hurwitz_engine.utils.errors import InvalidParameterError, NotPqcError, NotWellGeneratedError


_PQC = {}
_RHS = {}


def pqc_elements(group):
    if id(group) not in _PQC:
        _PQC[id(group)] = [g for g in range(group.order) if classify_pqc(group, g).is_pqc]
    return _PQC[id(group)]


def rhs_of(group, g):
    if (id(group), g) not in _RHS:
        _RHS[id(group), g] = main_theorem_rhs(group, g).complex_rhs
    return _RHS[id(group), g]


def hurwitz_move(group, word, i):
    """(.., a, b, ..) -> (.., aba^-1, a, ..) at positions i, i + 1."""
    conj = group.reflection_conjugation
    word = list(word)
    word[i], word[i + 1] = conj[word[i]][word[i + 1]], word[i]
    return tuple(word)


def test_zeta_arithmetic():
    w = CycloNum.zeta(3)
    assert w * w * w == 1
    assert 1 + w + w * w == 0
    assert w.conj() == w * w
    assert (1 / (1 - w) + 1 / (1 - w.conj())).to_fraction() == 1


def test_zeta_exponent_wraps():
    assert CycloNum.zeta(5, 7) == CycloNum.zeta(5, 2)
    assert CycloNum.zeta(4, 2) == -1


def test_rational_values():
    half = CycloNum.from_rational(6, Fraction(1, 2))
    assert half.is_rational()
    assert (half + half).to_fraction() == 1
    assert not CycloNum.zeta(6).is_rational()
    with pytest.raises(InvalidParameterError):
        CycloNum.zeta(6).to_fraction()


def test_mixed_conductors_are_rejected():
    with pytest.raises(InvalidParameterError):
        CycloNum.zeta(3) + CycloNum.zeta(4)
    assert CycloNum.zeta(3) != CycloNum.zeta(4)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        CycloNum(5).inverse()


@pytest.mark.parametrize("m,k,trace", [(5, 1, -1), (6, 1, 1), (4, 2, -2), (7, 0, 6), (12, 3, 0)])
def test_trace(m, k, trace):
    assert CycloNum.zeta(m, k).trace() == trace


@given(st.integers(2, 12), st.integers(0, 30))
def test_complex_embedding(m, k):
    value = CycloNum.zeta(m, k) + 2
    expected = CycloNum.zeta(m).to_complex() ** k + 2
    assert abs(value.to_complex() - expected) < 1e-9


def test_bareiss_determinant():
    assert bareiss_determinant([]) == 1
    assert bareiss_determinant([[Fraction(2)]]) == 2
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([[Fraction(2), 1, 1], [1, Fraction(2), 1], [1, 1, Fraction(2)]]) == 4
    assert bareiss_determinant([[Fraction(1), 2], [Fraction(2), 4]]) == 0


def test_bareiss_over_cyclotomics():
    w = CycloNum.zeta(3)
    one = CycloNum.from_rational(3, 1)
    det = bareiss_determinant([[one, w], [w * w, one]], one=one)
    assert det == 0


def test_canonical_root_fields(g312, b2):
    assert canonical_roots(g312).field_kind == CYCLOTOMIC
    assert canonical_roots(b2).field_kind == RATIONAL
    assert canonical_roots(build_group(preset_datum("H3"))).field_kind == FLOAT


@pytest.mark.parametrize("fixture", ["g312", "g333", "b2"])
def test_canonical_pairing_of_each_reflection(request, fixture):
    group = request.getfixturevalue(fixture)
    roots = canonical_roots(group)
    for r in range(group.reflection_count):
        value = roots.pairing(roots.roots[r], roots.coroots[r])
        assert value != 0
        if group.element_order(group.reflections[r]) == 2:
            assert value == 2


def test_empty_family_has_determinant_one(g312):
    assert gram_determinant(canonical_roots(g312), []) == 1


@given(st.data())
def test_grammian_invariant_under_root_scaling(data):
    group = WreathGroup(GroupSpec(3, 1, 2))
    roots = canonical_roots(group)
    positions = data.draw(st.lists(st.integers(0, group.reflection_count - 1), min_size=1, max_size=2, unique=True))
    target = data.draw(st.sampled_from(positions))
    k = data.draw(st.integers(0, 2))
    scale = data.draw(st.sampled_from([1, 2, 3])) * CycloNum.zeta(3, k) + 1
    scaled = roots.with_scaled_root(target, scale)
    assert gram_determinant(scaled, positions) == gram_determinant(roots, positions)


@given(st.data())
def test_grammian_unchanged_by_hurwitz_moves(g312, g333, a3, b2, data):
    group = data.draw(st.sampled_from([g312, g333, a3, b2]))
    candidates = [g for g in pqc_elements(group) if group.lengths[g] >= 2]
    g = data.draw(st.sampled_from(candidates))
    roots = canonical_roots(group)
    word = tuple(canonical_factorization(group, g))
    before = gram_determinant(roots, list(word))
    moves = data.draw(st.lists(st.integers(0, len(word) - 2), max_size=8))
    for i in moves:
        word = hurwitz_move(group, word, i)
    assert group.product_of_reflections(word) == g
    assert gram_determinant(roots, list(word)) == before


@given(st.data())
def test_grammian_independent_of_reduced_factorization(g312, g333, a3, b2, data):
    group = data.draw(st.sampled_from([g312, g333, a3, b2]))
    g = data.draw(st.sampled_from(pqc_elements(group)))
    roots = canonical_roots(group)
    word = data.draw(st.sampled_from(sorted(reduced_factorizations(group, g))))
    assert gram_determinant(roots, list(word)) == gram_determinant(roots, canonical_factorization(group, g))


@pytest.mark.parametrize("fixture", ["g312", "g333", "a3", "b2"])
def test_grammian_constant_on_hurwitz_orbits(request, fixture):
    group = request.getfixturevalue(fixture)
    roots = canonical_roots(group)
    for cls in group.conjugacy_classes():
        g = cls[0]
        if group.lengths[g] < 2 or not classify_pqc(group, g).is_pqc:
            continue
        start = tuple(canonical_factorization(group, g))
        values = {str(gram_determinant(roots, list(word))) for word in hurwitz_orbit(group, start)}
        assert len(values) == 1


@pytest.mark.parametrize(
    "fixture",
    [
        "s3", "s4", "g212", "d3", "g312", "g333", "g412", "g213", "a2", "a3", "b2", "b3",
        pytest.param("g443", marks=pytest.mark.slow),
        pytest.param("g224", marks=pytest.mark.slow),
    ],
)
def test_main_theorem_matches_count(request, lattices, fixture):
    group = request.getfixturevalue(fixture)
    lattice = lattices(group)
    for cls in group.conjugacy_classes():
        g = cls[0]
        if not classify_pqc(group, g).is_pqc:
            continue
        value = main_theorem_rhs(group, g)
        assert value.complex_rhs == lattice.count_full(g, value.ltr)
        if value.weyl_rhs is not None:
            assert value.weyl_rhs == value.complex_rhs


@given(st.data())
def test_main_theorem_is_conjugation_invariant(g333, data):
    g = data.draw(st.sampled_from(pqc_elements(g333)))
    u = data.draw(st.integers(0, g333.order - 1))
    assert main_theorem_rhs(g333, g333.conjugate(u, g)).complex_rhs == rhs_of(g333, g)


def test_main_theorem_on_identity_of_b2(b2):
    value = main_theorem_rhs(b2, b2.identity)
    assert value.ltr == 4
    assert value.rgs_count == 4
    assert value.complex_rhs == 48
    assert value.weyl_rhs == 48


def test_main_theorem_rejects(g333):
    bad = g333.id_of_element(WreathElement((1, 2, 3), (1, 1, 1)))
    with pytest.raises(NotPqcError):
        main_theorem_rhs(g333, bad)
    group = WreathGroup(GroupSpec(4, 2, 2))
    with pytest.raises(NotWellGeneratedError):
        main_theorem_rhs(group, group.identity)


def test_rational_from_float():
    assert rational_from_float(0.3333333333, 1e-6) == Fraction(1, 3)
    with pytest.raises(InvalidParameterError):
        rational_from_float(2 ** 0.5, 1e-15)


@pytest.mark.slow
def test_h3_identity():
    h3 = build_group(preset_datum("H3"))
    value = main_theorem_rhs(h3, h3.identity)
    assert value.complex_rhs == 172800
    assert sorted(value.key_histogram.values()) == [100, 100, 180]


@pytest.mark.parametrize(
    "product",
    [
        lambda: build_group(datum_from_vectors([[1, 1], [1, -1]], name="A1xA1")),
        lambda: WreathGroup(GroupSpec(2, 2, 2)),
    ],
    ids=["orthogonal_roots_in_b2", "g222"],
)
def test_rgs_sum_is_multiplicative_over_direct_products(product):
    a1 = build_group(preset_datum("A1"))
    at_identity = main_theorem_rhs(a1, a1.identity).rgs_sum
    at_reflection = main_theorem_rhs(a1, a1.reflections[0]).rgs_sum
    assert (at_identity, at_reflection) == (Fraction(1, 2), 1)

    group = product()
    assert group.order == 4
    for g in range(group.order):
        lr = group.lengths[g]
        expected = at_identity ** (2 - lr) * at_reflection ** lr
        assert main_theorem_rhs(group, g).rgs_sum == expected

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphspine.errors import NotStrictlyShorter
from graphspine.cycles import all_systoles, minimum_cycles, shortest_cycle_above
from graphspine.deformation import (
    deformation_kernel,
    kernel_basis,
    local_deformation_dimension,
    rational_rank,
    systole_equality_system,
    vcd_witness,
)

from .strategies import outer_graphs, random_relabeling


def test_system_theta(theta):
    system = systole_equality_system(theta)
    assert len(system) == 3  # two difference rows + volume row
    assert system[-1] == (Fraction(1),) * 3
    assert rational_rank(system[:-1]) == 2
    assert rational_rank(system) == 3


def test_system_rose(rose2):
    system = systole_equality_system(rose2)
    assert len(system) == 2
    assert system[0] in ((Fraction(1), Fraction(-1)), (Fraction(-1), Fraction(1)))
    assert rational_rank(system) == 2


def test_system_single_systole(dumbbell_uneq):
    system = systole_equality_system(dumbbell_uneq)
    assert len(system) == 1  # just the volume row
    assert system[0] == (Fraction(1),) * 3


def test_dimension_theta(theta):
    rec = local_deformation_dimension(theta)
    assert (rec.E, rec.F, rec.rank_diff, rec.dim) == (3, 3, 2, 0)
    assert rec.has_positive_direction


def test_dimension_k4(k4):
    rec = local_deformation_dimension(k4)
    assert (rec.E, rec.F, rec.rank_diff, rec.dim) == (6, 4, 3, 2)
    assert rec.dim >= rec.lower_bound == 2


def test_vcd_examples(theta, k4):
    w = vcd_witness(theta)
    assert (w.dim, w.vcd, w.exceeds) == (0, 1, False)
    w2 = vcd_witness(k4)
    assert (w2.dim, w2.vcd, w2.exceeds) == (2, 3, False)


def test_provided_family_must_be_the_full_minimum_set(k4):
    systoles = all_systoles(k4)
    rec = local_deformation_dimension(k4, systoles)
    assert rec.F == 4
    with pytest.raises(NotStrictlyShorter):
        local_deformation_dimension(k4, systoles[:-1])  # one minimum cycle missing


def test_provided_family_rejects_longer_cycles(k4):
    from graphspine.cycles import cycles_up_to_length

    squares = [c for c in cycles_up_to_length(k4, Fraction(2, 3)) if len(c) == 4]
    with pytest.raises(NotStrictlyShorter):
        local_deformation_dimension(k4, squares)


def _kernel_step_preserves_systoles(g, rng):
    kernel = deformation_kernel(g)
    if not kernel:
        return
    girth, mins = minimum_cycles(g)
    above = shortest_cycle_above(g, None, girth)
    gap = above[0] - girth if above is not None else girth
    base = [g.lengths[e.id] for e in g.edges]
    for _ in range(10):
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in kernel]
        direction = [sum(c * vec[i] for c, vec in zip(coeffs, kernel))
                     for i in range(g.num_edges)]
        biggest = max((abs(x) for x in direction), default=Fraction(0))
        if biggest == 0:
            continue
        room = min(
            min(x for x in base) / 2,
            gap / (4 * g.num_edges),
        )
        eps = room / biggest
        new_lengths = {
            e.id: base[i] + eps * direction[i] for i, e in enumerate(g.edges)
        }
        assert all(v > 0 for v in new_lengths.values())
        perturbed = g.with_lengths(new_lengths)
        assert set(all_systoles(perturbed)) == set(mins)


def test_kernel_perturbation_preserves_systoles_k4(k4):
    _kernel_step_preserves_systoles(k4, random.Random(99))


@given(outer_graphs(rank_lo=2, rank_hi=4))
@settings(max_examples=25, deadline=None)
def test_kernel_perturbation_random(g):
    _kernel_step_preserves_systoles(g, random.Random(5))


@given(outer_graphs(rank_lo=2, rank_hi=4))
@settings(max_examples=25, deadline=None)
def test_dim_lower_bound_and_invariance(g):
    rec = local_deformation_dimension(g)
    assert rec.dim >= rec.lower_bound
    mangled, _, _ = random_relabeling(random.Random(3), g)
    rec2 = local_deformation_dimension(mangled)
    assert rec.dim == rec2.dim
    assert rec.rank_diff == rec2.rank_diff


@given(
    st.lists(
        st.lists(st.integers(min_value=-6, max_value=6), min_size=4, max_size=4),
        min_size=1, max_size=5),
)
@settings(max_examples=80, deadline=None)
def test_rational_rank_and_kernel_match_sympy(rows):
    import sympy

    fr = [[Fraction(x) for x in row] for row in rows]
    m = sympy.Matrix(rows)
    assert rational_rank(fr) == m.rank()
    kernel = kernel_basis(fr, 4)
    assert len(kernel) == 4 - m.rank()
    for vec in kernel:
        assert all(sum(r * x for r, x in zip(row, vec)) == 0 for row in fr)

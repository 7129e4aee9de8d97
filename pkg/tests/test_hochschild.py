from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import center_subalgebra, unital_algebras
from ncgeom.algebra import dual_numbers, ideal_closure, quotient_algebra, regular_bimodule
from ncgeom.derivations import derivations, inner_derivations, killing_space, preserving_space
from ncgeom.errors import CapExceeded, ConstraintViolation
from ncgeom.exactlin import sparse
from ncgeom.hochschild import (
    Cochain,
    chi_map,
    chi_setup,
    chi_square_holds,
    coboundaries,
    cocycles,
    cohomology,
    constrained,
    delta,
    delta_sparse,
    normalized_relative,
    ordinary,
    relative,
)


def proper_ideal(A):
    """An ideal generated by the last basis vector, or 0 if that is everything."""
    C = ideal_closure(A, [A.basis()[-1]])
    return C if C.is_proper() else ideal_closure(A, [])


def test_delta_of_inner_cochain(m2):
    # the 0-cochain m gives the derivation a -> am - ma
    f = Cochain.from_coords(m2, regular_bimodule(m2), 0, m2.element("e12"))
    df = delta(f)
    assert df.degree == 1
    assert list(df(m2.element("e21"))) == list(m2.element("e22 - e11"))


def test_matrix_algebra_cohomology(m2):
    assert [cohomology(m2, n=n).dim for n in range(3)] == [1, 0, 0]


def test_cap_exceeded(m2):
    with pytest.raises(CapExceeded):
        cohomology(m2, n=4, cap=3)


def test_degree_one_identifications(m2, dual_m2):
    for A in (m2, dual_numbers(), dual_m2):
        V = ordinary(A)
        assert cocycles(V, 1) == derivations(A).space
        assert coboundaries(V, 1) == inner_derivations(A).space


def test_relative_to_center(m2, dual_m2):
    for A in (m2, dual_m2):
        Z = center_subalgebra(A)
        V = relative(A, Z)
        assert cocycles(V, 1) == killing_space(derivations(A), Z.space).space
    assert cohomology(m2, n=1, variant=relative(m2, center_subalgebra(m2))).dim == 0


def test_normalized_matches_relative(m2):
    Z = center_subalgebra(m2)
    for n in range(3):
        assert cohomology(m2, n=n, variant=normalized_relative(m2, Z)).dim == cohomology(
            m2, n=n, variant=relative(m2, Z)
        ).dim


def test_constrained_dual_numbers():
    A = dual_numbers(("t",))
    C = ideal_closure(A, [A.element("t")])
    assert cohomology(A, n=1, variant=constrained(A, C)).dim == 1


def test_constrained_point_ideal(f3m2, point_ideal):
    V = constrained(f3m2, point_ideal)
    assert cocycles(V, 1) == preserving_space(derivations(f3m2), point_ideal.space).space
    Q = quotient_algebra(f3m2, point_ideal)
    data = chi_setup(V, Q)
    rng = np.random.default_rng(7)
    for n in (0, 1):
        for _ in range(3):
            f = V.random_element(n, rng)
            assert chi_square_holds(f, V, Q, data)
            assert chi_map(f, V, Q, data).degree == n


def test_constrained_requires_ideal_inside_annihilator(f3m2, point_ideal):
    A = f3m2
    # N = p1⊗M(2) is a sub-bimodule whose annihilator ideal misses C
    N = ideal_closure(A, [A.element("p1⊗e11")]).space
    with pytest.raises(ConstraintViolation):
        constrained(A, point_ideal, regular_bimodule(A), N)


def test_second_cohomology_of_point_algebra(f3m2):
    assert cohomology(f3m2, n=2).dim == 0


@given(unital_algebras(), st.integers(0, 2), st.integers(0, 2**32 - 1))
def test_delta_squared_zero_all_variants(A, n, seed):
    rng = np.random.default_rng(seed)
    Z = center_subalgebra(A)
    C = proper_ideal(A)
    for V in (ordinary(A), relative(A, Z), normalized_relative(A, Z), constrained(A, C)):
        f = V.random_element(n, rng)
        df = delta(f)
        assert delta(df).is_zero()
        # δ maps the variant complex to itself
        assert V.contains(df)


@given(unital_algebras(), st.integers(0, 2), st.integers(0, 2**32 - 1))
def test_sparse_and_dense_delta_agree(A, n, seed):
    rng = np.random.default_rng(seed)
    f = ordinary(A).random_element(n, rng)
    assert sparse(delta(f).coords()) == delta_sparse(A, regular_bimodule(A), n, sparse(f.coords()))


@given(unital_algebras())
def test_cocycles_contain_coboundaries(A):
    V = ordinary(A)
    for n in (0, 1):
        assert coboundaries(V, n).is_subspace_of(cocycles(V, n))
    assert cohomology(A, n=0).dim == A.center().dim

from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ncgeom.algebra import (
    change_basis,
    cyclic_group_algebra,
    direct_sum,
    dual_number_extension,
    dual_numbers,
    function_algebra,
    ideal_closure,
    matrix_algebra,
    subalgebra,
    tensor_product,
)
from ncgeom.cyclotomic import field

# derandomized so that repeated runs see the same examples
settings.register_profile(
    "ncgeom",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("ncgeom")


@lru_cache(maxsize=None)
def base_algebra(name: str):
    """Small unital algebras (dim <= 4) used by the property tests."""
    if name == "C":
        return function_algebra(1)
    if name == "C2":
        return function_algebra(2)
    if name == "C3":
        return function_algebra(3)
    if name == "C4":
        return function_algebra(4)
    if name == "M2":
        return matrix_algebra(2)
    if name == "dual1":
        return dual_numbers(("s",))
    if name == "dual2":
        return dual_numbers(("s", "t"))
    if name == "dual3":
        return dual_numbers(("s", "t", "u"))
    if name == "Z2":
        return cyclic_group_algebra(2)
    if name == "Z3":
        return cyclic_group_algebra(3, field(3))
    if name == "upper":
        M = matrix_algebra(2)
        return subalgebra(M, [M.element(x) for x in ("e11", "e12", "e22")], name="upper").algebra
    if name == "trunc3":
        # C[x]/x^3 inside M(3): span{1, N, N^2}
        M = matrix_algebra(3)
        return subalgebra(M, [M.one(), M.element("e12 + e23"), M.element("e13")], name="trunc3").algebra
    if name == "C+dual1":
        return direct_sum(function_algebra(1), dual_numbers(("s",)))
    raise KeyError(name)


BASE_NAMES = ["C", "C2", "C3", "C4", "M2", "dual1", "dual2", "dual3", "Z2", "Z3", "upper", "trunc3", "C+dual1"]


@st.composite
def unital_algebras(draw, names=BASE_NAMES):
    """A base algebra transported by a random unimodular change of basis."""
    A = base_algebra(draw(st.sampled_from(names)))
    n = A.dim
    entries = st.integers(-2, 2)
    L = np.identity(n, dtype=object)
    U = np.identity(n, dtype=object)
    for i in range(n):
        for j in range(n):
            if i > j:
                L[i, j] = draw(entries)
            elif i < j:
                U[i, j] = draw(entries)
    P = np.vectorize(A.field)(L.dot(U))
    return change_basis(A, P, name=A.name + "~")


@pytest.fixture(scope="session")
def m2():
    return matrix_algebra(2)


@pytest.fixture(scope="session")
def m3():
    return matrix_algebra(3)


@pytest.fixture(scope="session")
def f3m2():
    return tensor_product(function_algebra(3), matrix_algebra(2))


@pytest.fixture(scope="session")
def point_ideal(f3m2):
    A = f3m2
    return ideal_closure(A, [A.element("p2⊗e11"), A.element("p3⊗e11")])


@pytest.fixture(scope="session")
def dual_m2():
    return dual_number_extension(matrix_algebra(2))


@pytest.fixture(scope="session")
def m2m2():
    return direct_sum(matrix_algebra(2), matrix_algebra(2))


@pytest.fixture(scope="session")
def diagonal(m2m2):
    S = m2m2
    return subalgebra(S, [S.basis_vector(i) + S.basis_vector(i + 4) for i in range(4)], name="diag")


def center_subalgebra(A):
    return subalgebra(A, A.center().dense_basis(), name="Z")


# acceptance bookkeeping: one PASS/FAIL line per criterion in the terminal summary
_CRITERIA_KEY = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Call ``criterion(n, check)``; the outcome is recorded and re-raised."""
    log = request.config.stash.setdefault(_CRITERIA_KEY, {})

    def record(n: int, check):
        try:
            check()
        except BaseException:
            log[n] = "FAIL"
            print(f"criterion {n}: FAIL")
            raise
        log[n] = "PASS"
        print(f"criterion {n}: PASS")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_CRITERIA_KEY, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(log):
        terminalreporter.write_line(f"criterion {n}: {log[n]}")

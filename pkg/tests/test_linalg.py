from fractions import Fraction

import pytest
from flint import fmpq, fmpq_mat
from hypothesis import given, settings
from hypothesis import strategies as st

from currentcoh.linalg import (
    StructureError,
    complement_representatives,
    format_q,
    image_basis,
    image_of,
    join,
    kernel_basis,
    matrix,
    meet,
    preimage,
    quotient_map,
    rank,
    solve,
    span,
    to_q,
    zeros,
)

small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(small, min_size=r * c, max_size=r * c))
    return fmpq_mat(r, c, vals)


@st.composite
def subspace_pairs(draw, n=5):
    def sub():
        k = draw(st.integers(0, 4))
        return span([draw(st.lists(small, min_size=n, max_size=n)) for _ in range(k)], n)
    return sub(), sub(), sub()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel_basis(m).dim == m.ncols()
    assert image_basis(m).dim == rank(m)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_vectors_are_killed(m):
    for v in kernel_basis(m).rows():
        assert not any((m * fmpq_mat(len(v), 1, v)).entries())


@settings(max_examples=60, deadline=None)
@given(subspace_pairs())
def test_modular_law(triple):
    a, b, c = triple
    # a ⊆ c implies a + (b ∩ c) = (a + b) ∩ c
    a = meet(a, c)
    assert join(a, meet(b, c)) == meet(join(a, b), c)


@settings(max_examples=60, deadline=None)
@given(subspace_pairs())
def test_dimension_formula(triple):
    a, b, _ = triple
    assert join(a, b).dim + meet(a, b).dim == a.dim + b.dim


@settings(max_examples=60, deadline=None)
@given(subspace_pairs())
def test_quotient_kernel_is_subspace(triple):
    s = triple[0]
    q = quotient_map(5, s)
    assert kernel_basis(q) == s
    assert q.rows == 5 - s.dim


@settings(max_examples=40, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent(m, x):
    x = x[: m.ncols()]
    b = m * fmpq_mat(len(x), 1, x)
    sol = solve(m, b)
    assert sol is not None and m * sol == b


@settings(max_examples=40, deadline=None)
@given(subspace_pairs(), matrices(5, 5))
def test_preimage_of_image(triple, m):
    s = triple[0]
    if m.ncols() != 5:
        return
    assert s.is_subspace_of(preimage(image_of(s, m), m))


def test_canonical_form_is_representation_independent():
    a = span([[1, 2, 3], [0, 1, 1]], 3)
    b = span([[1, 3, 4], [2, 5, 7], [1, 1, 2]], 3)
    assert a == b and hash(a) == hash(b)


def test_solve_inconsistent():
    assert solve(matrix([[1, 0], [1, 0]]), fmpq_mat(2, 1, [1, 2])) is None


def test_complement_representatives_span_quotient():
    big = span([[1, 0, 0], [0, 1, 0]], 3)
    small = span([[1, 1, 0]], 3)
    reps = complement_representatives(big, small)
    assert len(reps) == 1
    assert join(small, span(reps, 3)) == big


def test_empty_matrices():
    assert rank(zeros(0, 3)) == 0
    assert kernel_basis(zeros(0, 3)).dim == 3
    assert image_basis(zeros(2, 0)).dim == 0


def test_scalars():
    assert to_q("3/6") == fmpq(1, 2)
    assert to_q(Fraction(-4, 2)) == fmpq(-2)
    assert format_q(fmpq(4, 2)) == "2" and format_q(fmpq(-1, 3)) == "-1/3"
    with pytest.raises(TypeError):
        to_q(0.5)


def test_ambient_mismatch():
    with pytest.raises(StructureError):
        meet(span([[1, 0]], 2), span([[1, 0, 0]], 3))

import pytest
from flint import fmpq_mat

from currentcoh import catalog
from currentcoh.forms import alpha_tilde
from currentcoh.lie import (
    LieValidationError,
    boundary_partial,
    bracket_map,
    ce_differential,
    cochain_dim,
    cohomology,
    cohomology_table,
    derived_subalgebra,
    center,
    homology_h2,
    make_module,
    validate_lie,
    wedge_basis,
)
from currentcoh.linalg import is_zero

KS = ["abelian:2", "abelian:3", "heisenberg", "oscillator", "sl2", "pelc:3", "pelc:6",
      "cotangent:heisenberg"]


def lie(name):
    return catalog.lookup(name).algebra


def test_jacobi_violation_is_rejected():
    with pytest.raises(LieValidationError) as err:
        validate_lie(["a", "b", "c"], {(0, 1): {0: 1}, (0, 2): {2: 1}, (1, 2): {0: 1}})
    assert err.value.witness == (0, 1, 2)


def test_antisymmetric_folding_and_conflicts():
    a = validate_lie(2, {(1, 0): {1: 1}})
    assert a.bracket(0, 1) == {1: -1}
    with pytest.raises(LieValidationError):
        validate_lie(2, {(0, 1): {1: 1}, (1, 0): {1: 1}})
    with pytest.raises(LieValidationError):
        validate_lie(2, {(0, 0): {1: 1}})
    with pytest.raises(LieValidationError):
        validate_lie(2, {(0, 1): {5: 1}})


@pytest.mark.parametrize("name", KS)
@pytest.mark.parametrize("kind", ["trivial", "adjoint", "coadjoint", "sym2"])
def test_d_squared_vanishes(name, kind):
    k = lie(name)
    mod = make_module(k, kind)
    for p in range(k.dim):
        d0, d1 = ce_differential(k, mod, p), ce_differential(k, mod, p + 1)
        if d0.rows and d1.rows:
            assert is_zero(d1.mat * d0.mat)


@pytest.mark.parametrize("name", [n for n in KS if not n.startswith("abelian")])
def test_euler_characteristic_vanishes(name):
    h = cohomology_table(lie(name))["H"]
    assert sum((-1) ** p * d for p, d in enumerate(h)) == 0


def test_cochain_dims_are_binomial():
    k = lie("oscillator")
    assert [cochain_dim(k, make_module(k, "coadjoint"), p) for p in range(5)] == [4, 16, 24, 16, 4]


@pytest.mark.parametrize("name,z2,b2,h2", [("abelian:3", 3, 0, 3), ("heisenberg", 2, 0, 2),
                                           ("oscillator", 3, 3, 0), ("sl2", 0, 0, 0)])
def test_homology_h2(name, z2, b2, h2):
    h = homology_h2(lie(name))
    assert (h.cycles.dim, h.boundaries.dim, h.dim) == (z2, b2, h2)


@pytest.mark.parametrize("name", KS)
def test_h2_and_homology_dims_agree(name):
    k = lie(name)
    assert homology_h2(k).dim == cohomology(k, make_module(k, "trivial"), 2).dim


@pytest.mark.parametrize("name", KS)
def test_boundary_lands_in_cycles(name):
    k = lie(name)
    assert is_zero(bracket_map(k).mat * boundary_partial(k).mat) if k.dim >= 3 else True


def test_heisenberg_center_and_derived():
    h = lie("heisenberg")
    assert derived_subalgebra(h).rows() == [[0, 0, 1]]
    assert center(h).rows() == [[0, 0, 1]]


def test_representatives_are_deterministic():
    a = cohomology(lie("heisenberg"), make_module(lie("heisenberg"), "trivial"), 2)
    b = cohomology(catalog.heisenberg(), make_module(catalog.heisenberg(), "trivial"), 2)
    assert a.representatives == b.representatives


@pytest.mark.parametrize("name", ["heisenberg", "oscillator", "sl2", "pelc:6"])
def test_coadjoint_transfer_of_cocycles(name):
    # ω is a 2-cocycle iff its transfer to C¹(k, k*) is a 1-cocycle
    k = lie(name)
    triv, cod = make_module(k, "trivial"), make_module(k, "coadjoint")
    a2 = alpha_tilde(k, 2)
    d2, d1 = ce_differential(k, triv, 2).mat, ce_differential(k, cod, 1).mat
    n2 = len(wedge_basis(k.dim, 2)[0])
    for i in range(n2):
        e = fmpq_mat(n2, 1, [1 if j == i else 0 for j in range(n2)])
        assert is_zero(d2 * e) == is_zero(d1 * a2 * e)
    z = cohomology(k, triv, 2).cocycles
    for r in z.rows():
        assert is_zero(d1 * a2 * fmpq_mat(n2, 1, r))

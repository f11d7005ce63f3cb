import pytest

from currentcoh import catalog
from currentcoh import comm as ca
from currentcoh.comm import CommValidationError, validate_comm
from currentcoh.linalg import full_space, image_basis, image_of, kernel_basis

AS = list(catalog.BATTERY_A)

EXPECTED = {  # dim J_A², Ω¹, d_A(A), T, T0, I_A, HC1
    "field": (0, 0, 0, 0, 0, 0, 0),
    "dual_numbers": (1, 1, 1, 1, 0, 1, 0),
    "trunc_poly:3": (4, 2, 2, 3, 1, 3, 0),
    "trunc_poly:4": (9, 3, 3, 6, 3, 6, 0),
    "function_alg:2": (2, 0, 0, 1, 1, 1, 0),
    "function_alg:3": (6, 0, 0, 3, 3, 3, 0),
    "group_alg_z2": (2, 0, 0, 1, 1, 1, 0),
}


def alg(name):
    return catalog.lookup(name).algebra


def test_validation_errors():
    with pytest.raises(CommValidationError):
        validate_comm(2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 1): {1: 1}}, [0, 1])
    with pytest.raises(CommValidationError):
        validate_comm(2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {0: 1}}, [1, 0])


@pytest.mark.parametrize("name", AS)
def test_invariants(name):
    A = alg(name)
    n = A.dim
    ja, ja2 = ca.ja_and_square(A)
    km = ca.kaehler(A)
    t, t0 = ca.t_spaces(A)
    cyc = ca.i_a_and_hc1(A)
    assert ja.dim == n * n - n
    got = (ja2.dim, km.dim, km.exact_image().dim, t.dim, t0.dim, cyc.ia.dim, cyc.hc1_dim)
    assert got == EXPECTED[name]


@pytest.mark.parametrize("name", AS)
def test_gamma_a_image_and_kernel(name):
    A = alg(name)
    g = ca.gamma_A(A)
    _, t0 = ca.t_spaces(A)
    assert image_basis(g) == full_space(ca.kaehler(A).dim)
    assert kernel_basis(g) == t0


@pytest.mark.parametrize("name", AS)
def test_hochschild_matches_kaehler(name):
    A = alg(name)
    hh = ca.hochschild_h1(A)
    assert hh.dim == ca.kaehler(A).dim
    _, ja2 = ca.ja_and_square(A)
    assert image_of(hh.b1, ca.projection_p(A)) == ja2


@pytest.mark.parametrize("name", AS)
def test_cyclic_cocycles_kill_t(name):
    A = alg(name)
    t, _ = ca.t_spaces(A)
    m = A.dim * (A.dim - 1) // 2
    from currentcoh.linalg import annihilator
    for f in annihilator(t).rows():
        assert ca.is_cyclic_cocycle(A, f)
    for r in range(m):
        f = [1 if i == r else 0 for i in range(m)]
        kills = all(sum(a * b for a, b in zip(f, v)) == 0 for v in t.rows())
        assert ca.is_cyclic_cocycle(A, f) == kills


def test_trunc_poly_2_is_dual_numbers():
    a, b = catalog.trunc_poly(2), catalog.dual_numbers()
    assert a.table() == b.table() and a.unit == b.unit


def test_dual_numbers_gamma():
    A = alg("dual_numbers")
    km = ca.kaehler(A)
    assert ca.gamma_A(A).mat.entries() == km.d(A.e(1))

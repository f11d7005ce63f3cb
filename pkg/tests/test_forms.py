import pytest

from currentcoh import catalog
from currentcoh import forms as F
from currentcoh.lie import make_module
from currentcoh.linalg import InternalError, StructureError

KS = ["abelian:2", "heisenberg", "oscillator", "sl2", "pelc:3", "pelc:6", "cotangent:heisenberg"]


def lie(name):
    return catalog.lookup(name).algebra


def test_oscillator_forms():
    k = lie("oscillator")
    inv = F.sym2_invariants(k)
    fm = catalog.oscillator_forms()
    assert inv.dim == 2
    assert F.is_invariant(k, fm["kappa1"]) and F.is_invariant(k, fm["kappa2"])
    assert inv.invariants == F.sym2_invariants(k).invariants
    assert not any(F.koszul(k, fm["kappa1"]))
    g2 = F.koszul(k, fm["kappa2"])
    assert any(g2)
    ef = F.exact_forms(k)
    assert ef.b3_gamma.contains(g2)
    assert ef.exact == inv.invariants
    assert ef.z3_gamma.dim == ef.b3_gamma.dim == 1


@pytest.mark.parametrize("name,dim", [("abelian:2", 3), ("sl2", 1), ("heisenberg", 3)])
def test_invariant_dims(name, dim):
    assert F.sym2_invariants(lie(name)).dim == dim


def test_sl2_killing():
    k = lie("sl2")
    kf = F.killing_form(k)
    assert F.is_invariant(k, kf)
    ef = F.exact_forms(k)
    assert ef.exact.dim == 0 and ef.z3_gamma.dim == 1
    assert F.primitive(k, kf) is None


def test_non_invariant_rejected():
    k = lie("oscillator")
    bad = catalog.symmetric_matrix(4, {(0, 0): 1})
    assert not F.is_invariant(k, bad)
    with pytest.raises(StructureError):
        F.koszul(k, bad)


@pytest.mark.parametrize("name", KS)
def test_transfer_sequence_exact(name):
    rep = F.transfer_sequence(lie(name))
    assert rep.ok, rep.exact_at


def test_transfer_dims_oscillator():
    d = F.transfer_sequence(lie("oscillator")).dims
    assert (d["H2(k)"], d["H1(k,k*)"], d["Sym2(k)^k"], d["H3(k)"]) == (0, 2, 2, 1)


@pytest.mark.parametrize("name", KS)
def test_exact_forms_count(name):
    k = lie(name)
    ef = F.exact_forms(k)
    d = F.transfer_sequence(k).dims
    assert ef.exact.dim == d["H1(k,k*)"] - d["H2(k)"]
    assert ef.im_gamma_dim == ef.z3_gamma.dim - ef.b3_gamma.dim


@pytest.mark.parametrize("name", ["heisenberg", "oscillator", "sl2"])
@pytest.mark.parametrize("kind", ["trivial", "coadjoint"])
def test_homotopy_identity(name, kind):
    k = lie(name)
    mod = make_module(k, kind)
    for p in range(3):
        for q in range(1, 4 - p):
            if p + q <= k.dim:
                assert F.homotopy_identity(k, mod, p, q)


def test_centroid():
    k = lie("oscillator")
    rep = F.centroid(k, catalog.oscillator_forms()["kappa2"])
    assert rep.cent_red == 1 and rep.cent_plus == 2
    s = F.centroid(lie("sl2"), F.killing_form(lie("sl2")))
    assert (s.cent, s.cent0, s.cent_red) == (1, 0, 1)
    a = F.centroid(lie("abelian:2"))
    assert (a.cent, a.cent0, a.cent_red) == (4, 4, 0)


def test_centroid_rejects_degenerate():
    with pytest.raises(StructureError):
        F.centroid(lie("oscillator"), catalog.oscillator_forms()["kappa1"])


@pytest.mark.parametrize("name,common", [("sl2", 0), ("abelian:2", 0), ("oscillator", 0)])
def test_radical_probe(name, common):
    rep = F.radical_probe(lie(name))
    assert rep.common_radical_dim == common and rep.equality


@pytest.mark.parametrize("base", catalog.BATTERY_K)
def test_cotangent_pairing_is_exact(base):
    b = lie(base)
    rep = F.twisted_report(catalog.cotangent(b), b.dim, True)
    assert rep.kappa_invariant and rep.koszul_exact
    if rep.observed_scalar is not None:
        assert rep.observed_scalar == -1


def test_twisted_by_closed_three_form():
    s = lie("sl2")
    ext = catalog.cotangent(s, {(0, 1, 2): 1})
    rep = F.twisted_report(ext, 3, True)
    assert rep.kappa_invariant and rep.koszul_exact is False


def test_invariance_iff_alternating():
    h = lie("heisenberg")
    cod = make_module(h, "coadjoint")
    from currentcoh.lie import ce_differential, wedge_basis
    from flint import fmpq_mat
    d1 = ce_differential(h, cod, 1).mat
    pairs, _ = wedge_basis(3, 2)
    seen = set()
    for i in range(9):
        beta = [1 if j == i else 0 for j in range(9)]
        v = (d1 * fmpq_mat(9, 1, beta)).entries()
        coc = {pairs[r]: {a: v[r * 3 + a] for a in range(3) if v[r * 3 + a]} for r in range(3)}
        ext = catalog.twisted_extension(h, coc)
        alt = catalog.tilde_is_alternating(3, coc)
        rep = F.twisted_report(ext, 3, alt)
        assert rep.kappa_invariant == alt
        seen.add(alt)
    assert seen == {True, False}


def test_internal_error_type():
    assert issubclass(InternalError, AssertionError)

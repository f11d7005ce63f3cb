import pytest

from currentcoh import catalog
from currentcoh.catalog import CatalogError
from currentcoh.lie import LieValidationError, cohomology_table


def test_oscillator_brackets():
    k = catalog.oscillator()
    assert k.dim == 4
    assert k.bracket(0, 1) == {2: 1} and k.bracket(3, 0) == {0: 1} and k.bracket(3, 1) == {1: -1}


@pytest.mark.parametrize("i", range(-7, 8))
def test_pelc_hat(i):
    h = catalog.pelc_hat(i)
    assert h in (-1, 0, 1) and (i - h) % 3 == 0


def test_pelc3_matches_oscillator():
    assert cohomology_table(catalog.pelc(3)) == cohomology_table(catalog.oscillator())


@pytest.mark.parametrize("m", [1, 2])
def test_pelc_witness(m):
    assert catalog.pelc_exactness_witness(m).ok


def test_pelc_negative_control():
    assert not catalog.pelc_exactness_witness(1, eta_sign=-1).identity_ok


def test_pelc_forms_only_for_multiples_of_three():
    assert catalog.pelc_forms(4) == {}
    assert set(catalog.pelc_forms(6)) == {"kappa", "eta"}


def test_cotangent():
    e = catalog.lookup("cotangent:heisenberg")
    assert e.algebra.dim == 6 and "kappa" in e.witnesses


def test_non_closed_twist_rejected():
    # every 3-form on the oscillator is closed; pelc:6 has non-closed ones
    k = catalog.pelc(6)
    with pytest.raises(LieValidationError):
        catalog.cotangent(k, {(0, 1, 5): 1})


def test_twisted_extension_needs_cocycle():
    k = catalog.oscillator()
    with pytest.raises(LieValidationError):
        catalog.twisted_extension(k, {(0, 1): {0: 1}})


@pytest.mark.parametrize("bad", ["nope", "pelc", "pelc:x", "trunc_poly:0", "cotangent"])
def test_lookup_errors(bad):
    with pytest.raises((CatalogError, Exception)):
        catalog.lookup(bad)


def test_listing_and_battery():
    names = [n for n, _, _ in catalog.listing()]
    assert "oscillator" in names and "group_alg_z2" in names
    pairs = catalog.battery()
    assert len(pairs) == 34 and ("trunc_poly:4", "pelc:6") not in pairs


def test_witness_names():
    assert set(catalog.lookup("oscillator").witnesses) == {"kappa1", "kappa2"}
    assert "killing" in catalog.lookup("sl2").witnesses

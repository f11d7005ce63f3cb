import json

import pytest

from currentcoh import catalog, formats
from currentcoh.formats import InputError

NAMES = ["oscillator", "heisenberg", "sl2", "pelc:6", "cotangent:heisenberg", "dual_numbers",
         "trunc_poly:4", "function_alg:3", "group_alg_z2"]


@pytest.mark.parametrize("name", NAMES)
def test_round_trip_is_byte_identical(name):
    text = formats.dumps(catalog.lookup(name).algebra)
    assert formats.dumps(formats.loads(text)) == text


def test_fingerprint_is_stable():
    a = formats.fingerprint(catalog.oscillator())
    assert a == formats.fingerprint(formats.loads(formats.dumps(catalog.oscillator())))
    assert a != formats.fingerprint(catalog.heisenberg())


def _lie(brackets, basis=("x", "y", "z")):
    return json.dumps({"kind": "lie", "name": "t", "dim": len(basis), "basis": list(basis),
                       "brackets": brackets}, indent=2)


@pytest.mark.parametrize("brackets,msg", [
    ({"1,0": {"2": "1"}}, "i < j"),
    ({"0,5": {"2": "1"}}, "out of range"),
    ({"0;1": {"2": "1"}}, "bad index pair"),
    ({"0,1": {"2": "1/0"}}, "bad scalar"),
    ({"0,1": {"2": 0.5}}, "p/q"),
    ({"0,1": {"0": "1"}, "0,2": {"2": "1"}, "1,2": {"0": "1"}}, "validation failed"),
])
def test_errors_carry_context(brackets, msg):
    with pytest.raises(InputError) as err:
        formats.loads(_lie(brackets), "f.json")
    assert msg in str(err.value) and str(err.value).startswith("f.json")


def test_error_line_number():
    text = _lie({"1,0": {"2": "1"}})
    line = next(i for i, t in enumerate(text.splitlines(), 1) if '"1,0"' in t)
    with pytest.raises(InputError) as err:
        formats.loads(text, "f.json")
    assert str(err.value).startswith(f"f.json:{line}:")


def test_json_syntax_error():
    with pytest.raises(InputError) as err:
        formats.loads('{"kind": "lie",\n  oops}', "bad.json")
    assert str(err.value).startswith("bad.json:2:")


def test_comm_rules():
    base = {"kind": "commutative", "basis": ["1", "t"], "unit": ["1", "0"],
            "products": {"0,0": {"0": "1"}, "0,1": {"1": "1"}}}
    assert formats.from_dict(base).dim == 2
    bad = dict(base, products={"1,0": {"1": "1"}})
    with pytest.raises(InputError):
        formats.from_dict(bad)
    with pytest.raises(InputError):
        formats.from_dict(dict(base, unit=["1"]))
    with pytest.raises(InputError):
        formats.from_dict(dict(base, kind="ring"))


def test_load_file(tmp_path):
    p = tmp_path / "osc.json"
    p.write_text(formats.dumps(catalog.oscillator()), encoding="utf-8")
    assert formats.load(p).dim == 4
    with pytest.raises(InputError):
        formats.load(tmp_path / "missing.json")

"""JSON file formats for Lie and commutative algebras.

Lie::

    {"kind": "lie", "name": ..., "dim": n, "basis": [...],
     "brackets": {"i,j": {"k": "p/q"}}}          # i < j only

Commutative::

    {"kind": "commutative", "name": ..., "dim": n, "basis": [...],
     "unit": ["p/q", ...], "products": {"i,j": {"k": "p/q"}}}   # i <= j only

Dumps are deterministic (fixed key order, pairs in lexicographic index
order), so ``dump(load(dump(x))) == dump(x)`` byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path
from typing import Any

from .comm import CommAlgebra, CommValidationError, validate_comm
from .lie import LieAlgebra, LieValidationError, validate_lie
from .linalg import format_q, to_q


class InputError(ValueError):
    """Malformed or invalid input file; the message carries source context."""


def _pairs(table) -> dict[str, dict[str, str]]:
    out = {}
    for (i, j) in sorted(table):
        row = {str(k): format_q(c) for k, c in sorted(table[(i, j)].items()) if c}
        if row:
            out[f"{i},{j}"] = row
    return out


def to_dict(alg: LieAlgebra | CommAlgebra) -> dict[str, Any]:
    if isinstance(alg, LieAlgebra):
        return {"kind": "lie", "name": alg.name, "dim": alg.dim, "basis": list(alg.basis),
                "brackets": _pairs(alg.brackets)}
    return {"kind": "commutative", "name": alg.name, "dim": alg.dim, "basis": list(alg.basis),
            "unit": [format_q(c) for c in alg.unit], "products": _pairs(alg.products)}


def dumps(alg: LieAlgebra | CommAlgebra) -> str:
    return json.dumps(to_dict(alg), indent=2, ensure_ascii=False) + "\n"


def fingerprint(alg: LieAlgebra | CommAlgebra) -> str:
    """sha256 of the canonical dump."""
    return hashlib.sha256(dumps(alg).encode("utf-8")).hexdigest()


def _line_of(text: str, needle: str) -> int | None:
    for no, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return no
    return None


class _Ctx:
    def __init__(self, source: str, text: str):
        self.source, self.text = source, text

    def fail(self, msg: str, key: str | None = None) -> InputError:
        line = _line_of(self.text, f'"{key}"') if key is not None else None
        where = f"{self.source}:{line}" if line else self.source
        return InputError(f"{where}: {msg}")


def _index_pair(ctx: _Ctx, key: str, n: int, strict: bool) -> tuple[int, int]:
    try:
        i, j = (int(t) for t in key.split(","))
    except ValueError:
        raise ctx.fail(f"bad index pair {key!r} (expected \"i,j\")", key) from None
    if not (0 <= i < n and 0 <= j < n):
        raise ctx.fail(f"index pair {key!r} out of range for dim {n}", key)
    if (strict and i >= j) or i > j:
        rel = "<" if strict else "<="
        raise ctx.fail(f"index pair {key!r} must satisfy i {rel} j", key)
    return i, j


def _row(ctx: _Ctx, key: str, row: Any, n: int) -> dict[int, Any]:
    if not isinstance(row, dict):
        raise ctx.fail(f"entry {key!r} must be an object", key)
    out = {}
    for k, v in row.items():
        try:
            kk = int(k)
        except ValueError:
            raise ctx.fail(f"bad coefficient index {k!r} in {key!r}", key) from None
        if not 0 <= kk < n:
            raise ctx.fail(f"coefficient index {kk} out of range in {key!r}", key)
        out[kk] = _scalar(ctx, v, key)
    return out


def _scalar(ctx: _Ctx, v: Any, key: str | None):
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise ctx.fail(f"scalar {v!r} must be a \"p/q\" string", key)
    try:
        return to_q(v)
    except (ValueError, ZeroDivisionError):
        raise ctx.fail(f"bad scalar {v!r}", key) from None


def from_dict(data: Any, source: str = "<input>", text: str = "") -> LieAlgebra | CommAlgebra:
    ctx = _Ctx(source, text)
    if not isinstance(data, dict):
        raise ctx.fail("top level must be an object")
    kind = data.get("kind")
    if kind not in ("lie", "commutative"):
        raise ctx.fail(f"unknown kind {kind!r}", "kind")
    basis = data.get("basis")
    if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis):
        raise ctx.fail("basis must be a list of names", "basis")
    n = len(basis)
    if data.get("dim", n) != n:
        raise ctx.fail(f"dim {data.get('dim')!r} differs from the basis length {n}", "dim")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ctx.fail("name must be a string", "name")
    field = "brackets" if kind == "lie" else "products"
    raw = data.get(field, {})
    if not isinstance(raw, dict):
        raise ctx.fail(f"{field} must be an object", field)
    table = {}
    for key, row in raw.items():
        i, j = _index_pair(ctx, key, n, strict=(kind == "lie"))
        table[(i, j)] = _row(ctx, key, row, n)
    try:
        if kind == "lie":
            return validate_lie(basis, table, name)
        unit = data.get("unit")
        if not isinstance(unit, list) or len(unit) != n:
            raise ctx.fail("unit must be a list of dim scalars", "unit")
        return validate_comm(basis, table, [_scalar(ctx, u, "unit") for u in unit], name)
    except (LieValidationError, CommValidationError) as exc:
        raise ctx.fail(f"validation failed: {exc}") from exc


def loads(text: str, source: str = "<input>") -> LieAlgebra | CommAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return from_dict(data, source, text)


def load(path: str | Path) -> LieAlgebra | CommAlgebra:
    """Read a file, or standard input for ``-``."""
    if str(path) == "-":
        return loads(sys.stdin.read(), "<stdin>")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return loads(text, str(path))

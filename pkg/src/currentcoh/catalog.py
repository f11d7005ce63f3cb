"""Built-in algebras with their named witnesses.

Lie entries: ``abelian:n``, ``heisenberg``, ``oscillator``, ``sl2``,
``pelc:n`` and ``cotangent:BASE``. Twisted cotangent algebras take a
user-supplied cochain and are built with :func:`cotangent` (closed 3-form)
or :func:`twisted_extension` (``g*``-valued 2-cocycle).
Commutative entries: ``field``, ``dual_numbers``, ``trunc_poly:n``,
``function_alg:n``, ``group_alg_z2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from flint import fmpq, fmpq_mat

from .comm import CommAlgebra, validate_comm
from .lie import (
    LieAlgebra,
    LieValidationError,
    ce_differential,
    make_module,
    sort_with_sign,
    validate_lie,
    wedge_basis,
)
from .linalg import ZERO, InternalError, StructureError, sparse_matrix, to_q


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    algebra: LieAlgebra | CommAlgebra
    witnesses: Mapping[str, fmpq_mat] = field(default_factory=dict)


class CatalogError(KeyError):
    pass


# ---------------------------------------------------------------- Lie algebras


def abelian(n: int) -> LieAlgebra:
    return validate_lie([f"e{i}" for i in range(n)], {}, f"abelian:{n}")


def heisenberg() -> LieAlgebra:
    return validate_lie(["x", "y", "c"], {(0, 1): {2: 1}}, "heisenberg")


def oscillator() -> LieAlgebra:
    """``h_3 ⋊ 𝕂d`` on ``(x, y, c, d)``: ``[x,y]=c``, ``[d,x]=x``, ``[d,y]=-y``."""
    return validate_lie(["x", "y", "c", "d"],
                        {(0, 1): {2: 1}, (3, 0): {0: 1}, (3, 1): {1: -1}}, "oscillator")


def sl2() -> LieAlgebra:
    return validate_lie(["h", "e", "f"],
                        {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, "sl2")


def pelc_hat(i: int) -> int:
    """The representative of ``i`` mod 3 in ``{-1, 0, 1}``."""
    return ((i % 3) + 1) % 3 - 1


def pelc(n: int) -> LieAlgebra:
    """Basis ``T_0..T_n``, ``[T_i, T_j] = hat(i-j) T_{i+j}`` for ``i+j <= n``."""
    if n < 1:
        raise StructureError("pelc needs n >= 1")
    table = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            c = pelc_hat(i - j)
            if i + j <= n and c:
                table[(i, j)] = {i + j: c}
    return validate_lie([f"T{i}" for i in range(n + 1)], table, f"pelc:{n}")


def symmetric_matrix(n: int, entries: Mapping[tuple[int, int], object]) -> fmpq_mat:
    ent = {}
    for (i, j), v in entries.items():
        ent[(i, j)] = to_q(v)
        ent[(j, i)] = to_q(v)
    return sparse_matrix(n, n, ent)


def oscillator_forms() -> dict[str, fmpq_mat]:
    return {
        "kappa1": symmetric_matrix(4, {(3, 3): 1}),
        "kappa2": symmetric_matrix(4, {(0, 1): 1, (3, 2): 1}),
    }


def pelc_forms(n: int) -> dict[str, fmpq_mat]:
    """``κ(T_i, T_j) = δ_{i+j,n}`` and ``η(T_i, T_j) = a_i δ_{j,n-i}``,
    ``a_i = 2i/n - 1``; attached only for ``3 | n``."""
    if n % 3:
        return {}
    m = n + 1
    kappa = sparse_matrix(m, m, {(i, n - i): 1 for i in range(m)})
    eta = sparse_matrix(m, m, {(i, n - i): fmpq(2 * i, n) - 1 for i in range(m)})
    return {"kappa": kappa, "eta": eta}


def alt2_to_cochain(mat: fmpq_mat) -> list[fmpq]:
    """Alternating matrix -> coordinates in ``C^2(k, 𝕂)``."""
    n = mat.nrows()
    tuples, _ = wedge_basis(n, 2)
    return [mat[i, j] for i, j in tuples]


def koszul_cochain(lie: LieAlgebra, kappa: fmpq_mat) -> list[fmpq]:
    """``Γ(κ)(x,y,z) = κ([x,y], z)`` on increasing triples."""
    tuples, _ = wedge_basis(lie.dim, 3)
    out = []
    for i, j, k in tuples:
        out.append(sum((c * kappa[r, k] for r, c in lie.bracket(i, j).items()), ZERO))
    return out


@dataclass(frozen=True)
class PelcReport:
    m: int
    n: int
    identity_ok: bool      # d η = -Γ(κ)
    nondegenerate: bool
    kappa_invariant: bool

    @property
    def ok(self) -> bool:
        return self.identity_ok and self.nondegenerate and self.kappa_invariant


def pelc_exactness_witness(m: int, eta_sign: int = 1) -> PelcReport:
    """Check ``d η = -Γ(κ)`` on ``pelc(3m)``; ``eta_sign=-1`` is a negative control."""
    if m < 1:
        raise StructureError("m must be >= 1")
    n = 3 * m
    lie = pelc(n)
    forms = pelc_forms(n)
    kappa, eta = forms["kappa"], forms["eta"] * eta_sign
    triv = make_module(lie, "trivial")
    d2 = ce_differential(lie, triv, 2)
    eta_alt = eta - eta.transpose()
    # η is stored as η(T_i, T_{n-i}) = a_i; a_{n-i} = -a_i makes it alternating
    if eta_alt != eta * 2:
        raise InternalError("Pelc η is not alternating")
    d_eta = (d2.mat * fmpq_mat(d2.cols, 1, alt2_to_cochain(eta))).entries()
    gamma = koszul_cochain(lie, kappa)
    identity_ok = d_eta == [-g for g in gamma]
    from .forms import is_invariant  # local: forms imports catalog helpers
    return PelcReport(m, n, identity_ok, kappa.det() != 0, is_invariant(lie, kappa))


def cotangent(base: LieAlgebra, gamma: Mapping[tuple[int, int, int], object] | None = None,
              name: str | None = None) -> LieAlgebra:
    """``T*_γ g`` on ``g ⊕ g*`` (``g`` first) for a closed 3-form ``γ``.

    ``gamma`` is an alternating trilinear form given on index triples (any
    order, extended by the sign of the permutation); it must be closed. With
    ``gamma=None`` this is the plain cotangent algebra.
    """
    n = base.dim
    gam = {}
    for (i, j, k), v in (gamma or {}).items():
        s, st = sort_with_sign((i, j, k))
        if s:
            gam[st] = gam.get(st, ZERO) + s * to_q(v)
    if gam:
        t3, _ = wedge_basis(n, 3)
        d3 = ce_differential(base, make_module(base, "trivial"), 3)
        vec = [gam.get(t, ZERO) for t in t3]
        if d3.rows and any((d3.mat * fmpq_mat(len(vec), 1, vec)).entries()):
            raise LieValidationError("twisting 3-form is not closed")

    def gval(i, j, l):
        s, st = sort_with_sign((i, j, l))
        return s * gam.get(st, ZERO) if s else ZERO

    cocycle = {}
    for i in range(n):
        for j in range(i + 1, n):
            row = {l: gval(i, j, l) for l in range(n) if gval(i, j, l)}
            if row:
                cocycle[(i, j)] = row
    label = name or (f"twisted:{base.name}" if gam else f"cotangent:{base.name}")
    return twisted_extension(base, cocycle, label)


def twisted_extension(base: LieAlgebra, cocycle: Mapping[tuple[int, int], Mapping[int, object]],
                      name: str | None = None) -> LieAlgebra:
    """``g* ⋊_γ g`` for a ``g*``-valued 2-cochain ``γ``.

    ``cocycle[(i, j)][l] = γ(e_i, e_j)(e_l)`` for ``i < j``. The bracket is
    ``[e_i, e_j] = [e_i, e_j]_g + Σ_l γ(e_i, e_j)(e_l) e^l`` and
    ``[e_i, e^j] = -Σ_l c^j_{il} e^l``; Jacobi holds exactly when ``γ`` is a
    cocycle for the coadjoint action, so validation rejects anything else.
    The trilinear form ``γ̃(x, y, z) = γ(x, y)(z)`` need not be alternating.
    """
    n = base.dim
    table: dict = {}
    for i in range(n):
        for j in range(i + 1, n):
            v = dict(base.bracket(i, j))
            for l, c in cocycle.get((i, j), {}).items():
                if to_q(c):
                    v[n + l] = to_q(c)
            if v:
                table[(i, j)] = v
        for j in range(n):
            v = {}
            for l in range(n):
                c = base.bracket(i, l).get(j, ZERO)
                if c:
                    v[n + l] = -c
            if v:
                table[(i, n + j)] = v
    basis = list(base.basis) + [f"{b}*" for b in base.basis]
    return validate_lie(basis, table, name or f"twisted:{base.name}")


def tilde_is_alternating(n: int, cocycle: Mapping[tuple[int, int], Mapping[int, object]]) -> bool:
    """Whether ``γ̃(x, y, z) = γ(x, y)(z)`` is alternating."""
    def val(i, j, l):
        if i == j:
            return ZERO
        if i < j:
            return to_q(cocycle.get((i, j), {}).get(l, 0))
        return -to_q(cocycle.get((j, i), {}).get(l, 0))
    return all(val(i, j, l) == -val(i, l, j) for i in range(n) for j in range(n) for l in range(n))


def cotangent_forms(n: int) -> dict[str, fmpq_mat]:
    """Canonical pairing ``κ`` and ``η`` with ``η(e_i, e^j) = -δ_ij``."""
    kappa = sparse_matrix(2 * n, 2 * n, {**{(i, n + i): 1 for i in range(n)},
                                         **{(n + i, i): 1 for i in range(n)}})
    eta = sparse_matrix(2 * n, 2 * n, {**{(i, n + i): -1 for i in range(n)},
                                       **{(n + i, i): 1 for i in range(n)}})
    return {"kappa": kappa, "eta": eta}


# ---------------------------------------------------------------- commutative algebras


def field_alg() -> CommAlgebra:
    return validate_comm(["1"], {(0, 0): {0: 1}}, [1], "field")


def trunc_poly(n: int) -> CommAlgebra:
    """``𝕂[t]/(t^n)`` on ``1, t, .., t^{n-1}``."""
    if n < 1:
        raise StructureError("trunc_poly needs n >= 1")
    table = {(i, j): {i + j: 1} for i in range(n) for j in range(i, n) if i + j < n}
    basis = ["1"] + [f"t^{i}" if i > 1 else "t" for i in range(1, n)]
    return validate_comm(basis, table, [1] + [0] * (n - 1), f"trunc_poly:{n}")


def dual_numbers() -> CommAlgebra:
    a = trunc_poly(2)
    return validate_comm(["1", "eps"], a.table(), a.unit, "dual_numbers")


def function_alg(n: int) -> CommAlgebra:
    """``𝕂^n`` with pointwise product, idempotent basis."""
    if n < 1:
        raise StructureError("function_alg needs n >= 1")
    return validate_comm([f"p{i}" for i in range(n)], {(i, i): {i: 1} for i in range(n)},
                         [1] * n, f"function_alg:{n}")


def group_alg_z2() -> CommAlgebra:
    """``𝕂[ℤ/2]`` on ``1, g`` with ``g² = 1``."""
    return validate_comm(["1", "g"], {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 1): {0: 1}},
                         [1, 0], "group_alg_z2")


# ---------------------------------------------------------------- lookup


LIE_NAMES = ("abelian", "heisenberg", "oscillator", "sl2", "pelc", "cotangent")
COMM_NAMES = ("field", "dual_numbers", "trunc_poly", "function_alg", "group_alg_z2")


def _int_param(name: str, params: Sequence[str], default: int | None = None) -> int:
    if not params:
        if default is None:
            raise CatalogError(f"{name} needs an integer parameter")
        return default
    try:
        return int(params[0])
    except ValueError as exc:
        raise CatalogError(f"{name}: bad parameter {params[0]!r}") from exc


def lie_catalog(name: str, *params: str) -> CatalogEntry:
    if name == "abelian":
        return CatalogEntry(f"abelian:{_int_param(name, params, 2)}", abelian(_int_param(name, params, 2)))
    if name == "heisenberg":
        return CatalogEntry(name, heisenberg())
    if name == "oscillator":
        return CatalogEntry(name, oscillator(), oscillator_forms())
    if name == "sl2":
        from .forms import killing_form
        k = sl2()
        return CatalogEntry(name, k, {"killing": killing_form(k)})
    if name == "pelc":
        n = _int_param(name, params)
        return CatalogEntry(f"pelc:{n}", pelc(n), pelc_forms(n))
    if name == "cotangent":
        if not params:
            raise CatalogError("cotangent needs a base algebra name")
        base = lie_catalog(*params).algebra
        return CatalogEntry(f"cotangent:{':'.join(params)}", cotangent(base), cotangent_forms(base.dim))
    raise CatalogError(f"unknown Lie catalog entry {name!r}")


def comm_catalog(name: str, *params: str) -> CatalogEntry:
    if name == "field":
        return CatalogEntry(name, field_alg())
    if name == "dual_numbers":
        return CatalogEntry(name, dual_numbers())
    if name == "trunc_poly":
        n = _int_param(name, params)
        return CatalogEntry(f"trunc_poly:{n}", trunc_poly(n))
    if name == "function_alg":
        n = _int_param(name, params)
        return CatalogEntry(f"function_alg:{n}", function_alg(n))
    if name == "group_alg_z2":
        return CatalogEntry(name, group_alg_z2())
    raise CatalogError(f"unknown commutative catalog entry {name!r}")


def lookup(ref: str) -> CatalogEntry:
    """Resolve ``NAME[:PARAM...]`` in either catalog."""
    name, *params = ref.split(":")
    if name in LIE_NAMES:
        return lie_catalog(name, *params)
    if name in COMM_NAMES:
        return comm_catalog(name, *params)
    raise CatalogError(f"unknown catalog entry {name!r}")


def listing() -> list[tuple[str, str, int]]:
    """``(name, kind, dim)`` for representative parameter choices."""
    names = ["abelian:2", "abelian:3", "heisenberg", "oscillator", "sl2", "pelc:3", "pelc:6",
             "cotangent:heisenberg", "field", "dual_numbers", "trunc_poly:3", "trunc_poly:4",
             "function_alg:2", "function_alg:3", "group_alg_z2"]
    out = []
    for nm in names:
        e = lookup(nm)
        kind = "lie" if isinstance(e.algebra, LieAlgebra) else "commutative"
        out.append((nm, kind, e.algebra.dim))
    return out


BATTERY_A = ("field", "dual_numbers", "trunc_poly:3", "trunc_poly:4", "function_alg:2",
             "function_alg:3", "group_alg_z2")
BATTERY_K = ("abelian:2", "heisenberg", "oscillator", "sl2", "pelc:6")


def battery(max_dim: int = 24) -> list[tuple[str, str]]:
    """``(A, k)`` name pairs with ``dim A * dim k <= max_dim``."""
    out = []
    for a in BATTERY_A:
        da = lookup(a).algebra.dim
        for k in BATTERY_K:
            if da * lookup(k).algebra.dim <= max_dim:
                out.append((a, k))
    return out

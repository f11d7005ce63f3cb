"""Commutative algebras and their first-order differential invariants.

Bases used throughout (``n = dim A``):

* ``A⊗A``: pairs ``(i, j)`` row-major, index ``i*n + j``;
* ``Λ²(A)``: ``i < j`` in lexicographic order (abstract wedge coordinates);
* ``S²(A)``: ``i <= j`` (abstract coordinates, ``e_i ∨ e_j``).

When Λ² and S² are embedded into ``A⊗A`` we use
``a∧b = (a⊗b - b⊗a)/2`` and ``a∨b = (a⊗b + b⊗a)/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from flint import fmpq, fmpq_mat

from .linalg import (
    ONE,
    ZERO,
    InternalError,
    LinearMap,
    Subspace,
    image_basis,
    image_of,
    join,
    kernel_basis,
    meet,
    quotient_map,
    rank,
    solve,
    sparse_matrix,
    span,
    to_q,
    zeros,
)
from .lie import sym2_index, wedge_basis, wedge2_vec


class CommValidationError(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class CommAlgebra:
    """Unital commutative associative algebra; build with :func:`validate_comm`."""

    name: str
    basis: tuple[str, ...]
    products: Mapping[tuple[int, int], Mapping[int, fmpq]]  # i <= j
    unit: tuple[fmpq, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def product(self, i: int, j: int) -> dict[int, fmpq]:
        return dict(self.products.get((i, j) if i <= j else (j, i), {}))

    def mul(self, u: Sequence, v: Sequence) -> list[fmpq]:
        out = [ZERO] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                for k, c in self.product(i, j).items():
                    out[k] += to_q(a) * to_q(b) * c
        return out

    def e(self, i: int) -> list[fmpq]:
        v = [ZERO] * self.dim
        v[i] = ONE
        return v

    def one(self) -> list[fmpq]:
        return list(self.unit)

    def table(self) -> dict[tuple[int, int], dict[int, fmpq]]:
        return {k: dict(v) for k, v in self.products.items()}


def validate_comm(basis: Sequence[str] | int, table: Mapping, unit: Sequence,
                  name: str = "") -> CommAlgebra:
    """Validate commutativity, associativity and the unit.

    ``table`` maps ``(i, j)`` to ``{k: coefficient}``; an entry given for both
    ``(i, j)`` and ``(j, i)`` must agree.
    """
    if isinstance(basis, int):
        basis = [f"a{i}" for i in range(basis)]
    basis = tuple(basis)
    n = len(basis)
    prod: dict[tuple[int, int], dict[int, fmpq]] = {}
    for (i, j), val in table.items():
        i, j = int(i), int(j)
        if not (0 <= i < n and 0 <= j < n):
            raise CommValidationError(f"product index ({i},{j}) out of range", (i, j))
        vec = {}
        for k, c in val.items():
            k = int(k)
            if not 0 <= k < n:
                raise CommValidationError(f"coefficient index {k} out of range", (i, j, k))
            c = to_q(c)
            if c:
                vec[k] = c
        key = (min(i, j), max(i, j))
        if key in prod and prod[key] != vec:
            raise CommValidationError(f"product table not symmetric at ({i},{j})", (i, j))
        prod[key] = vec
    prod = {k: v for k, v in prod.items() if v}
    if len(unit) != n:
        raise CommValidationError("unit has the wrong length")
    alg = CommAlgebra(name, basis, prod, tuple(to_q(u) for u in unit))
    for i in range(n):
        if alg.mul(alg.one(), alg.e(i)) != alg.e(i):
            raise CommValidationError(f"unit fails on {basis[i]}", (i,))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = alg.mul(alg.mul(alg.e(i), alg.e(j)), alg.e(k))
                rhs = alg.mul(alg.e(i), alg.mul(alg.e(j), alg.e(k)))
                if lhs != rhs:
                    raise CommValidationError(
                        f"associativity fails on ({basis[i]}, {basis[j]}, {basis[k]})", (i, j, k))
    return alg


# ---------------------------------------------------------------- tensor helpers


def tensor_vec(alg: CommAlgebra, a: Sequence, b: Sequence) -> list[fmpq]:
    """Coordinates of ``a ⊗ b`` in ``A⊗A``."""
    return [to_q(x) * to_q(y) for x in a for y in b]


def wedge_vec(a: Sequence, b: Sequence) -> list[fmpq]:
    return wedge2_vec(a, b)


def sym_vec(n: int, a: Sequence, b: Sequence) -> list[fmpq]:
    """Abstract ``S²`` coordinates of ``a ∨ b``."""
    pairs, idx = sym2_index(n)
    out = [ZERO] * len(pairs)
    for i in range(n):
        if not a[i]:
            continue
        for j in range(n):
            if b[j]:
                out[idx[(min(i, j), max(i, j))]] += to_q(a[i]) * to_q(b[j])
    return out


def multiplication_map(alg: CommAlgebra) -> LinearMap:
    """``μ: A⊗A -> A``."""
    n = alg.dim
    ent = {}
    for i in range(n):
        for j in range(n):
            for k, c in alg.product(i, j).items():
                ent[(k, i * n + j)] = c
    return LinearMap(sparse_matrix(n, n * n, ent), "A⊗A", "A")


def wedge_embedding(n: int) -> fmpq_mat:
    """``Λ²(A) -> A⊗A``, ``e_i∧e_j -> (e_i⊗e_j - e_j⊗e_i)/2``."""
    tuples, _ = wedge_basis(n, 2)
    half = fmpq(1, 2)
    ent = {}
    for c, (i, j) in enumerate(tuples):
        ent[(i * n + j, c)] = half
        ent[(j * n + i, c)] = -half
    return sparse_matrix(n * n, len(tuples), ent)


def sym_embedding(n: int) -> fmpq_mat:
    """``S²(A) -> A⊗A``, ``e_i∨e_j -> (e_i⊗e_j + e_j⊗e_i)/2``."""
    pairs, _ = sym2_index(n)
    half = fmpq(1, 2)
    ent: dict = {}
    for c, (i, j) in enumerate(pairs):
        if i == j:
            ent[(i * n + i, c)] = ONE
        else:
            ent[(i * n + j, c)] = half
            ent[(j * n + i, c)] = half
    return sparse_matrix(n * n, len(pairs), ent)


def to_wedge(n: int) -> fmpq_mat:
    """``α: A⊗A -> Λ²(A)``, ``a⊗b -> a∧b``."""
    tuples, idx = wedge_basis(n, 2)
    ent = {}
    for i in range(n):
        for j in range(n):
            if i < j:
                ent[(idx[(i, j)], i * n + j)] = ONE
            elif i > j:
                ent[(idx[(j, i)], i * n + j)] = -ONE
    return sparse_matrix(len(tuples), n * n, ent)


# ---------------------------------------------------------------- J_A and Ω¹


def ja_and_square(alg: CommAlgebra) -> tuple[Subspace, Subspace]:
    """``J_A = ker μ`` and ``J_A²`` spanned by ``a⊗bc - ab⊗c - ac⊗b + abc⊗1``."""
    return alg.cached("JA", lambda: _ja_and_square(alg))


def _ja_and_square(alg):
    n = alg.dim
    ja = kernel_basis(multiplication_map(alg))
    one = alg.one()
    gens = []
    for a in range(n):
        for b in range(n):
            for c in range(b, n):
                ea, eb, ec = alg.e(a), alg.e(b), alg.e(c)
                ab, ac, bc = alg.mul(ea, eb), alg.mul(ea, ec), alg.mul(eb, ec)
                abc = alg.mul(ab, ec)
                v = tensor_vec(alg, ea, bc)
                for w, s in ((tensor_vec(alg, ab, ec), -1), (tensor_vec(alg, ac, eb), -1),
                             (tensor_vec(alg, abc, one), 1)):
                    v = [x + s * y for x, y in zip(v, w)]
                gens.append(v)
    ja2 = span(gens, n * n)
    if not ja2.is_subspace_of(ja):
        raise InternalError("J_A^2 not inside J_A")
    return ja, ja2


@dataclass(frozen=True, eq=False)
class KaehlerModule:
    """``Ω¹(A) = J_A/J_A²`` in coordinates ``Q^dim``.

    ``to_omega`` is a matrix ``A⊗A -> Ω¹`` whose values on ``J_A`` are the
    classes mod ``J_A²``; ``d`` is the universal derivation ``A -> Ω¹``;
    ``action[i]`` is multiplication by ``e_i`` on ``Ω¹``.
    """

    algebra: CommAlgebra
    dim: int
    to_omega: fmpq_mat
    d: LinearMap
    action: tuple[fmpq_mat, ...]

    def times(self, a: Sequence, w: Sequence) -> list[fmpq]:
        """``a · w`` for ``a ∈ A`` and ``w ∈ Ω¹``."""
        out = zeros(self.dim, 1)
        col = fmpq_mat(self.dim, 1, [to_q(x) for x in w])
        for i, c in enumerate(a):
            if c:
                out = out + (self.action[i] * col) * to_q(c)
        return out.entries() if self.dim else []

    def d_of(self, a: Sequence) -> list[fmpq]:
        return self.d(a)

    def exact_image(self) -> Subspace:
        """``d_A(A)``."""
        return image_basis(self.d)


def kaehler(alg: CommAlgebra) -> KaehlerModule:
    return alg.cached("kaehler", lambda: _kaehler(alg))


def _kaehler(alg: CommAlgebra) -> KaehlerModule:
    n = alg.dim
    ja, ja2 = ja_and_square(alg)
    q = quotient_map(n * n, ja2).mat
    w = image_of(ja, q)  # Ω¹ inside the quotient
    to_omega = w.coordinate_map() * q
    dim = w.dim
    one = alg.one()
    dcols = []
    for a in range(n):
        v = [x - y for x, y in zip(tensor_vec(alg, one, alg.e(a)), tensor_vec(alg, alg.e(a), one))]
        dcols.append((to_omega * fmpq_mat(n * n, 1, v)).entries() if dim else [])
    dmat = fmpq_mat(dim, n, [dcols[a][r] for r in range(dim) for a in range(n)])
    # section Ω¹ -> J_A, used to transport the A-action
    ja_basis = ja.basis.transpose()
    sect = solve(to_omega * ja_basis, _identity(dim)) if dim else zeros(ja.dim, 0)
    if sect is None:
        raise InternalError("J_A does not surject onto Ω¹")
    lift = ja_basis * sect  # A⊗A coordinates of lifts of the Ω¹ basis
    acts = []
    for i in range(n):
        left = _left_mult(alg, i)
        acts.append(to_omega * left * lift)
    km = KaehlerModule(alg, dim, to_omega, LinearMap(dmat, "A", "Ω1"), tuple(acts))
    # Leibniz on all basis pairs
    for a in range(n):
        for b in range(n):
            lhs = km.d(alg.mul(alg.e(a), alg.e(b)))
            rhs = [x + y for x, y in zip(km.times(alg.e(a), km.d(alg.e(b))),
                                         km.times(alg.e(b), km.d(alg.e(a))))]
            if lhs != rhs:
                raise InternalError(f"Leibniz fails for d_A on ({alg.basis[a]}, {alg.basis[b]})")
    return km


def _identity(n):
    return sparse_matrix(n, n, {(i, i): 1 for i in range(n)})


def _left_mult(alg: CommAlgebra, i: int) -> fmpq_mat:
    """``a⊗b -> e_i a ⊗ b`` on ``A⊗A``."""
    n = alg.dim
    ent: dict = {}
    for a in range(n):
        for k, c in alg.product(i, a).items():
            for b in range(n):
                key = (k * n + b, a * n + b)
                ent[key] = ent.get(key, ZERO) + c
    return sparse_matrix(n * n, n * n, ent)


def projection_p(alg: CommAlgebra) -> fmpq_mat:
    """``p: A⊗A -> J_A``, ``a⊗b -> a⊗b - ab⊗1``."""
    n = alg.dim
    one = alg.one()
    cols = []
    for i in range(n):
        for j in range(n):
            v = tensor_vec(alg, alg.e(i), alg.e(j))
            w = tensor_vec(alg, alg.mul(alg.e(i), alg.e(j)), one)
            cols.append([x - y for x, y in zip(v, w)])
    return fmpq_mat(n * n, n * n, [cols[c][r] for r in range(n * n) for c in range(n * n)])


# ---------------------------------------------------------------- HH_1, T, γ_A


@dataclass(frozen=True)
class HochschildResult:
    b1: Subspace
    dim: int
    iso_map: fmpq_mat  # A⊗A -> Ω¹, a⊗b -> a d_A(b)


def hochschild_h1(alg: CommAlgebra) -> HochschildResult:
    """``HH_1(A) = (A⊗A)/B_1(A)`` and its comparison with ``Ω¹``."""
    n = alg.dim
    gens = []
    for a in range(n):
        for b in range(n):
            for c in range(b, n):
                ea, eb, ec = alg.e(a), alg.e(b), alg.e(c)
                v1 = tensor_vec(alg, alg.mul(ea, eb), ec)
                v2 = tensor_vec(alg, alg.mul(ea, ec), eb)
                v3 = tensor_vec(alg, ea, alg.mul(eb, ec))
                gens.append([x + y - z for x, y, z in zip(v1, v2, v3)])
    b1 = span(gens, n * n)
    km = kaehler(alg)
    cols = []
    for a in range(n):
        for b in range(n):
            cols.append(km.times(alg.e(a), km.d(alg.e(b))))
    phi = fmpq_mat(km.dim, n * n, [cols[c][r] for r in range(km.dim) for c in range(n * n)])
    hh_dim = n * n - b1.dim
    if hh_dim != km.dim:
        raise InternalError(f"dim HH_1 = {hh_dim} but dim Ω¹ = {km.dim}")
    if km.dim and rank(phi) != km.dim:
        raise InternalError("a⊗b -> a d_A b is not onto Ω¹")
    if kernel_basis(phi) != b1:
        raise InternalError("kernel of a⊗b -> a d_A b differs from B_1(A)")
    _, ja2 = ja_and_square(alg)
    if image_of(b1, projection_p(alg)) != ja2:
        raise InternalError("J_A^2 differs from p(B_1(A))")
    return HochschildResult(b1, hh_dim, phi)


def t_spaces(alg: CommAlgebra) -> tuple[Subspace, Subspace]:
    """``T(A)`` and ``T_0(A)`` inside ``Λ²(A)``."""
    return alg.cached("T", lambda: _t_spaces(alg))


def _t_spaces(alg):
    n = alg.dim
    m = n * (n - 1) // 2
    one = alg.one()
    t_gens, t0_gens = [], []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                ea, eb, ec = alg.e(a), alg.e(b), alg.e(c)
                t = [x + y + z for x, y, z in zip(wedge_vec(alg.mul(ea, eb), ec),
                                                  wedge_vec(alg.mul(eb, ec), ea),
                                                  wedge_vec(alg.mul(ec, ea), eb))]
                abc = alg.mul(alg.mul(ea, eb), ec)
                t_gens.append(t)
                t0_gens.append([x - y for x, y in zip(t, wedge_vec(abc, one))])
    return span(t_gens, m), span(t0_gens, m)


def gamma_A(alg: CommAlgebra) -> LinearMap:
    """``γ_A: Λ²(A) -> Ω¹(A)``, ``a∧b -> a d_A(b) - b d_A(a)``.

    Surjectivity and ``ker γ_A = T_0(A)`` are certified on construction.
    """
    return alg.cached("gammaA", lambda: _gamma_A(alg))


def _gamma_A(alg):
    n = alg.dim
    km = kaehler(alg)
    tuples, _ = wedge_basis(n, 2)
    cols = []
    for i, j in tuples:
        ei, ej = alg.e(i), alg.e(j)
        cols.append([x - y for x, y in zip(km.times(ei, km.d(ej)), km.times(ej, km.d(ei)))])
    mat = fmpq_mat(km.dim, len(tuples), [cols[c][r] for r in range(km.dim) for c in range(len(tuples))])
    g = LinearMap(mat, "Λ2A", "Ω1")
    _, t0 = t_spaces(alg)
    if rank(mat) != km.dim:
        raise InternalError("γ_A is not surjective")
    if kernel_basis(mat) != t0:
        raise InternalError("ker γ_A differs from T_0(A)")
    return g


@dataclass(frozen=True)
class CyclicResult:
    ia: Subspace          # in abstract S²(A) coordinates
    ia_tensor: Subspace   # inside A⊗A
    hc1_dim: int


def i_a(alg: CommAlgebra) -> Subspace:
    """``I_A = ker(S²(A) -> A)`` in abstract ``S²`` coordinates."""
    def build():
        n = alg.dim
        pairs, _ = sym2_index(n)
        ent = {}
        for c, (i, j) in enumerate(pairs):
            for k, v in alg.product(i, j).items():
                ent[(k, c)] = v
        return kernel_basis(sparse_matrix(n, len(pairs), ent))
    return alg.cached("IA", build)


def i_a_and_hc1(alg: CommAlgebra) -> CyclicResult:
    """``I_A = J_A ∩ S²(A)`` and ``HC_1(A)`` computed two ways."""
    n = alg.dim
    ja, _ = ja_and_square(alg)
    s2 = image_basis(sym_embedding(n))
    l2 = image_basis(wedge_embedding(n))
    ia_t = meet(ja, s2)
    if join(l2, ia_t) != ja or l2.dim + ia_t.dim != ja.dim:
        raise InternalError("J_A is not Λ²(A) ⊕ I_A")
    ia = i_a(alg)
    if image_of(ia, sym_embedding(n)) != ia_t:
        raise InternalError("I_A from S² coordinates disagrees with J_A ∩ S²(A)")
    km = kaehler(alg)
    exact = km.exact_image()
    hc_omega = km.dim - exact.dim
    t, _ = t_spaces(alg)
    hc_wedge = n * (n - 1) // 2 - t.dim
    if hc_omega != hc_wedge:
        raise InternalError(f"HC_1: Ω¹/d_A(A) has dim {hc_omega}, Λ²/T has dim {hc_wedge}")
    # the map [a∧b] -> [a d_A b] is an isomorphism Λ²/T -> Ω¹/d_A(A)
    q = quotient_map(km.dim, exact).mat
    tuples, _ = wedge_basis(n, 2)
    cols = [km.times(alg.e(i), km.d(alg.e(j))) for i, j in tuples]
    m = fmpq_mat(km.dim, len(tuples), [cols[c][r] for r in range(km.dim) for c in range(len(tuples))])
    induced = q * m
    if kernel_basis(induced) != t or rank(induced) != hc_omega:
        raise InternalError("[a∧b] -> [a d_A b] is not an isomorphism onto HC_1")
    return CyclicResult(ia, ia_t, hc_omega)


def is_cyclic_cocycle(alg: CommAlgebra, f: Sequence) -> bool:
    """Whether the alternating form with wedge coordinates ``f`` satisfies
    ``f(a, bc) + f(b, ca) + f(c, ab) = 0`` on all basis triples."""
    n = alg.dim
    tuples, idx = wedge_basis(n, 2)

    def ev(u, v):
        w = wedge_vec(u, v)
        return sum((to_q(x) * y for x, y in zip(f, w)), ZERO)

    for a in range(n):
        for b in range(n):
            for c in range(n):
                ea, eb, ec = alg.e(a), alg.e(b), alg.e(c)
                if ev(ea, alg.mul(eb, ec)) + ev(eb, alg.mul(ec, ea)) + ev(ec, alg.mul(ea, eb)):
                    return False
    return True

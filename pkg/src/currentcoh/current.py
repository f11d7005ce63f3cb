"""Current algebras ``g = A⊗k`` and their second (co)homology.

Index conventions (``n = dim A``, ``N = dim k``):

* ``g`` basis ``a_i x_k`` at index ``i*N + k``;
* decomposition coordinates of ``Λ²(g)`` are three consecutive blocks
  ``Λ²(A)⊗S²(k)`` (pair-major), ``A⊗Λ²(k)`` and ``I_A⊗Λ²(k)``, the last
  one using the echelon basis of ``I_A`` (abstract ``S²(A)`` coordinates);
* a ``z``-valued cochain is an ``m × dim`` matrix, one row per coordinate of
  ``z = Q^m``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from flint import fmpq, fmpq_mat

from . import comm as ca
from .comm import CommAlgebra
from .forms import (
    exact_forms,
    gamma_matrix,
    invariance_matrix,
    is_invariant,
    kprime_pairing,
    sym2_invariants,
    sym_coords,
)
from .lie import (
    LieAlgebra,
    boundary_partial,
    bracket_map,
    ce_differential,
    cohomology,
    derived_subalgebra,
    homology_h2,
    make_module,
    sort_with_sign,
    sym2_index,
    sym_pos,
    validate_lie,
    wedge2_vec,
    wedge_basis,
)
from .linalg import (
    ONE,
    ZERO,
    InternalError,
    StructureError,
    Subspace,
    complement_representatives,
    hstack,
    identity,
    image_basis,
    image_of,
    is_zero,
    join,
    kernel_basis,
    meet,
    quotient_map,
    rank,
    select_columns,
    solve,
    sparse_matrix,
    span,
    to_q,
    zeros,
)


@dataclass(frozen=True, eq=False)
class CurrentAlgebra:
    A: CommAlgebra
    k: LieAlgebra
    g: LieAlgebra
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.A.dim

    @property
    def N(self) -> int:
        return self.k.dim

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def gvec(self, a: Sequence, x: Sequence) -> list[fmpq]:
        """Coordinates of ``a⊗x`` in ``g``."""
        return [to_q(u) * to_q(v) for u in a for v in x]

    @property
    def block_dims(self) -> tuple[int, int, int]:
        n, N = self.n, self.N
        return (comb(n, 2) * comb(N + 1, 2), n * comb(N, 2), ca.i_a(self.A).dim * comb(N, 2))


def build_current(A: CommAlgebra, k: LieAlgebra) -> CurrentAlgebra:
    """``g = A⊗k`` with ``[a x, b y] = ab [x, y]``; asserts ``g' = A⊗k'``."""
    n, N = A.dim, k.dim
    table = {}
    for i in range(n):
        for j in range(n):
            prod = A.product(i, j)
            if not prod:
                continue
            for x in range(N):
                for y in range(N):
                    u, v = i * N + x, j * N + y
                    if u >= v:
                        continue
                    br = k.bracket(x, y)
                    out = {}
                    for c, s in prod.items():
                        for z, t in br.items():
                            out[c * N + z] = out.get(c * N + z, ZERO) + s * t
                    out = {key: val for key, val in out.items() if val}
                    if out:
                        table[(u, v)] = out
    basis = [f"{a}{x}" if a != "1" else x for a in A.basis for x in k.basis]
    g = validate_lie(basis, table, f"{A.name}⊗{k.name}")
    cur = CurrentAlgebra(A, k, g)
    kp = derived_subalgebra(k)
    expected = span([cur.gvec(A.e(i), r) for i in range(n) for r in kp.rows()], n * N)
    if derived_subalgebra(g) != expected:
        raise InternalError("g' differs from A⊗k'")
    return cur


# ---------------------------------------------------------------- decomposition


@dataclass(frozen=True, eq=False)
class DecompositionMaps:
    """``P = (p1, p2, p3)`` as one square matrix and its inverse ``sigma``.

    ``P`` maps wedge coordinates of ``Λ²(g)`` to decomposition coordinates;
    ``sigma`` is assembled from the sections ``σ₊`` and ``σ₋``.
    """

    P: fmpq_mat
    sigma: fmpq_mat
    blocks: tuple[int, int, int]

    def block_slices(self) -> tuple[range, range, range]:
        d1, d2, d3 = self.blocks
        return range(0, d1), range(d1, d1 + d2), range(d1 + d2, d1 + d2 + d3)


def decomposition(cur: CurrentAlgebra) -> DecompositionMaps:
    return cur.cached("P", lambda: _decomposition(cur))


def _decomposition(cur: CurrentAlgebra) -> DecompositionMaps:
    A = cur.A
    n, N = cur.n, cur.N
    gdim = n * N
    g2, g2idx = wedge_basis(gdim, 2)
    a2, a2idx = wedge_basis(n, 2)
    k2, k2idx = wedge_basis(N, 2)
    s2pairs, s2idx = sym2_index(N)
    ia = ca.i_a(A)
    S, W = len(s2pairs), len(k2)
    d1, d2, d3 = cur.block_dims
    if d1 + d2 + d3 != len(g2):
        raise InternalError(f"dimension check fails: {d1}+{d2}+{d3} != {len(g2)}")
    off2, off3 = d1, d1 + d2
    one = A.one()
    ent: dict = {}

    def add(key, val):
        ent[key] = ent.get(key, ZERO) + val

    for col, (u, v) in enumerate(g2):
        i, x = divmod(u, N)
        j, y = divmod(v, N)
        # p1: a_i∧a_j ⊗ x∨y
        if i != j:
            s = 1 if i < j else -1
            add((a2idx[(min(i, j), max(i, j))] * S + sym_pos(s2idx, x, y), col), fmpq(s))
        if x != y:
            s = 1 if x < y else -1
            w = k2idx[(min(x, y), max(x, y))]
            # p2: a_i a_j ⊗ x∧y
            for c, val in A.product(i, j).items():
                add((off2 + c * W + w, col), s * val)
            # p3: (a_i∨a_j - a_i a_j∨1) ⊗ x∧y
            ei, ej = A.e(i), A.e(j)
            vec = [p - q for p, q in zip(ca.sym_vec(n, ei, ej), ca.sym_vec(n, A.mul(ei, ej), one))]
            if not ia.contains(vec):
                raise InternalError("a∨b - ab∨1 is not in I_A")
            for r, c in enumerate(ia.coordinates(vec)):
                if c:
                    add((off3 + r * W + w, col), s * c)
    P = sparse_matrix(len(g2), len(g2), ent)

    half = fmpq(1, 2)
    cols: list[list[fmpq]] = []

    def gw(a, x, b, y):
        return wedge2_vec(cur.gvec(a, x), cur.gvec(b, y))

    ek = [[ONE if t == s else ZERO for t in range(N)] for s in range(N)]
    for (i, j) in a2:
        for (x, y) in s2pairs:
            v1 = gw(A.e(i), ek[x], A.e(j), ek[y])
            v2 = gw(A.e(i), ek[y], A.e(j), ek[x])
            cols.append([half * (p + q) for p, q in zip(v1, v2)])
    for a in range(n):
        for (x, y) in k2:
            v1 = gw(A.e(a), ek[x], one, ek[y])
            v2 = gw(A.e(a), ek[y], one, ek[x])
            cols.append([half * (p - q) for p, q in zip(v1, v2)])
    for row in ia.rows():
        for (x, y) in k2:
            acc = [ZERO] * len(g2)
            for (i, j), c in zip(sym2_index(n)[0], row):
                if not c:
                    continue
                v1 = gw(A.e(i), ek[x], A.e(j), ek[y])
                v2 = gw(A.e(i), ek[y], A.e(j), ek[x])
                acc = [t + c * half * (p - q) for t, p, q in zip(acc, v1, v2)]
            cols.append(acc)
    m = len(g2)
    sigma = fmpq_mat(m, m, [cols[c][r] for r in range(m) for c in range(m)]) if m else zeros(0, 0)
    if P * sigma != identity(m) or sigma * P != identity(m):
        raise InternalError("P is not inverse to the sections")
    return DecompositionMaps(P, sigma, (d1, d2, d3))


def block_embedding(dec: DecompositionMaps, which: Sequence[int]) -> fmpq_mat:
    """Columns of the identity of decomposition coordinates in the given blocks."""
    sl = dec.block_slices()
    idx = [c for b in which for c in sl[b]]
    total = sum(dec.blocks)
    return sparse_matrix(total, len(idx), {(c, t): 1 for t, c in enumerate(idx)})


def block_projection(dec: DecompositionMaps, which: Sequence[int]) -> fmpq_mat:
    """Projection of decomposition coordinates onto the given blocks."""
    sl = dec.block_slices()
    total = sum(dec.blocks)
    return sparse_matrix(total, total, {(c, c): 1 for b in which for c in sl[b]})


def z2_decomposed(cur: CurrentAlgebra) -> Subspace:
    """``Z₂(g)`` from the decomposition, asserted equal to ``ker b_g``."""
    dec = decomposition(cur)
    d1, d2, d3 = dec.blocks
    W = comb(cur.N, 2)
    z2k = kernel_basis(bracket_map(cur.k))
    gens = []
    total = d1 + d2 + d3
    for c in list(range(d1)) + list(range(d1 + d2, total)):
        v = [ZERO] * total
        v[c] = ONE
        gens.append(v)
    for a in range(cur.n):
        for r in z2k.rows():
            v = [ZERO] * total
            for w, c in enumerate(r):
                v[d1 + a * W + w] = c
            gens.append(v)
    z = image_of(span(gens, total), dec.sigma)
    if z != kernel_basis(bracket_map(cur.g)):
        raise InternalError("Z_2(g) is not adapted to the decomposition")
    return z


# ---------------------------------------------------------------- B_2 generators


@dataclass(frozen=True, eq=False)
class B2Report:
    families: tuple[Subspace, Subspace, Subspace, Subspace]  # in Λ²(g)
    total: Subspace
    brute_force: Subspace

    @property
    def ok(self) -> bool:
        return self.total == self.brute_force


def b2_generators(cur: CurrentAlgebra) -> B2Report:
    """The four generating families for ``B₂(g)`` against ``im ∂_g``."""
    return cur.cached("B2gen", lambda: _b2_generators(cur))


def _b2_generators(cur: CurrentAlgebra) -> B2Report:
    A, k = cur.A, cur.k
    n, N = cur.n, cur.N
    dec = decomposition(cur)
    d1, d2, d3 = dec.blocks
    total = d1 + d2 + d3
    a2, a2idx = wedge_basis(n, 2)
    k2, k2idx = wedge_basis(N, 2)
    s2pairs, s2idx = sym2_index(N)
    S, W = len(s2pairs), len(k2)
    one = A.one()
    kp = derived_subalgebra(k).rows()
    ek = [[ONE if t == s else ZERO for t in range(N)] for s in range(N)]
    kvec = lambda d: [d.get(t, ZERO) for t in range(N)]  # noqa: E731
    _, t0 = ca.t_spaces(A)
    ia = ca.i_a(A)
    dk = boundary_partial(k).mat

    def block1(avec, svec):
        v = [ZERO] * total
        for p, a in enumerate(avec):
            if a:
                for s, c in enumerate(svec):
                    if c:
                        v[p * S + s] += a * c
        return v

    fam1, fam2, fam3, fam4 = [], [], [], []
    for p in range(len(a2)):
        avec = [ONE if q == p else ZERO for q in range(len(a2))]
        for z in range(N):
            for x, y in s2pairs:
                sv = [s + t for s, t in zip(ca.sym_vec(N, kvec(k.bracket(z, x)), ek[y]),
                                            ca.sym_vec(N, ek[x], kvec(k.bracket(z, y))))]
                fam1.append(block1(avec, sv))
    for t in t0.rows():
        for x in range(N):
            for y in kp:
                fam2.append(block1(t, ca.sym_vec(N, ek[x], y)))
    t3, t3idx = wedge_basis(N, 3)
    for a in range(n):
        aw = ca.wedge_vec(A.e(a), one)
        for x, y in k2:
            for z in range(N):
                v = block1(aw, ca.sym_vec(N, kvec(k.bracket(x, y)), ek[z]))
                s, st = sort_with_sign((x, y, z))
                if s:
                    col = t3idx[st]
                    for w in range(W):
                        v[d1 + a * W + w] += s * dk[w, col]
                fam3.append(v)
    for r in range(ia.dim):
        for x in range(N):
            for y in kp:
                v = [ZERO] * total
                for w, c in enumerate(wedge2_vec(ek[x], y)):
                    v[d1 + d2 + r * W + w] = c
                fam4.append(v)
    fams = tuple(image_of(span(f, total), dec.sigma) for f in (fam1, fam2, fam3, fam4))
    tot = fams[0]
    for f in fams[1:]:
        tot = join(tot, f)
    brute = image_basis(boundary_partial(cur.g))
    return B2Report(fams, tot, brute)


@dataclass(frozen=True)
class B2PositionReport:
    p12_preserves: bool        # (p1 + p2)(B2) ⊆ B2
    p3_preserves: bool         # p3(B2) ⊆ B2
    p2_image: bool             # p2(B2) = A⊗B2(k)
    p3_image: bool             # p3(B2) = I_A⊗(k∧k')
    fam1_inside: bool          # Λ²(A)⊗k.S²(k) ⊆ B2
    fam2_inside: bool          # T0(A)⊗k∨k' ⊆ B2

    @property
    def ok(self) -> bool:
        return all(vars(self).values())


def b2_positions(cur: CurrentAlgebra) -> B2PositionReport:
    """Containments describing the position of ``B₂(g)`` in the decomposition."""
    dec = decomposition(cur)
    b2 = image_basis(boundary_partial(cur.g))
    d1, d2, d3 = dec.blocks
    total = d1 + d2 + d3
    W = comb(cur.N, 2)
    bdec = image_of(b2, dec.P)
    p12 = image_of(bdec, block_projection(dec, (0, 1)))
    p3 = image_of(bdec, block_projection(dec, (2,)))
    p2 = image_of(bdec, block_projection(dec, (1,)))
    b2k = image_basis(boundary_partial(cur.k))
    want2 = []
    for a in range(cur.n):
        for r in b2k.rows():
            v = [ZERO] * total
            for w, c in enumerate(r):
                v[d1 + a * W + w] = c
            want2.append(v)
    fams = b2_generators(cur).families
    ia = ca.i_a(cur.A)
    kp = derived_subalgebra(cur.k).rows()
    want3 = []
    for r in range(ia.dim):
        for x in range(cur.N):
            ex = [ONE if t == x else ZERO for t in range(cur.N)]
            for y in kp:
                v = [ZERO] * total
                for w, c in enumerate(wedge2_vec(ex, y)):
                    v[d1 + d2 + r * W + w] = c
                want3.append(v)
    return B2PositionReport(
        p12.is_subspace_of(bdec),
        p3.is_subspace_of(bdec),
        p2 == span(want2, total),
        p3 == span(want3, total),
        fams[0].is_subspace_of(b2),
        fams[1].is_subspace_of(b2),
    )


# ---------------------------------------------------------------- cochains


@dataclass(frozen=True, eq=False)
class CochainTriple:
    """``f = f1∘p1 + f2∘p2 + f3∘p3`` with values in ``Q^m``."""

    f1: fmpq_mat
    f2: fmpq_mat
    f3: fmpq_mat

    @property
    def m(self) -> int:
        return self.f1.nrows()

    def stacked(self) -> fmpq_mat:
        return hstack([self.f1, self.f2, self.f3], self.m)

    def __add__(self, other: "CochainTriple") -> "CochainTriple":
        return CochainTriple(self.f1 + other.f1, self.f2 + other.f2, self.f3 + other.f3)

    def __sub__(self, other: "CochainTriple") -> "CochainTriple":
        return CochainTriple(self.f1 - other.f1, self.f2 - other.f2, self.f3 - other.f3)

    def only(self, *blocks: int) -> "CochainTriple":
        parts = [self.f1, self.f2, self.f3]
        return CochainTriple(*[p if i in blocks else zeros(p.nrows(), p.ncols()) for i, p in enumerate(parts)])

    def is_zero(self) -> bool:
        return is_zero(self.f1) and is_zero(self.f2) and is_zero(self.f3)


def zero_triple(cur: CurrentAlgebra, m: int = 1) -> CochainTriple:
    d1, d2, d3 = cur.block_dims
    return CochainTriple(zeros(m, d1), zeros(m, d2), zeros(m, d3))


def triple_from_stacked(cur: CurrentAlgebra, mat: fmpq_mat) -> CochainTriple:
    d1, d2, d3 = cur.block_dims
    return CochainTriple(select_columns(mat, range(d1)), select_columns(mat, range(d1, d1 + d2)),
                         select_columns(mat, range(d1 + d2, d1 + d2 + d3)))


def assemble(cur: CurrentAlgebra, f: CochainTriple) -> fmpq_mat:
    """The cochain ``f`` on ``Λ²(g)``: an ``m × dim Λ²(g)`` matrix."""
    return f.stacked() * decomposition(cur).P


def decompose(cur: CurrentAlgebra, cochain: fmpq_mat) -> CochainTriple:
    """Inverse of :func:`assemble`."""
    return triple_from_stacked(cur, cochain * decomposition(cur).sigma)


def to_ce(mat: fmpq_mat) -> list[fmpq]:
    """``m × dim`` cochain matrix -> Chevalley–Eilenberg coordinates (tuple major)."""
    return mat.transpose().entries()


def from_ce(vec: Sequence, m: int) -> fmpq_mat:
    return fmpq_mat(len(vec) // m, m, [to_q(x) for x in vec]).transpose()


def random_triple(cur: CurrentAlgebra, m: int = 1, rng: random.Random | None = None,
                  lo: int = -3, hi: int = 3) -> CochainTriple:
    rng = rng or random.Random(0)
    d1, d2, d3 = cur.block_dims
    mk = lambda c: fmpq_mat(m, c, [rng.randint(lo, hi) for _ in range(m * c)])  # noqa: E731
    return CochainTriple(mk(d1), mk(d2), mk(d3))


def _f1_block(cur: CurrentAlgebra, f1: fmpq_mat, avec: Sequence) -> fmpq_mat:
    """``f̃1(ξ)`` for ``ξ ∈ Λ²(A)`` as an ``m × S`` matrix of ``S²(k)`` coordinates."""
    S = comb(cur.N + 1, 2)
    out = zeros(f1.nrows(), S)
    for p, c in enumerate(avec):
        if c:
            out = out + select_columns(f1, range(p * S, (p + 1) * S)) * to_q(c)
    return out


def _f2_block(cur: CurrentAlgebra, f2: fmpq_mat, a: int) -> fmpq_mat:
    W = comb(cur.N, 2)
    return select_columns(f2, range(a * W, (a + 1) * W))


def _f3_block(cur: CurrentAlgebra, f3: fmpq_mat, r: int) -> fmpq_mat:
    W = comb(cur.N, 2)
    return select_columns(f3, range(r * W, (r + 1) * W))


@dataclass(frozen=True)
class CocycleReport:
    is_cocycle: bool
    conditions: dict           # "a".."d" -> bool
    brute_force: bool

    @property
    def violated(self) -> list[str]:
        return [c for c, ok in self.conditions.items() if not ok]


def cocycle_conditions(cur: CurrentAlgebra, f: CochainTriple) -> dict[str, bool]:
    """Conditions (a)–(d) evaluated from ``A``- and ``k``-data only."""
    A, k = cur.A, cur.k
    n = cur.n
    a2, _ = wedge_basis(n, 2)
    inv = invariance_matrix(k)
    pair_sym = kprime_pairing(k)
    pair_alt = kprime_pairing(k, alternating=True)
    gam = gamma_matrix(k)
    d2 = ce_differential(k, make_module(k, "trivial"), 2).mat
    one = A.one()
    L = len(a2)
    unit = lambda p: [ONE if q == p else ZERO for q in range(L)]  # noqa: E731
    cond_a = all(is_zero(inv * _f1_block(cur, f.f1, unit(p)).transpose()) for p in range(L))
    _, t0 = ca.t_spaces(A)
    cond_b = all(is_zero(pair_sym * _f1_block(cur, f.f1, t).transpose()) for t in t0.rows())
    cond_c = True
    for a in range(n):
        kap = _f1_block(cur, f.f1, ca.wedge_vec(A.e(a), one))
        lhs = d2 * _f2_block(cur, f.f2, a).transpose()
        rhs = gam * kap.transpose()
        if lhs != rhs:
            cond_c = False
            break
    ia = ca.i_a(A)
    cond_d = all(is_zero(pair_alt * _f3_block(cur, f.f3, r).transpose()) for r in range(ia.dim))
    return {"a": cond_a, "b": cond_b, "c": cond_c, "d": cond_d}


def is_cocycle_brute(cur: CurrentAlgebra, f: CochainTriple) -> bool:
    """Vanishing of the assembled cochain on ``im ∂_g``."""
    return is_zero(assemble(cur, f) * boundary_partial(cur.g).mat)


def cocycle_check(cur: CurrentAlgebra, f: CochainTriple) -> CocycleReport:
    """Both verdicts; a disagreement is an internal error."""
    cond = cocycle_conditions(cur, f)
    brute = is_cocycle_brute(cur, f)
    verdict = all(cond.values())
    if verdict != brute:
        raise InternalError(f"conditions {cond} disagree with brute force ({brute})")
    return CocycleReport(verdict, cond, brute)


# ---------------------------------------------------------------- splitting and coboundaries


def split_f1(cur: CurrentAlgebra, f: CochainTriple) -> tuple[CochainTriple, CochainTriple]:
    """``f1 = f1⁰ + f1¹`` with ``f1⁰`` vanishing on ``g×g'`` and ``f̃1¹``
    invariant-valued, killing ``T0(A)``; both returned as triples with only
    the first block set."""
    if not cocycle_check(cur, f).is_cocycle:
        raise StructureError("split_f1 needs a cocycle")
    k = cur.k
    S = comb(cur.N + 1, 2)
    L = comb(cur.n, 2)
    inv = sym2_invariants(k)
    R = kprime_pairing(k)
    lifts = complement_representatives(inv.invariants, inv.quotient_forms)
    m = f.m
    f11 = zeros(m, L * S)
    if lifts:
        lift = fmpq_mat(len(lifts), S, [x for r in lifts for x in r]).transpose()  # S × r
        RL = R * lift
        for p in range(L):
            blk = select_columns(f.f1, range(p * S, (p + 1) * S))  # m × S
            X = solve(RL, R * blk.transpose())
            if X is None:
                raise InternalError("restriction to k∨k' is not in the image of the invariants")
            new = (lift * X).transpose()
            for r in range(m):
                for s in range(S):
                    f11[r, p * S + s] = new[r, s]
    d1, d2, d3 = cur.block_dims
    one = CochainTriple(f11, zeros(m, d2), zeros(m, d3))
    zero = CochainTriple(f.f1 - f11, zeros(m, d2), zeros(m, d3))
    return zero, one


def vanishes_on_g_gprime(cur: CurrentAlgebra, f: CochainTriple) -> bool:
    """Whether the assembled cochain vanishes on all ``u ∧ v`` with ``v ∈ g'``."""
    mat = assemble(cur, f)
    gp = derived_subalgebra(cur.g).rows()
    dim = cur.g.dim
    for u in range(dim):
        eu = [ONE if t == u else ZERO for t in range(dim)]
        for v in gp:
            w = wedge2_vec(eu, v)
            if not is_zero(mat * fmpq_mat(len(w), 1, w)):
                return False
    return True


@dataclass(frozen=True)
class CoboundaryReport:
    is_coboundary: bool
    witness: fmpq_mat | None     # ℓ as an m × dim g matrix
    reason: str


def coboundary_test(cur: CurrentAlgebra, f: CochainTriple) -> CoboundaryReport:
    """``f = d_g ℓ`` iff ``f1 = f3 = 0`` and ``f̃2(a) = d_k ℓ(a)`` for all ``a``."""
    if not is_zero(f.f1) or not is_zero(f.f3):
        return CoboundaryReport(False, None, "f1 or f3 is nonzero")
    k = cur.k
    N, m = cur.N, f.m
    d1k = ce_differential(k, make_module(k, "trivial"), 1).mat  # W × N
    ell = zeros(m, cur.n * N)
    for a in range(cur.n):
        X = solve(d1k, _f2_block(cur, f.f2, a).transpose())
        if X is None:
            return CoboundaryReport(False, None, f"f2(a_{a}) is not a coboundary on k")
        for r in range(m):
            for x in range(N):
                ell[r, a * N + x] = X[x, r]
    dg = ce_differential(cur.g, make_module(cur.g, "trivial", m), 1)
    lhs = dg.mat * fmpq_mat(dg.cols, 1, to_ce(ell))
    if lhs.entries() != to_ce(assemble(cur, f)):
        raise InternalError("recovered ℓ does not satisfy d_g ℓ = f")
    return CoboundaryReport(True, ell, "")


# ---------------------------------------------------------------- coupled cocycles


@dataclass(frozen=True, eq=False)
class CoupledResult:
    cochain: CochainTriple
    report: CocycleReport
    coupled: bool


def coupled_construct(cur: CurrentAlgebra, kappa: fmpq_mat, eta: Sequence) -> CoupledResult:
    """``f̃1 = γ_A ⊗ κ`` and ``f̃2 = -d_A ⊗ η`` with ``z = Ω¹(A)``.

    Requires ``κ`` invariant and ``d_k η = Γ(κ)``; ``eta`` is in ``C²(k)``
    coordinates.
    """
    A, k = cur.A, cur.k
    if not is_invariant(k, kappa):
        raise StructureError("κ is not invariant")
    d2 = ce_differential(k, make_module(k, "trivial"), 2).mat
    eta = [to_q(x) for x in eta]
    g = (gamma_matrix(k) * fmpq_mat(kappa.nrows() * (kappa.nrows() + 1) // 2, 1, sym_coords(kappa))).entries()
    if (d2 * fmpq_mat(len(eta), 1, eta)).entries() != g:
        raise StructureError("η is not a primitive of Γ(κ)")
    km = ca.kaehler(A)
    gA = ca.gamma_A(A).mat              # ω × C(n,2)
    dA = km.d.mat                       # ω × n
    m = km.dim
    kc = sym_coords(kappa)
    S, W = len(kc), len(eta)
    L = gA.ncols()
    f1 = zeros(m, L * S)
    for r in range(m):
        for p in range(L):
            if gA[r, p]:
                for s in range(S):
                    f1[r, p * S + s] = gA[r, p] * kc[s]
    f2 = zeros(m, cur.n * W)
    for r in range(m):
        for a in range(cur.n):
            if dA[r, a]:
                for w in range(W):
                    f2[r, a * W + w] = -eta[w] * dA[r, a]
    _, _, d3 = cur.block_dims
    f = CochainTriple(f1, f2, zeros(m, d3))
    rep = cocycle_check(cur, f)
    if not rep.is_cocycle:
        raise InternalError("the coupled construction is not a cocycle")
    coupled = not cocycle_check(cur, f.only(0)).is_cocycle
    expect = bool(km.exact_image().dim) and any(g)
    if coupled != expect:
        raise InternalError("coupledness disagrees with d_A(A) ≠ 0 and Γ(κ) ≠ 0")
    return CoupledResult(f, rep, coupled)


@dataclass(frozen=True)
class CoupledSearch:
    dim_w: int      # cocycles with f3 = 0
    dim_w1: int     # cocycles with only f1
    dim_w2: int     # cocycles with only f2
    exists: bool
    predicted: bool  # d_A(A) ≠ 0 and B³_Γ ≠ 0


def has_coupled_cocycles(cur: CurrentAlgebra) -> CoupledSearch:
    """Brute-force search over scalar cocycles."""
    dec = decomposition(cur)
    z = cohomology(cur.g, make_module(cur.g, "trivial"), 2).cocycles
    zdec = image_of(z, dec.sigma.transpose())

    def restricted(blocks):
        return meet(zdec, image_basis(block_embedding(dec, blocks)))

    w, w1, w2 = restricted((0, 1)), restricted((0,)), restricted((1,))
    exists = w.dim > join(w1, w2).dim
    predicted = bool(ca.kaehler(cur.A).exact_image().dim) and bool(exact_forms(cur.k).b3_gamma.dim)
    return CoupledSearch(w.dim, w1.dim, w2.dim, exists, predicted)


# ---------------------------------------------------------------- the main sequence


@dataclass(frozen=True)
class SequenceReport:
    dim_h2_quotient_13: int
    dim_lin_a_h2k: int
    dim_lin_pair: int
    dim_h2_g: int
    phi_injective: bool
    psi_kills_phi: bool
    ker_psi_is_im_phi: bool
    psi_surjective: bool
    psi_in_pair_space: bool
    pullbacks_ok: bool

    @property
    def identity_ok(self) -> bool:
        return self.dim_h2_g == self.dim_h2_quotient_13 + self.dim_lin_a_h2k + self.dim_lin_pair

    @property
    def exactness_ok(self) -> bool:
        return all((self.identity_ok, self.phi_injective, self.psi_kills_phi, self.ker_psi_is_im_phi,
                    self.psi_surjective, self.psi_in_pair_space, self.pullbacks_ok))


def abelianization(k: LieAlgebra) -> tuple[int, fmpq_mat]:
    """``dim k/k'`` and the quotient map ``k -> k/k'``."""
    q = quotient_map(k.dim, derived_subalgebra(k)).mat
    return q.nrows(), q


def h2_quotient_13(cur: CurrentAlgebra) -> list[fmpq_mat]:
    """Pull-backs to ``g`` of the alternating forms on ``g/g' = A⊗(k/k')``
    that vanish on the ``(A∨1)⊗Λ²(k/k')`` block (row vectors on ``Λ²(g)``)."""
    from .catalog import abelian
    r, q = abelianization(cur.k)
    n, N = cur.n, cur.N
    quo = build_current(cur.A, abelian(r))
    qdec = decomposition(quo)
    # Λ²(id_A ⊗ q): Λ²(g) -> Λ²(g/g')
    qg = zeros(n * r, n * N)
    for i in range(n):
        for a in range(r):
            for x in range(N):
                qg[i * r + a, i * N + x] = q[a, x]
    g2, _ = wedge_basis(n * N, 2)
    cols = []
    for u, v in g2:
        cu = [qg[t, u] for t in range(n * r)]
        cv = [qg[t, v] for t in range(n * r)]
        cols.append(wedge2_vec(cu, cv))
    rows2 = comb(n * r, 2)
    lam = fmpq_mat(rows2, len(g2), [cols[c][t] for t in range(rows2) for c in range(len(g2))]) if rows2 else zeros(0, len(g2))
    out = []
    sl = qdec.block_slices()
    for b in (0, 2):
        for c in sl[b]:
            e = zeros(1, sum(qdec.blocks))
            e[0, c] = 1
            out.append(e * qdec.P * lam)
    return out


def pair_space_dim(cur: CurrentAlgebra) -> int:
    """``dim Lin((Ω¹, d_A A), (Z³_Γ, B³_Γ))``."""
    km = ca.kaehler(cur.A)
    om, de = km.dim, km.exact_image().dim
    ef = exact_forms(cur.k)
    return (om - de) * ef.z3_gamma.dim + de * ef.b3_gamma.dim


def psi_of(cur: CurrentAlgebra, cochain_row: fmpq_mat) -> list[fmpq]:
    """``Γ ∘ f̃1`` for a scalar cochain, flattened pair-major over ``Λ²(A)``."""
    f = decompose(cur, cochain_row)
    gam = gamma_matrix(cur.k)
    S = comb(cur.N + 1, 2)
    out = []
    for p in range(comb(cur.n, 2)):
        blk = select_columns(f.f1, range(p * S, (p + 1) * S))
        out.extend((gam * blk.transpose()).entries())
    return out


def h2_sequence(cur: CurrentAlgebra) -> SequenceReport:
    """Dimension identity and exactness checks of
    ``0 -> H²(g/g')₁,₃ ⊕ Lin(A, H²(k)) -> H²(g) -> Lin-pair -> 0``."""
    return cur.cached("sequence", lambda: _h2_sequence(cur))


def _h2_sequence(cur: CurrentAlgebra) -> SequenceReport:
    k, g = cur.k, cur.g
    n, N = cur.n, cur.N
    triv_g = make_module(g, "trivial")
    hg = cohomology(g, triv_g, 2)
    partial = boundary_partial(g).mat
    # first summand, pulled back through g -> g/g'
    pulls = h2_quotient_13(cur)
    pull_ok = True
    for row in pulls:
        if not is_zero(row * partial):
            pull_ok = False
        if not is_zero(decompose(cur, row).f2) or not vanishes_on_g_gprime(cur, decompose(cur, row)):
            pull_ok = False
    # second summand: f̃2 = e_a ⊗ ω for ω a representative of H²(k)
    hk = cohomology(k, make_module(k, "trivial"), 2)
    d1, d2, d3 = cur.block_dims
    W = comb(N, 2)
    lin = []
    for a in range(n):
        for rep in hk.representatives:
            f2 = zeros(1, d2)
            for w, c in enumerate(rep):
                f2[0, a * W + w] = c
            lin.append(assemble(cur, CochainTriple(zeros(1, d1), f2, zeros(1, d3))))
    phi_vectors = [hg.class_of(r.entries()) for r in pulls + lin]
    phi_space = span(phi_vectors, hg.dim)
    phi_injective = phi_space.dim == len(phi_vectors)
    # Ψ on representatives of H²(g)
    psi_cols = [psi_of(cur, fmpq_mat(1, len(rep), list(rep))) for rep in hg.representatives]
    plen = comb(n, 2) * comb(N, 3)
    psi = fmpq_mat(plen, hg.dim, [psi_cols[c][r] for r in range(plen) for c in range(hg.dim)]) if hg.dim else zeros(plen, 0)
    psi_kills_phi = all(not any(psi_of(cur, r)) for r in pulls + lin)
    ker_psi = kernel_basis(psi)
    psi_surj = rank(psi) == pair_space_dim(cur)
    in_pair = all(_in_pair_space(cur, col) for col in psi_cols)
    return SequenceReport(len(pulls), len(lin), pair_space_dim(cur), hg.dim, phi_injective,
                          psi_kills_phi, ker_psi == phi_space, psi_surj, in_pair, pull_ok)


def _in_pair_space(cur: CurrentAlgebra, flat: Sequence) -> bool:
    """Whether ``φ: Λ²(A) -> C³(k)`` kills ``T0``, lands in ``Z³_Γ`` and maps
    ``A∧1`` into ``B³_Γ``."""
    c3 = comb(cur.N, 3)
    L = comb(cur.n, 2)
    phi = fmpq_mat(L, c3, list(flat)).transpose() if L and c3 else zeros(c3, L)
    ef = exact_forms(cur.k)
    _, t0 = ca.t_spaces(cur.A)
    for t in t0.rows():
        if not is_zero(phi * fmpq_mat(L, 1, t)):
            return False
    for p in range(L):
        if c3 and not ef.z3_gamma.contains([phi[r, p] for r in range(c3)]):
            return False
    one = cur.A.one()
    for a in range(cur.n):
        v = (phi * fmpq_mat(L, 1, ca.wedge_vec(cur.A.e(a), one))).entries() if L else [ZERO] * c3
        if c3 and not ef.b3_gamma.contains(v):
            return False
    return True


# ---------------------------------------------------------------- Zusmanovich and universal cocycle


@dataclass(frozen=True)
class ZusmanovichReport:
    terms: dict
    predicted: int
    brute_force: int

    @property
    def ok(self) -> bool:
        return self.predicted == self.brute_force


def coinvariants_dim(k: LieAlgebra) -> int:
    """``dim S²(k)/k.S²(k)``, from the span of ``z.(x∨y)``."""
    N = k.dim
    pairs, _ = sym2_index(N)
    kvec = lambda d: [d.get(t, ZERO) for t in range(N)]  # noqa: E731
    ek = [[ONE if t == s else ZERO for t in range(N)] for s in range(N)]
    gens = []
    for z in range(N):
        for x, y in pairs:
            gens.append([s + t for s, t in zip(ca.sym_vec(N, kvec(k.bracket(z, x)), ek[y]),
                                               ca.sym_vec(N, ek[x], kvec(k.bracket(z, y))))])
    return len(pairs) - span(gens, len(pairs)).dim


def zusmanovich_dims(cur: CurrentAlgebra) -> ZusmanovichReport:
    """``A⊗H₂(k) ⊕ HC₁(A)⊗B(k) ⊕ Λ²(k/k')⊗I_A ⊕ S²(k/k')⊗T(A)`` against
    ``dim H₂(g)``."""
    A, k = cur.A, cur.k
    r, _ = abelianization(k)
    t, _ = ca.t_spaces(A)
    terms = {
        "A⊗H2(k)": A.dim * homology_h2(k).dim,
        "HC1(A)⊗B(k)": ca.i_a_and_hc1(A).hc1_dim * coinvariants_dim(k),
        "Λ2(k/k')⊗I_A": comb(r, 2) * ca.i_a(A).dim,
        "S2(k/k')⊗T(A)": comb(r + 1, 2) * t.dim,
    }
    return ZusmanovichReport(terms, sum(terms.values()), homology_h2(cur.g).dim)


@dataclass(frozen=True, eq=False)
class UniversalCocycle:
    projection: fmpq_mat   # Λ²(g) -> Λ²(g), onto Z₂(g)
    cocycle: fmpq_mat      # Λ²(g) -> H₂(g) coordinates
    spans_h2: bool


def _z2k_projection(k: LieAlgebra) -> fmpq_mat:
    """A projection of ``Λ²(k)`` onto ``Z₂(k)``."""
    b = bracket_map(k).mat
    W = b.ncols()
    if W == 0:
        return zeros(0, 0)
    img = image_basis(b)
    # pick columns of b forming a basis of its image
    chosen, acc = [], span([], b.nrows())
    for c in range(W):
        col = [b[r, c] for r in range(b.nrows())]
        if not acc.contains(col):
            chosen.append(c)
            acc = join(acc, span([col], b.nrows()))
        if acc.dim == img.dim:
            break
    bc = select_columns(b, chosen)
    X = solve(bc, b) if chosen else zeros(0, W)
    emb = sparse_matrix(W, len(chosen), {(c, t): 1 for t, c in enumerate(chosen)})
    return identity(W) - emb * X


def universal_cocycle(cur: CurrentAlgebra) -> UniversalCocycle:
    dec = decomposition(cur)
    d1, d2, d3 = dec.blocks
    W = comb(cur.N, 2)
    pk = _z2k_projection(cur.k)
    blk = zeros(d1 + d2 + d3, d1 + d2 + d3)
    for c in range(d1):
        blk[c, c] = 1
    for c in range(d1 + d2, d1 + d2 + d3):
        blk[c, c] = 1
    for a in range(cur.n):
        for i in range(W):
            for j in range(W):
                if pk[i, j]:
                    blk[d1 + a * W + i, d1 + a * W + j] = pk[i, j]
    proj = dec.sigma * blk * dec.P
    h = homology_h2(cur.g)
    z2, b2 = h.cycles, h.boundaries
    if image_basis(proj) != z2 or proj * proj != proj:
        raise InternalError("f̃^u is not a projection onto Z_2(g)")
    if not image_of(b2, proj).is_subspace_of(b2):
        raise InternalError("f̃^u does not preserve B_2(g)")
    q = h.quotient.mat
    coords = image_of(z2, q).coordinate_map()
    fu = coords * q * proj
    partial = boundary_partial(cur.g).mat
    if not is_zero(fu * partial):
        raise InternalError("f^u does not vanish on B_2(g)")
    hg = cohomology(cur.g, make_module(cur.g, "trivial"), 2)
    classes = [hg.class_of([fu[r, c] for c in range(fu.ncols())]) for r in range(fu.nrows())]
    spans = span(classes, hg.dim).dim == hg.dim == fu.nrows()
    return UniversalCocycle(proj, fu, spans)

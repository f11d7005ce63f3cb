"""Invariant symmetric forms, the Koszul map and the transfer sequence.

Symmetric forms on ``k`` are stored in ``S²`` coordinates ``κ(e_i, e_j)``,
``i <= j`` (the ``sym2`` module of :mod:`currentcoh.lie`); alternating
``p``-forms in wedge coordinates on increasing tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from flint import fmpq, fmpq_mat

from .lie import (
    KModule,
    LieAlgebra,
    ce_differential,
    center,
    cochain_dim,
    cochain_module,
    cohomology,
    derived_subalgebra,
    make_module,
    sort_with_sign,
    sym2_index,
    sym_pos,
    wedge_basis,
)
from .linalg import (
    ZERO,
    InternalError,
    StructureError,
    Subspace,
    full_space,
    identity,
    image_basis,
    image_of,
    is_zero,
    kernel_basis,
    meet,
    preimage,
    rank,
    rows_of,
    solve,
    sparse_matrix,
    span,
    to_q,
    vstack,
    zeros,
)


# ---------------------------------------------------------------- coordinates


def sym_coords(mat: fmpq_mat) -> list[fmpq]:
    """Symmetric matrix -> ``S²`` coordinates (no symmetry check)."""
    n = mat.nrows()
    pairs, _ = sym2_index(n)
    return [mat[i, j] for i, j in pairs]


def sym_matrix(n: int, coords: Sequence) -> fmpq_mat:
    pairs, _ = sym2_index(n)
    m = zeros(n, n)
    for (i, j), v in zip(pairs, coords):
        m[i, j] = to_q(v)
        m[j, i] = to_q(v)
    return m


def alt_coords(mat: fmpq_mat) -> list[fmpq]:
    n = mat.nrows()
    tuples, _ = wedge_basis(n, 2)
    return [mat[i, j] for i, j in tuples]


def alt_matrix(n: int, coords: Sequence) -> fmpq_mat:
    tuples, _ = wedge_basis(n, 2)
    m = zeros(n, n)
    for (i, j), v in zip(tuples, coords):
        m[i, j] = to_q(v)
        m[j, i] = -to_q(v)
    return m


def _col(v: Sequence) -> fmpq_mat:
    return fmpq_mat(len(v), 1, [to_q(x) for x in v])


# ---------------------------------------------------------------- invariance


def invariance_matrix(lie: LieAlgebra) -> fmpq_mat:
    """Stacked ``sym2`` actions; its kernel is ``Sym²(k)^k``."""
    def build():
        mod = make_module(lie, "sym2")
        s = mod.dim
        if lie.dim == 0:
            return zeros(0, s)
        return vstack(list(mod.action), s)
    return lie.cached("invariance", build)


def is_invariant(lie: LieAlgebra, kappa: fmpq_mat) -> bool:
    """Symmetric and ``κ([x,y],z) + κ(y,[x,z]) = 0`` on basis triples."""
    if kappa != kappa.transpose():
        return False
    return is_zero(invariance_matrix(lie) * _col(sym_coords(kappa)))


def killing_form(lie: LieAlgebra) -> fmpq_mat:
    n = lie.dim
    ads = [lie.ad(i) for i in range(n)]
    def tr(m):
        return sum((m[i, i] for i in range(n)), ZERO)
    return fmpq_mat(n, n, [tr(ads[i] * ads[j]) for i in range(n) for j in range(n)])


def kprime_pairing(lie: LieAlgebra, alternating: bool = False) -> fmpq_mat:
    """Rows ``(x, y)`` with ``x`` a basis vector of ``k`` and ``y`` in the
    echelon basis of ``k'``; the row evaluates a form (``S²`` or wedge
    coordinates) at ``(x, y)``."""
    key = ("kprime_alt" if alternating else "kprime_sym")

    def build():
        n = lie.dim
        kp = derived_subalgebra(lie).rows()
        if alternating:
            cols, idx = wedge_basis(n, 2)
        else:
            cols, idx = sym2_index(n)
        ent = {}
        r = 0
        for x in range(n):
            for y in kp:
                for l, c in enumerate(y):
                    if not c:
                        continue
                    if alternating:
                        if l == x:
                            continue
                        s = 1 if x < l else -1
                        key2 = (r, idx[(min(x, l), max(x, l))])
                        ent[key2] = ent.get(key2, ZERO) + s * c
                    else:
                        key2 = (r, sym_pos(idx, x, l))
                        ent[key2] = ent.get(key2, ZERO) + c
                r += 1
        return sparse_matrix(n * len(kp), len(cols), ent)
    return lie.cached(key, build)


@dataclass(frozen=True, eq=False)
class InvariantFormSpace:
    """``Sym²(k)^k`` with its subspaces ``Sym²(k/k')`` and exact forms."""

    algebra: LieAlgebra
    invariants: Subspace     # in S² coordinates
    quotient_forms: Subspace  # forms vanishing on k × k'
    exact: Subspace

    @property
    def dim(self) -> int:
        return self.invariants.dim

    def matrices(self) -> list[fmpq_mat]:
        return [sym_matrix(self.algebra.dim, r) for r in self.invariants.rows()]


def sym2_invariants(lie: LieAlgebra) -> InvariantFormSpace:
    def build():
        inv = kernel_basis(invariance_matrix(lie))
        quot = kernel_basis(kprime_pairing(lie))
        if not quot.is_subspace_of(inv):
            raise InternalError("a form vanishing on k × k' is not invariant")
        ex = exact_forms(lie).exact
        return InvariantFormSpace(lie, inv, quot, ex)
    return lie.cached("invforms", build)


# ---------------------------------------------------------------- Koszul map


def gamma_matrix(lie: LieAlgebra) -> fmpq_mat:
    """``Γ``: ``S²`` coordinates -> ``C³(k)``, ``Γ(κ)(x,y,z) = κ([x,y], z)``."""
    def build():
        n = lie.dim
        t3, _ = wedge_basis(n, 3)
        _, sidx = sym2_index(n)
        ent = {}
        for r, (i, j, k) in enumerate(t3):
            for l, c in lie.bracket(i, j).items():
                key = (r, sym_pos(sidx, l, k))
                ent[key] = ent.get(key, ZERO) + c
        return sparse_matrix(len(t3), len(sidx), ent)
    return lie.cached("Gamma", build)


def koszul(lie: LieAlgebra, kappa: fmpq_mat) -> list[fmpq]:
    """``Γ(κ)`` in ``C³`` coordinates; rejects non-invariant ``κ`` and asserts
    that the trilinear map is alternating and closed."""
    if not is_invariant(lie, kappa):
        raise StructureError("Γ needs an invariant symmetric form")
    n = lie.dim

    def raw(x, y, z):
        return sum((c * kappa[l, z] for l, c in lie.bracket(x, y).items()), ZERO)

    for x, y, z in product(range(n), repeat=3):
        if raw(x, y, z) != -raw(y, x, z) or raw(x, y, z) != -raw(x, z, y):
            raise InternalError(f"Γ(κ) is not alternating at {(x, y, z)}")
    g = (gamma_matrix(lie) * _col(sym_coords(kappa))).entries() if lie.dim >= 3 else []
    d3 = ce_differential(lie, make_module(lie, "trivial"), 3)
    if g and d3.rows and not is_zero(d3.mat * _col(g)):
        raise InternalError("Γ(κ) is not closed")
    return g


@dataclass(frozen=True, eq=False)
class ExactForms:
    invariants: Subspace
    exact: Subspace          # Γ^{-1}(B³) ∩ Sym²(k)^k
    kernel: Subspace         # ker Γ on invariants
    z3_gamma: Subspace       # im Γ in C³
    b3_gamma: Subspace       # B³ ∩ im Γ
    im_gamma_dim: int        # dim of the image of γ in H³

    @property
    def dims(self) -> dict[str, int]:
        return {"invariants": self.invariants.dim, "exact": self.exact.dim,
                "kernel": self.kernel.dim, "Z3_Gamma": self.z3_gamma.dim,
                "B3_Gamma": self.b3_gamma.dim, "im_gamma": self.im_gamma_dim}


def exact_forms(lie: LieAlgebra) -> ExactForms:
    """Exact invariant forms and ``Z³_Γ``, ``B³_Γ``.

    Asserts ``ker Γ = Sym²(k/k')`` and the dimension relations with
    ``H¹(k,k*)/H²(k)`` and ``Z³_Γ/B³_Γ``.
    """
    return lie.cached("exactforms", lambda: _exact_forms(lie))


def _exact_forms(lie: LieAlgebra) -> ExactForms:
    inv = kernel_basis(invariance_matrix(lie))
    triv = make_module(lie, "trivial")
    c3 = cochain_dim(lie, triv, 3)
    gm = gamma_matrix(lie)
    b3 = cohomology(lie, triv, 3).coboundaries if c3 else span([], 0)
    z3g = image_of(inv, gm)
    b3g = meet(b3, z3g)
    ex = meet(inv, preimage(b3, gm)) if c3 else inv
    ker = meet(inv, kernel_basis(gm)) if c3 else inv
    quot = kernel_basis(kprime_pairing(lie))
    if ker != quot:
        raise InternalError("ker Γ differs from Sym²(k/k')")
    h1 = cohomology(lie, make_module(lie, "coadjoint"), 1).dim
    h2 = cohomology(lie, triv, 2).dim
    if ex.dim != h1 - h2:
        raise InternalError(f"dim exact forms {ex.dim} != dim H¹(k,k*) - dim H²(k) = {h1 - h2}")
    if z3g.dim != inv.dim - ker.dim or b3g.dim != ex.dim - ker.dim:
        raise InternalError("Z³_Γ or B³_Γ has the wrong dimension")
    im_gamma = inv.dim - ex.dim
    if im_gamma != z3g.dim - b3g.dim:
        raise InternalError("im γ is not Z³_Γ/B³_Γ")
    return ExactForms(inv, ex, ker, z3g, b3g, im_gamma)


def primitive(lie: LieAlgebra, kappa: fmpq_mat) -> list[fmpq] | None:
    """Some ``η ∈ C²(k)`` with ``d η = Γ(κ)``, or ``None`` if ``κ`` is not exact."""
    g = koszul(lie, kappa)
    d2 = ce_differential(lie, make_module(lie, "trivial"), 2)
    if not g:
        return [ZERO] * d2.cols
    x = solve(d2.mat, _col(g))
    return None if x is None else x.entries()


# ---------------------------------------------------------------- centroid


@dataclass(frozen=True)
class CentroidReport:
    cent: int
    cent0: int
    cent_red: int
    cent_plus: int | None = None
    cent0_plus: int | None = None


def _end_index(n):
    return lambda i, j: i * n + j  # A[i, j] in row-major coordinates


def centroid(lie: LieAlgebra, kappa0: fmpq_mat | None = None) -> CentroidReport:
    """``Cent(k)``, ``Cent_0(k)`` and ``Cent_red(k)``; with a nondegenerate
    invariant ``κ_0`` also the symmetric parts and the comparisons with
    ``Sym²(k)^k``, ``Sym²(k/k')`` and ``Z³_Γ``."""
    n = lie.dim
    nn = n * n
    idx = _end_index(n)
    # [A, ad x] = 0 for all basis x, as linear equations in the entries of A
    ent = {}
    r = 0
    for x in range(n):
        ad = lie.ad(x)
        for i in range(n):
            for j in range(n):
                # (A ad_x - ad_x A)[i, j] = Σ_l A[i,l] ad[l,j] - ad[i,l] A[l,j]
                for l in range(n):
                    if ad[l, j]:
                        ent[(r, idx(i, l))] = ent.get((r, idx(i, l)), ZERO) + ad[l, j]
                    if ad[i, l]:
                        ent[(r, idx(l, j))] = ent.get((r, idx(l, j)), ZERO) - ad[i, l]
                r += 1
    cent = kernel_basis(sparse_matrix(r, nn, ent))
    # Cent_0: A kills k' and maps into z(k)
    kp = derived_subalgebra(lie).rows()
    z_ann = _annihilator_rows(center(lie), n)
    ent0, r0 = {}, 0
    for y in kp:
        for i in range(n):
            for l, c in enumerate(y):
                if c:
                    ent0[(r0, idx(i, l))] = c
            r0 += 1
    for w in z_ann:
        for j in range(n):
            for i, c in enumerate(w):
                if c:
                    ent0[(r0, idx(i, j))] = c
            r0 += 1
    cent0 = kernel_basis(sparse_matrix(r0, nn, ent0))
    if not cent0.is_subspace_of(cent):
        raise InternalError("Cent_0 is not inside Cent")
    report = dict(cent=cent.dim, cent0=cent0.dim, cent_red=cent.dim - cent0.dim)
    if kappa0 is not None:
        if kappa0.det() == 0:
            raise StructureError("κ_0 is degenerate")
        if not is_invariant(lie, kappa0):
            raise StructureError("κ_0 is not invariant")
        kinv = kappa0.inv()
        # transpose w.r.t. κ_0: A^T = κ_0^{-1} A^t κ_0 (matrices act on columns)
        tmat = _transpose_map(n, kappa0, kinv)
        sym = kernel_basis(tmat - identity(nn))
        cplus = meet(cent, sym)
        c0plus = meet(cent0, sym)
        # κ_A(x, y) = κ_0(A x, y) is the matrix A^t κ_0
        forms = []
        for row in cplus.rows():
            a = fmpq_mat(n, n, row)
            forms.append(sym_coords(a.transpose() * kappa0))
        fspace = span(forms, n * (n + 1) // 2)
        inv = sym2_invariants(lie)
        if fspace != inv.invariants or cplus.dim != inv.dim:
            raise InternalError("Cent_+ does not map onto Sym²(k)^k")
        if c0plus.dim != inv.quotient_forms.dim:
            raise InternalError("Cent_0,+ does not match Sym²(k/k')")
        if report["cent_red"] != exact_forms(lie).z3_gamma.dim:
            raise InternalError("dim Cent_red differs from dim Z³_Γ")
        report.update(cent_plus=cplus.dim, cent0_plus=c0plus.dim)
    return CentroidReport(**report)


def _annihilator_rows(s: Subspace, n: int) -> list[list[fmpq]]:
    """Functionals (rows) whose common kernel is ``s``."""
    from .linalg import annihilator
    return annihilator(s).rows()


def _transpose_map(n: int, k0: fmpq_mat, k0inv: fmpq_mat) -> fmpq_mat:
    """Matrix of ``A -> κ_0^{-1} A^t κ_0`` on row-major entries."""
    nn = n * n
    cols = []
    for c in range(nn):
        e = zeros(n, n)
        e[c // n, c % n] = 1
        cols.append((k0inv * e.transpose() * k0).entries())
    return fmpq_mat(nn, nn, [cols[c][r] for r in range(nn) for c in range(nn)])


# ---------------------------------------------------------------- common radical probe


@dataclass(frozen=True)
class RadicalReport:
    common_radical_dim: int
    best_rank: int
    best_form: tuple[fmpq, ...]   # S² coordinates
    equality: bool


def radical_probe(lie: LieAlgebra) -> RadicalReport:
    """Common radical of ``Sym²(k)^k`` against the best rank found among
    combinations of at most three basis forms with coefficients in
    ``{0, ±1, ±2}``; exploratory."""
    n = lie.dim
    basis = sym2_invariants(lie).matrices()
    if basis:
        common = kernel_basis(vstack(basis, n))
    else:
        common = full_space(n)
    best, best_rank = zeros(n, n), 0
    coeffs = (1, -1, 2, -2)
    for size in range(1, min(3, len(basis)) + 1):
        for group in combinations(range(len(basis)), size):
            for cs in product(coeffs, repeat=size):
                m = zeros(n, n)
                for g, c in zip(group, cs):
                    m = m + basis[g] * c
                rk = m.rank()
                if rk > best_rank:
                    best, best_rank = m, rk
    return RadicalReport(common.dim, best_rank, tuple(sym_coords(best)),
                         n - best_rank == common.dim)


# ---------------------------------------------------------------- transfer sequence


def alpha_tilde(lie: LieAlgebra, p: int) -> fmpq_mat:
    """``α̃_p: C^p(k) -> C^{p-1}(k, k*)``, ``α̃(ω)(x..)(y) = ω(x.., y)``."""
    n = lie.dim
    src, sidx = wedge_basis(n, p)
    tgt, _ = wedge_basis(n, p - 1)
    ent = {}
    for r, t in enumerate(tgt):
        for y in range(n):
            s, st = sort_with_sign(t + (y,))
            if s:
                ent[(r * n + y, sidx[st])] = fmpq(s)
    return sparse_matrix(len(tgt) * n, len(src), ent)


def beta_tilde(lie: LieAlgebra, p: int) -> fmpq_mat:
    """``β̃_p: C^p(k, k*) -> C^{p-1}(k, Sym²)``,
    ``β̃(ω)(x..)(y, z) = ω(x.., y)(z) + ω(x.., z)(y)``."""
    n = lie.dim
    src, sidx = wedge_basis(n, p)
    tgt, _ = wedge_basis(n, p - 1)
    pairs, _ = sym2_index(n)
    m = len(pairs)
    ent = {}

    def add(key, v):
        ent[key] = ent.get(key, ZERO) + v

    for r, t in enumerate(tgt):
        for q, (y, z) in enumerate(pairs):
            for a, b in ((y, z), (z, y)):
                s, st = sort_with_sign(t + (a,))
                if s:
                    add((r * m + q, sidx[st] * n + b), fmpq(s))
    return sparse_matrix(len(tgt) * m, len(src) * n, ent)


def _induced(src: "cohomology", tgt, mat: fmpq_mat, label: str) -> fmpq_mat:
    """Matrix of the map induced on cohomology; asserts well-definedness."""
    z_img = image_of(src.cocycles, mat)
    b_img = image_of(src.coboundaries, mat)
    if not z_img.is_subspace_of(tgt.cocycles):
        raise InternalError(f"{label} does not map cocycles to cocycles")
    if not b_img.is_subspace_of(tgt.coboundaries):
        raise InternalError(f"{label} does not map coboundaries to coboundaries")
    if not src.dim:
        return zeros(tgt.dim, 0)
    reps = fmpq_mat(src.dim, src.cochain_dim, [x for r in src.representatives for x in r]).transpose()
    if not tgt.dim:
        return zeros(0, src.dim)
    return tgt.class_matrix * (mat * reps)


@dataclass(frozen=True)
class TransferSequenceReport:
    dims: dict
    exact_at: dict             # node -> bool
    alpha2_injective: bool
    cochain_compositions_zero: bool
    maps: dict                 # name -> matrix on cohomology coordinates

    @property
    def ok(self) -> bool:
        return self.alpha2_injective and self.cochain_compositions_zero and all(self.exact_at.values())


def transfer_sequence(lie: LieAlgebra) -> TransferSequenceReport:
    """``0 -> H²(k) -> H¹(k,k*) -> Sym²(k)^k -> H³(k) -> H²(k,k*) -> H¹(k,Sym²)``."""
    n = lie.dim
    triv = make_module(lie, "trivial")
    cod = make_module(lie, "coadjoint")
    s2 = make_module(lie, "sym2")
    h2 = cohomology(lie, triv, 2)
    h3 = cohomology(lie, triv, 3)
    c1 = cohomology(lie, cod, 1)
    c2 = cohomology(lie, cod, 2)
    s0 = cohomology(lie, s2, 0)
    s1 = cohomology(lie, s2, 1)
    a2, a3 = alpha_tilde(lie, 2), alpha_tilde(lie, 3)
    b1, b2 = beta_tilde(lie, 1), beta_tilde(lie, 2)
    comp_zero = is_zero(b1 * a2) and is_zero(b2 * a3)
    A2 = _induced(h2, c1, a2, "α₂")
    B1 = _induced(c1, s0, b1, "β₁")
    G = _induced(s0, h3, gamma_matrix(lie) if n >= 3 else zeros(0, s2.dim), "γ")
    A3 = _induced(h3, c2, a3, "α₃")
    B2 = _induced(c2, s1, b2, "β₂")

    def exact(f, g):
        return image_basis(f) == kernel_basis(g)

    exact_at = {
        "H1(k,k*)": exact(A2, B1),
        "Sym2(k)^k": exact(B1, G),
        "H3(k)": exact(G, A3),
        "H2(k,k*)": exact(A3, B2),
    }
    dims = {"H2(k)": h2.dim, "H1(k,k*)": c1.dim, "Sym2(k)^k": s0.dim,
            "H3(k)": h3.dim, "H2(k,k*)": c2.dim, "H1(k,Sym2)": s1.dim}
    return TransferSequenceReport(dims, exact_at, rank(A2) == h2.dim, comp_zero,
                                  {"alpha2": A2, "beta1": B1, "gamma": G, "alpha3": A3, "beta2": B2})


# ---------------------------------------------------------------- homotopy formula


def t_tilde(lie: LieAlgebra, mod: KModule, p: int, q: int) -> fmpq_mat:
    """``T̃_p: C^{p+q}(k, a) -> C^p(k, C^q(k, a))``."""
    n, m = lie.dim, mod.dim
    src, sidx = wedge_basis(n, p + q)
    outer, _ = wedge_basis(n, p)
    inner, _ = wedge_basis(n, q)
    ni = len(inner) * m
    ent = {}
    for o, x in enumerate(outer):
        for i, y in enumerate(inner):
            s, st = sort_with_sign(x + y)
            if s:
                for a in range(m):
                    ent[(o * ni + i * m + a, sidx[st] * m + a)] = fmpq(s)
    return sparse_matrix(len(outer) * ni, len(src) * m, ent)


def homotopy_identity(lie: LieAlgebra, mod: KModule, p: int, q: int) -> bool:
    """``T̃_{p+1} d = d' T̃_p + (-1)^{p+1} d'' T̃_{p+1}`` on ``C^{p+q}(k, a)``."""
    if q < 1 or p + q + 1 > lie.dim + 1:
        raise StructureError("need q >= 1 and p + q <= dim k")
    d = ce_differential(lie, mod, p + q).mat
    lhs = t_tilde(lie, mod, p + 1, q) * d
    cq = cochain_module(lie, mod, q)
    d1 = ce_differential(lie, cq, p).mat
    # d'' = id ⊗ d^{q-1} on C^{p+1}(k, C^{q-1})
    dq = ce_differential(lie, mod, q - 1).mat
    outer = len(wedge_basis(lie.dim, p + 1)[0])
    d2 = _block_diag(dq, outer)
    rhs = d1 * t_tilde(lie, mod, p, q) + d2 * t_tilde(lie, mod, p + 1, q - 1) * ((-1) ** (p + 1))
    return lhs == rhs


def _block_diag(m: fmpq_mat, k: int) -> fmpq_mat:
    r, c = m.nrows(), m.ncols()
    ent = {}
    rows = rows_of(m)
    for b in range(k):
        for i in range(r):
            for j in range(c):
                if rows[i][j]:
                    ent[(b * r + i, b * c + j)] = rows[i][j]
    return sparse_matrix(k * r, k * c, ent)


# ---------------------------------------------------------------- cotangent forms


@dataclass(frozen=True)
class TwistedReport:
    kappa_invariant: bool
    gamma_alternating: bool
    koszul_exact: bool | None      # None when κ is not invariant
    observed_scalar: fmpq | None   # c with d η = c·Γ(κ) when such c exists


def twisted_report(ext: LieAlgebra, base_dim: int, gamma_alt: bool) -> TwistedReport:
    """Invariance and exactness of the canonical pairing on ``T*_γ g``."""
    from .catalog import cotangent_forms
    forms = cotangent_forms(base_dim)
    kappa, eta = forms["kappa"], forms["eta"]
    inv = is_invariant(ext, kappa)
    if not inv:
        return TwistedReport(False, gamma_alt, None, None)
    g = koszul(ext, kappa)
    exact = primitive(ext, kappa) is not None
    d2 = ce_differential(ext, make_module(ext, "trivial"), 2)
    de = (d2.mat * _col(alt_coords(eta))).entries()
    scalar = None
    nz = [i for i, v in enumerate(g) if v]
    if nz:
        c = de[nz[0]] / g[nz[0]]
        if all(de[i] == c * g[i] for i in range(len(g))):
            scalar = c
    return TwistedReport(True, gamma_alt, exact, scalar)

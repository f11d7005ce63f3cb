"""Lie algebras by structure constants and their Chevalley-Eilenberg complexes.

Exterior powers use abstract wedge coordinates: the basis of ``Λ^p`` is the
strictly increasing index tuples in lexicographic order.  A ``p``-cochain is
stored by its values on those tuples, so a cochain with values in a trivial
one-dimensional module is literally a functional on ``Λ^p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

from flint import fmpq, fmpq_mat

from .linalg import (
    ZERO,
    InternalError,
    LinearMap,
    Subspace,
    complement_representatives,
    image_basis,
    kernel_basis,
    quotient_map,
    rows_of,
    sparse_matrix,
    span,
    to_q,
    zeros,
)


class LieValidationError(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


@lru_cache(maxsize=None)
def wedge_basis(n: int, p: int) -> tuple[tuple[tuple[int, ...], ...], dict]:
    """Increasing ``p``-tuples from ``range(n)`` and their positions."""
    tuples = tuple(combinations(range(n), p))
    return tuples, {t: i for i, t in enumerate(tuples)}


def sort_with_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation (0 if an index repeats) and the sorted tuple."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


def _vec(d: Mapping[int, fmpq], n: int) -> list[fmpq]:
    v = [ZERO] * n
    for k, c in d.items():
        v[k] = c
    return v


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """A validated finite-dimensional Lie algebra.

    ``brackets[(i, j)]`` for ``i < j`` is a sparse ``{k: coefficient}`` dict;
    missing pairs bracket to zero.  Build instances with :func:`validate_lie`.
    """

    name: str
    basis: tuple[str, ...]
    brackets: Mapping[tuple[int, int], Mapping[int, fmpq]]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def bracket(self, i: int, j: int) -> dict[int, fmpq]:
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    def bracket_vec(self, u: Sequence, v: Sequence) -> list[fmpq]:
        out = [ZERO] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b or i == j:
                    continue
                for k, c in self.bracket(i, j).items():
                    out[k] += a * b * c
        return out

    def ad(self, i: int) -> fmpq_mat:
        """Matrix of ``ad e_i`` acting on column vectors."""
        ent = {}
        for j in range(self.dim):
            for k, c in self.bracket(i, j).items():
                ent[(k, j)] = c
        return sparse_matrix(self.dim, self.dim, ent)

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def table(self) -> dict[tuple[int, int], dict[int, fmpq]]:
        return {k: dict(v) for k, v in self.brackets.items()}


def validate_lie(basis: Sequence[str] | int, table: Mapping, name: str = "") -> LieAlgebra:
    """Check antisymmetry and Jacobi, returning the validated algebra.

    ``table`` maps ``(i, j)`` to ``{k: coefficient}``.  Entries with
    ``i > j`` are accepted and folded in by antisymmetry.
    """
    if isinstance(basis, int):
        basis = [f"e{i}" for i in range(basis)]
    basis = tuple(basis)
    n = len(basis)
    br: dict[tuple[int, int], dict[int, fmpq]] = {}
    for (i, j), val in table.items():
        i, j = int(i), int(j)
        if not (0 <= i < n and 0 <= j < n):
            raise LieValidationError(f"bracket index ({i},{j}) out of range", (i, j))
        vec = {}
        for k, c in val.items():
            k = int(k)
            if not 0 <= k < n:
                raise LieValidationError(f"coefficient index {k} out of range", (i, j, k))
            c = to_q(c)
            if c:
                vec[k] = c
        if i == j:
            if vec:
                raise LieValidationError(f"[e{i}, e{i}] must vanish", (i, i))
            continue
        if i > j:
            i, j = j, i
            vec = {k: -c for k, c in vec.items()}
        if (i, j) in br and br[(i, j)] != vec:
            raise LieValidationError(f"inconsistent entries for the pair ({i},{j})", (i, j))
        if vec:
            br[(i, j)] = vec
    lie = LieAlgebra(name, basis, br)
    for i, j, k in combinations(range(n), 3):
        e = [_vec({i: fmpq(1)}, n), _vec({j: fmpq(1)}, n), _vec({k: fmpq(1)}, n)]
        total = [ZERO] * n
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            t = lie.bracket_vec(lie.bracket_vec(e[a], e[b]), e[c])
            total = [x + y for x, y in zip(total, t)]
        if any(total):
            raise LieValidationError(
                f"Jacobi identity fails on ({basis[i]}, {basis[j]}, {basis[k]})", (i, j, k))
    return lie


def derived_subalgebra(lie: LieAlgebra) -> Subspace:
    n = lie.dim
    return lie.cached("derived", lambda: span(
        [_vec(lie.bracket(i, j), n) for i, j in combinations(range(n), 2)], n))


def center(lie: LieAlgebra) -> Subspace:
    def build():
        n = lie.dim
        # x is central iff [x, e_j] = 0 for every j: stack the maps x -> [x, e_j]
        ent = {}
        for j in range(n):
            for i in range(n):
                for k, c in lie.bracket(i, j).items():
                    ent[(j * n + k, i)] = c
        return kernel_basis(sparse_matrix(n * n, n, ent))
    return lie.cached("center", build)


def wedge2_vec(u: Sequence, v: Sequence) -> list[fmpq]:
    """Wedge coordinates of ``u ∧ v``."""
    n = len(u)
    tuples, _ = wedge_basis(n, 2)
    return [to_q(u[i]) * to_q(v[j]) - to_q(u[j]) * to_q(v[i]) for i, j in tuples]


# ---------------------------------------------------------------- modules


@dataclass(frozen=True, eq=False)
class KModule:
    """A finite-dimensional module: ``action[i]`` is the matrix of ``e_i``."""

    algebra: LieAlgebra
    dim: int
    action: tuple[fmpq_mat, ...]
    kind: str = "custom"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def is_trivial(self) -> bool:
        return all(all(v == 0 for v in a.entries()) for a in self.action)


def check_module(mod: KModule) -> None:
    lie = mod.algebra
    for i, j in combinations(range(lie.dim), 2):
        lhs = zeros(mod.dim, mod.dim)
        for k, c in lie.bracket(i, j).items():
            lhs = lhs + mod.action[k] * c
        rhs = mod.action[i] * mod.action[j] - mod.action[j] * mod.action[i]
        if lhs != rhs:
            raise InternalError(
                f"{mod.kind} module is not a representation on ({lie.basis[i]}, {lie.basis[j]})")


def sym2_index(n: int) -> tuple[list[tuple[int, int]], dict]:
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    return pairs, {p: k for k, p in enumerate(pairs)}


def sym_pos(idx: dict, i: int, j: int) -> int:
    return idx[(i, j) if i <= j else (j, i)]


def make_module(lie: LieAlgebra, kind: str = "trivial", z_dim: int = 1) -> KModule:
    """``trivial`` (of dimension ``z_dim``), ``adjoint``, ``coadjoint`` or ``sym2``.

    The coadjoint module is ``k*`` with ``(x.f)(y) = -f([x, y])`` in the dual
    basis; ``sym2`` is the space of symmetric bilinear forms, coordinates
    ``κ(e_i, e_j)`` for ``i <= j``, with
    ``(x.κ)(y, z) = -κ([x, y], z) - κ(y, [x, z])``.
    """
    n = lie.dim
    if kind == "trivial":
        mod = KModule(lie, z_dim, tuple(zeros(z_dim, z_dim) for _ in range(n)), "trivial")
    elif kind == "adjoint":
        mod = KModule(lie, n, tuple(lie.ad(i) for i in range(n)), "adjoint")
    elif kind == "coadjoint":
        mod = KModule(lie, n, tuple(-lie.ad(i).transpose() for i in range(n)), "coadjoint")
    elif kind == "sym2":
        pairs, idx = sym2_index(n)
        acts = []
        for x in range(n):
            ent: dict = {}
            # column (a, b) = image of the basis form E_ab; row (y, z) = its value at (e_y, e_z)
            for col, (a, b) in enumerate(pairs):
                for row, (y, z) in enumerate(pairs):
                    val = ZERO
                    for k, c in lie.bracket(x, y).items():
                        val -= c * _basis_form(a, b, k, z)
                    for k, c in lie.bracket(x, z).items():
                        val -= c * _basis_form(a, b, y, k)
                    if val:
                        ent[(row, col)] = val
            acts.append(sparse_matrix(len(pairs), len(pairs), ent))
        mod = KModule(lie, len(pairs), tuple(acts), "sym2")
    else:
        raise ValueError(f"unknown module kind {kind!r}")
    check_module(mod)
    return mod


def _basis_form(a: int, b: int, y: int, z: int) -> int:
    # the symmetric form E_ab evaluated at (e_y, e_z)
    return 1 if (y, z) == (a, b) or (y, z) == (b, a) else 0


def cochain_module(lie: LieAlgebra, coeff: KModule, q: int) -> KModule:
    """``C^q(k, coeff)`` as a module, ``(x.ω)(..) = x.ω(..) - Σ ω(.., [x, x_i], ..)``.

    Coordinates: wedge tuple major, coefficient index minor (as for cochains).
    """
    n, m = lie.dim, coeff.dim
    tuples, tindex = wedge_basis(n, q)
    size = len(tuples) * m
    acts = []
    for x in range(n):
        ent: dict = {}
        ax = rows_of(coeff.action[x])
        for r, t in enumerate(tuples):
            for a in range(m):
                row = r * m + a
                for b in range(m):
                    if ax[a][b]:
                        ent[(row, r * m + b)] = ent.get((row, r * m + b), ZERO) + ax[a][b]
                for pos, xi in enumerate(t):
                    for k, c in lie.bracket(x, xi).items():
                        s, st = sort_with_sign(t[:pos] + (k,) + t[pos + 1:])
                        if s:
                            key = (row, tindex[st] * m + a)
                            ent[key] = ent.get(key, ZERO) - s * c
        acts.append(sparse_matrix(size, size, ent))
    mod = KModule(lie, size, tuple(acts), f"C^{q}({coeff.kind})")
    check_module(mod)
    return mod


# ---------------------------------------------------------------- complex


def cochain_dim(lie: LieAlgebra, mod: KModule, p: int) -> int:
    if p < 0 or p > lie.dim:
        return 0
    return comb(lie.dim, p) * mod.dim


def ce_differential(lie: LieAlgebra, mod: KModule, p: int) -> LinearMap:
    """Matrix of ``d: C^p(k, M) -> C^{p+1}(k, M)``.

    (dω)(x_0..x_p) = Σ_j (-1)^j x_j.ω(.. x̂_j ..)
                     + Σ_{i<j} (-1)^{i+j} ω([x_i, x_j], .. x̂_i .. x̂_j ..)
    """
    return mod.cached(("d", p), lambda: _ce_differential(lie, mod, p))


def _ce_differential(lie: LieAlgebra, mod: KModule, p: int) -> LinearMap:
    n, m = lie.dim, mod.dim
    src, tgt = cochain_dim(lie, mod, p), cochain_dim(lie, mod, p + 1)
    label_s, label_t = f"C^{p}", f"C^{p + 1}"
    if src == 0 or tgt == 0:
        return LinearMap(zeros(tgt, src), label_s, label_t)
    _, sindex = wedge_basis(n, p)
    ttuples, _ = wedge_basis(n, p + 1)
    trivial = mod.is_trivial()
    acts = [rows_of(a) for a in mod.action] if not trivial else None
    ent: dict = {}

    def add(key, val):
        ent[key] = ent.get(key, ZERO) + val

    for r, t in enumerate(ttuples):
        if not trivial:
            for j, xj in enumerate(t):
                s = sindex[t[:j] + t[j + 1:]]
                sign = -1 if j % 2 else 1
                act = acts[xj]
                for a in range(m):
                    for b in range(m):
                        if act[a][b]:
                            add((r * m + a, s * m + b), sign * act[a][b])
        for i, j in combinations(range(p + 1), 2):
            rest = t[:i] + t[i + 1:j] + t[j + 1:]
            sign = -1 if (i + j) % 2 else 1
            for k, c in lie.bracket(t[i], t[j]).items():
                s2, st = sort_with_sign((k,) + rest)
                if s2:
                    s = sindex[st]
                    for a in range(m):
                        add((r * m + a, s * m + a), sign * s2 * c)
    return LinearMap(sparse_matrix(tgt, src, ent), label_s, label_t)


@dataclass(frozen=True, eq=False)
class CohomologyResult:
    degree: int
    cochain_dim: int
    cocycles: Subspace
    coboundaries: Subspace
    representatives: tuple[tuple[fmpq, ...], ...]
    class_matrix: fmpq_mat  # C^p -> H^p, meaningful on cocycles; rep_i -> e_i

    @property
    def dim(self) -> int:
        return self.cocycles.dim - self.coboundaries.dim

    def class_of(self, v: Sequence) -> list[fmpq]:
        if not self.dim:
            return []
        return (self.class_matrix * fmpq_mat(len(v), 1, [to_q(x) for x in v])).entries()


def cohomology(lie: LieAlgebra, mod: KModule, p: int) -> CohomologyResult:
    """``H^p(k, M)`` with cocycles, coboundaries and representative cocycles.

    Representatives are the first echelon basis vectors of ``Z^p`` that are
    independent modulo ``B^p``.
    """
    return mod.cached(("H", p), lambda: _cohomology(lie, mod, p))


def _cohomology(lie: LieAlgebra, mod: KModule, p: int) -> CohomologyResult:
    cdim = cochain_dim(lie, mod, p)
    z = kernel_basis(ce_differential(lie, mod, p))
    if p == 0:
        b = span([], cdim)
    else:
        b = image_basis(ce_differential(lie, mod, p - 1))
    if not b.is_subspace_of(z):
        raise InternalError("coboundaries are not cocycles: d∘d != 0")
    reps = complement_representatives(z, b)
    return CohomologyResult(p, cdim, z, b, tuple(tuple(r) for r in reps),
                            class_matrix(cdim, b, reps))


def class_matrix(ambient: int, sub: Subspace, reps: Sequence[Sequence]) -> fmpq_mat:
    """Matrix sending ``reps[i]`` to ``e_i`` and killing ``sub``.

    Only its values on ``span(reps) + sub`` are meaningful.
    """
    if not reps:
        return zeros(0, ambient)
    q = quotient_map(ambient, sub).mat
    imgs = q * fmpq_mat(len(reps), ambient, [to_q(x) for r in reps for x in r]).transpose()
    coord = image_basis(imgs).coordinate_map()
    return (coord * imgs).inv() * coord * q


def cohomology_table(lie: LieAlgebra, mod: KModule | None = None) -> dict[str, list[int]]:
    mod = mod or make_module(lie, "trivial")
    rows = {"C": [], "H": [], "B": [], "Z": []}
    for p in range(lie.dim + 1):
        h = cohomology(lie, mod, p)
        rows["C"].append(h.cochain_dim)
        rows["H"].append(h.dim)
        rows["B"].append(h.coboundaries.dim)
        rows["Z"].append(h.cocycles.dim)
    return rows


# ---------------------------------------------------------------- homology


def bracket_map(lie: LieAlgebra) -> LinearMap:
    """``b: Λ^2 -> k, x ∧ y -> [x, y]``."""
    n = lie.dim
    tuples, _ = wedge_basis(n, 2)
    ent = {}
    for c, (i, j) in enumerate(tuples):
        for k, v in lie.bracket(i, j).items():
            ent[(k, c)] = v
    return LinearMap(sparse_matrix(n, len(tuples), ent), "Λ2", "k")


def boundary_partial(lie: LieAlgebra) -> LinearMap:
    """``∂: Λ^3 -> Λ^2, x∧y∧z -> [x,y]∧z + [y,z]∧x + [z,x]∧y``."""
    return lie.cached("partial", lambda: _boundary_partial(lie))


def _boundary_partial(lie: LieAlgebra) -> LinearMap:
    n = lie.dim
    t3, _ = wedge_basis(n, 3)
    t2, i2 = wedge_basis(n, 2)
    ent: dict = {}
    for col, (i, j, k) in enumerate(t3):
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for r, v in lie.bracket(a, b).items():
                s, st = sort_with_sign((r, c))
                if s:
                    key = (i2[st], col)
                    ent[key] = ent.get(key, ZERO) + s * v
    return LinearMap(sparse_matrix(len(t2), len(t3), ent), "Λ3", "Λ2")


@dataclass(frozen=True)
class H2Result:
    cycles: Subspace
    boundaries: Subspace
    quotient: LinearMap

    @property
    def dim(self) -> int:
        return self.cycles.dim - self.boundaries.dim


def homology_h2(lie: LieAlgebra) -> H2Result:
    return lie.cached("H2", lambda: _homology_h2(lie))


def _homology_h2(lie: LieAlgebra) -> H2Result:
    z2 = kernel_basis(bracket_map(lie))
    b2 = image_basis(boundary_partial(lie))
    if not b2.is_subspace_of(z2):
        raise InternalError("B_2 is not contained in Z_2")
    return H2Result(z2, b2, quotient_map(z2.ambient_dim, b2))

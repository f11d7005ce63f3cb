"""Exact linear algebra over the rationals.

Subspaces are stored by their canonical reduced row echelon basis, so two
subspaces of the same ambient space are equal exactly when their stored
bases are equal.  Matrices act on column vectors: a ``LinearMap`` with
``rows`` x ``cols`` entries maps ``Q^cols -> Q^rows``.

The heavy lifting (row reduction) is done by ``python-flint``'s ``fmpq_mat``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from flint import fmpq, fmpq_mat

Q = fmpq
ZERO = fmpq(0)
ONE = fmpq(1)


class StructureError(ValueError):
    """Shape or ambient-dimension mismatch."""


class InternalError(AssertionError):
    """A computed identity that must hold (by a theorem) failed."""


def to_q(x) -> fmpq:
    """Coerce int, Fraction, fmpq or a ``"p/q"`` string to an exact rational."""
    if isinstance(x, fmpq):
        return x
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x.strip())
        return fmpq(f.numerator, f.denominator)
    raise TypeError(f"cannot convert {x!r} to a rational")


def format_q(x) -> str:
    x = to_q(x)
    if x.q == 1:
        return str(x.p)
    return f"{x.p}/{x.q}"


def matrix(rows: Sequence[Sequence], ncols: int | None = None) -> fmpq_mat:
    rows = list(rows)
    if ncols is None:
        if not rows:
            raise StructureError("ncols required for an empty row list")
        ncols = len(rows[0])
    flat = []
    for r in rows:
        if len(r) != ncols:
            raise StructureError(f"row of length {len(r)} in a {ncols}-column matrix")
        flat.extend(to_q(v) for v in r)
    return fmpq_mat(len(rows), ncols, flat)


def sparse_matrix(nrows: int, ncols: int, entries: dict) -> fmpq_mat:
    """Build a matrix from ``{(i, j): value}``; zero entries may be omitted."""
    flat = [ZERO] * (nrows * ncols)
    for (i, j), v in entries.items():
        if v:
            flat[i * ncols + j] = to_q(v)
    return fmpq_mat(nrows, ncols, flat)


def zeros(nrows: int, ncols: int) -> fmpq_mat:
    return fmpq_mat(nrows, ncols)


def identity(n: int) -> fmpq_mat:
    return sparse_matrix(n, n, {(i, i): 1 for i in range(n)})


def rows_of(m: fmpq_mat) -> list[list[fmpq]]:
    nc = m.ncols()
    flat = m.entries()
    return [list(flat[i * nc:(i + 1) * nc]) for i in range(m.nrows())]


def column(m: fmpq_mat, j: int) -> list[fmpq]:
    return [m[i, j] for i in range(m.nrows())]


def hstack(blocks: Sequence[fmpq_mat], nrows: int | None = None) -> fmpq_mat:
    if not blocks:
        return zeros(nrows or 0, 0)
    nr = blocks[0].nrows()
    if any(b.nrows() != nr for b in blocks):
        raise StructureError("hstack: row counts differ")
    rows = [[] for _ in range(nr)]
    for b in blocks:
        for i, r in enumerate(rows_of(b)):
            rows[i].extend(r)
    return fmpq_mat(nr, sum(b.ncols() for b in blocks), [v for r in rows for v in r])


def vstack(blocks: Sequence[fmpq_mat], ncols: int | None = None) -> fmpq_mat:
    if not blocks:
        return zeros(0, ncols or 0)
    nc = blocks[0].ncols()
    if any(b.ncols() != nc for b in blocks):
        raise StructureError("vstack: column counts differ")
    flat = []
    for b in blocks:
        flat.extend(b.entries())
    return fmpq_mat(sum(b.nrows() for b in blocks), nc, flat)


def select_columns(m: fmpq_mat, cols: Sequence[int]) -> fmpq_mat:
    rs = rows_of(m)
    return fmpq_mat(m.nrows(), len(cols), [r[j] for r in rs for j in cols])


def is_zero(m: fmpq_mat) -> bool:
    return all(v == 0 for v in m.entries())


def _rref(m: fmpq_mat) -> tuple[fmpq_mat, tuple[int, ...]]:
    """Nonzero rows of the RREF of ``m`` and their pivot columns."""
    if m.nrows() == 0 or m.ncols() == 0:
        return zeros(0, m.ncols()), ()
    r, rank = m.rref()
    nc = m.ncols()
    flat = r.entries()[: rank * nc]
    pivots = []
    for i in range(rank):
        row = flat[i * nc:(i + 1) * nc]
        pivots.append(next(j for j, v in enumerate(row) if v != 0))
    return fmpq_mat(rank, nc, flat), tuple(pivots)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Row space of ``basis``; ``basis`` is always in reduced row echelon form."""

    ambient_dim: int
    basis: fmpq_mat
    pivots: tuple[int, ...] = field(default=())

    @property
    def dim(self) -> int:
        return self.basis.nrows()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, tuple(self.basis.entries())))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def rows(self) -> list[list[fmpq]]:
        return rows_of(self.basis)

    def coordinates(self, v: Sequence) -> list[fmpq]:
        """Coefficients of ``v`` in the RREF basis (``v`` must lie in the subspace)."""
        return [to_q(v[p]) for p in self.pivots]

    def coordinate_map(self) -> fmpq_mat:
        """Matrix ``ambient -> Q^dim`` reading off pivot entries."""
        return sparse_matrix(self.dim, self.ambient_dim,
                             {(i, p): 1 for i, p in enumerate(self.pivots)})

    def residual(self, v: Sequence) -> list[fmpq]:
        v = [to_q(x) for x in v]
        if self.dim == 0:
            return v
        coords = fmpq_mat(1, self.dim, [v[p] for p in self.pivots])
        return (fmpq_mat(1, self.ambient_dim, v) - coords * self.basis).entries()

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise StructureError("vector length does not match ambient dimension")
        return not any(self.residual(v))

    def is_subspace_of(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(r) for r in self.rows())


def _check_ambient(s: Subspace, t: Subspace) -> None:
    if s.ambient_dim != t.ambient_dim:
        raise StructureError(f"ambient dimensions differ: {s.ambient_dim} vs {t.ambient_dim}")


def subspace_from_matrix(m: fmpq_mat) -> Subspace:
    basis, pivots = _rref(m)
    return Subspace(m.ncols(), basis, pivots)


def span(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    vectors = list(vectors)
    for v in vectors:
        if len(v) != ambient_dim:
            raise StructureError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
    if not vectors:
        return zero_subspace(ambient_dim)
    return subspace_from_matrix(matrix(vectors, ambient_dim))


def zero_subspace(n: int) -> Subspace:
    return Subspace(n, zeros(0, n), ())


def full_space(n: int) -> Subspace:
    return Subspace(n, identity(n), tuple(range(n)))


def _kernel_of(m: fmpq_mat) -> Subspace:
    n = m.ncols()
    r, pivots = _rref(m)
    rs = rows_of(r)
    free = [j for j in range(n) if j not in set(pivots)]
    vecs = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for row, p in zip(rs, pivots):
            v[p] = -row[f]
        vecs.append(v)
    return span(vecs, n)


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Matrix of a linear map ``Q^cols -> Q^rows`` with basis labels."""

    mat: fmpq_mat
    domain: str = ""
    codomain: str = ""

    @property
    def rows(self) -> int:
        return self.mat.nrows()

    @property
    def cols(self) -> int:
        return self.mat.ncols()

    def __call__(self, v: Sequence) -> list[fmpq]:
        if len(v) != self.cols:
            raise StructureError(f"map expects length {self.cols}, got {len(v)}")
        col = fmpq_mat(self.cols, 1, [to_q(x) for x in v])
        return (self.mat * col).entries() if self.rows else []

    def then(self, other: "LinearMap") -> "LinearMap":
        """``other ∘ self``."""
        if self.codomain and other.domain and self.codomain != other.domain:
            raise StructureError(f"cannot compose: {self.codomain!r} -> {other.domain!r}")
        if self.rows != other.cols:
            raise StructureError("cannot compose: dimension mismatch")
        return LinearMap(other.mat * self.mat, self.domain, other.codomain)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearMap) and self.mat == other.mat

    def __hash__(self):
        return hash(tuple(self.mat.entries()))

    def is_zero(self) -> bool:
        return is_zero(self.mat)

    def rank(self) -> int:
        return rank(self.mat)


def as_matrix(m) -> fmpq_mat:
    return m.mat if isinstance(m, LinearMap) else m


def rank(m) -> int:
    m = as_matrix(m)
    if m.nrows() == 0 or m.ncols() == 0:
        return 0
    return m.rref()[1]


def kernel_basis(m) -> Subspace:
    return _kernel_of(as_matrix(m))


def image_basis(m) -> Subspace:
    m = as_matrix(m)
    return subspace_from_matrix(m.transpose())


def annihilator(s: Subspace) -> Subspace:
    """Functionals (as row vectors) vanishing on ``s``."""
    if s.dim == 0:
        return full_space(s.ambient_dim)
    return _kernel_of(s.basis)


def meet(s: Subspace, t: Subspace) -> Subspace:
    _check_ambient(s, t)
    ann = vstack([annihilator(s).basis, annihilator(t).basis], s.ambient_dim)
    return _kernel_of(ann)


def join(s: Subspace, t: Subspace) -> Subspace:
    _check_ambient(s, t)
    return subspace_from_matrix(vstack([s.basis, t.basis], s.ambient_dim))


def contains(s: Subspace, v: Sequence) -> bool:
    return s.contains(v)


def image_of(s: Subspace, m) -> Subspace:
    """Image of the subspace ``s`` under the map ``m``."""
    m = as_matrix(m)
    if m.ncols() != s.ambient_dim:
        raise StructureError("map domain does not match subspace ambient")
    if s.dim == 0:
        return zero_subspace(m.nrows())
    return subspace_from_matrix((m * s.basis.transpose()).transpose())


def preimage(s: Subspace, m) -> Subspace:
    """``{v : m v in s}``."""
    m = as_matrix(m)
    ann = annihilator(s).basis
    if ann.nrows() == 0:
        return full_space(m.ncols())
    return _kernel_of(ann * m)


def quotient_map(ambient_dim: int, s: Subspace) -> LinearMap:
    """Surjection ``Q^n -> Q^(n - dim s)`` with kernel exactly ``s``.

    Coordinates of the target are the non-pivot columns of ``s``; a vector is
    first reduced against the echelon basis and then read off there.
    """
    if s.ambient_dim != ambient_dim:
        raise StructureError("subspace does not live in the given ambient space")
    piv = set(s.pivots)
    free = [j for j in range(ambient_dim) if j not in piv]
    rs = s.rows()
    entries = {}
    for k, f in enumerate(free):
        entries[(k, f)] = ONE
        for row, p in zip(rs, s.pivots):
            if row[f]:
                entries[(k, p)] = -row[f]
    return LinearMap(sparse_matrix(len(free), ambient_dim, entries),
                     domain=f"Q^{ambient_dim}", codomain=f"Q^{ambient_dim}/S")


def solve(m, b) -> fmpq_mat | None:
    """Some ``X`` with ``m X = b``, or ``None`` when the system is inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    m, b = as_matrix(m), as_matrix(b)
    if m.nrows() != b.nrows():
        raise StructureError("solve: row counts differ")
    n, k = m.ncols(), b.ncols()
    if m.nrows() == 0:
        return zeros(n, k)
    aug, pivots = _rref(hstack([m, b]))
    if any(p >= n for p in pivots):
        return None
    rs = rows_of(aug)
    flat = [ZERO] * (n * k)
    for row, p in zip(rs, pivots):
        for j in range(k):
            flat[p * k + j] = row[n + j]
    return fmpq_mat(n, k, flat)


def complement_representatives(big: Subspace, small: Subspace) -> list[list[fmpq]]:
    """Rows of ``big``'s echelon basis that are independent modulo ``small``.

    The chosen rows map to a basis of ``big / small``; the choice is the first
    ones in echelon order, hence deterministic.
    """
    _check_ambient(big, small)
    if big.dim == 0:
        return []
    q = quotient_map(big.ambient_dim, small).mat
    images = q * big.basis.transpose()
    _, chosen = _rref(images)
    rs = big.rows()
    return [rs[j] for j in chosen]

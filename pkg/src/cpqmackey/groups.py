"""Finitely generated abelian groups and their homomorphisms.

Every group is kept in invariant-factor normal form
``Z/d_1 + ... + Z/d_k + Z^r`` with ``d_1 | d_2 | ... | d_k`` and each
``d_i >= 2``.  Normal-form coordinates list the torsion generators first
(in increasing order) followed by the free generators.  Groups remember the
presentation they were built from, together with change-of-basis matrices,
so that elements written in presentation coordinates can be moved into
normal-form coordinates and back.

A homomorphism is an integer matrix acting on column vectors of normal-form
coordinates.  Matrices are stored reduced: an entry in a row whose target
coordinate has order ``c`` lies in ``[0, c)``.

>>> A = presented_group(2, IntMatrix.from_rows([[2, 4], [6, 8]]))
>>> A.torsion, A.rank
((2, 4), 0)
>>> iso_groups(A, cyclic_sum([2, 4]))
True
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterator, Sequence

from .matrix import (
    IntMatrix,
    block_diag,
    hstack,
    integer_kernel,
    kronecker,
    smith_decomposition,
    solve_integer,
)


class NotWellDefined(ValueError):
    """Raised when a matrix does not descend to a homomorphism of the given groups."""


@dataclass(frozen=True)
class FGAbelianGroup:
    """A finitely generated abelian group in invariant-factor normal form.

    ``to_nf`` maps presentation-generator coordinates to normal-form
    coordinates and ``from_nf`` maps back (a section, exact on classes).
    """

    rank: int
    torsion: tuple[int, ...]
    gens: int
    rels: IntMatrix
    to_nf: IntMatrix = field(compare=False, repr=False)
    from_nf: IntMatrix = field(compare=False, repr=False)

    @property
    def orders(self) -> tuple[int, ...]:
        """Order of each normal-form generator, with 0 standing for infinite order."""
        return self.torsion + (0,) * self.rank

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.rank

    def is_zero(self) -> bool:
        return self.ngens == 0

    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> int | None:
        """Number of elements, or None for an infinite group."""
        return prod(self.torsion) if self.rank == 0 else None

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of a normal-form coordinate vector."""
        return tuple(v % o if o else v for v, o in zip(vec, self.orders))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def basis(self) -> list[tuple[int, ...]]:
        n = self.ngens
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]

    def elements(self) -> Iterator[tuple[int, ...]]:
        """Enumerate all elements of a finite group."""
        if self.rank:
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.torsion))

    def from_presentation(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Normal-form coordinates of an element given in presentation coordinates."""
        return self.reduce(self.to_nf.apply(list(vec)))

    def key(self) -> tuple[int, tuple[int, ...]]:
        """Isomorphism invariant (rank, torsion)."""
        return (self.rank, self.torsion)

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"


def presented_group(gens: int, rels: IntMatrix) -> FGAbelianGroup:
    """The group ``Z^gens / (column span of rels)`` in normal form."""
    if rels.rows != gens:
        raise ValueError(f"relation matrix has {rels.rows} rows, expected {gens}")
    s = smith_decomposition(rels)
    diag = s.D.diagonal()
    values = [diag[i] if i < len(diag) else 0 for i in range(gens)]
    keep = [i for i, d in enumerate(values) if d != 1]
    torsion = tuple(values[i] for i in keep if values[i] != 0)
    rank = sum(1 for i in keep if values[i] == 0)
    return FGAbelianGroup(
        rank=rank,
        torsion=torsion,
        gens=gens,
        rels=rels,
        to_nf=s.U.select_rows(keep),
        from_nf=s.U_inv.select_columns(keep),
    )


def cyclic_sum(orders: Sequence[int]) -> FGAbelianGroup:
    """Direct sum of cyclic groups ``Z/o`` (``o = 0`` meaning ``Z``), normalised."""
    return presented_group(len(orders), IntMatrix.diag(list(orders)))


def free_group(n: int) -> FGAbelianGroup:
    return cyclic_sum([0] * n)


def cyclic(d: int) -> FGAbelianGroup:
    """``Z`` for ``d = 0``, the zero group for ``d = 1``, otherwise ``Z/d``."""
    return cyclic_sum([d])


ZERO_GROUP = free_group(0)


def iso_groups(a: FGAbelianGroup, b: FGAbelianGroup) -> bool:
    return a.key() == b.key()


def _relation_matrix(g: FGAbelianGroup) -> IntMatrix:
    """Diagonal relations of the normal form, one column per torsion generator."""
    n = g.ngens
    cols = [[g.torsion[j] if i == j else 0 for i in range(n)] for j in range(len(g.torsion))]
    return IntMatrix.from_columns(cols, n)


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism between groups in normal form, as a reduced integer matrix."""

    domain: FGAbelianGroup
    codomain: FGAbelianGroup
    matrix: IntMatrix

    def __post_init__(self) -> None:
        m, n = self.codomain.ngens, self.domain.ngens
        if self.matrix.shape != (m, n):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match {(m, n)}")
        rows = self.matrix.to_rows()
        corders = self.codomain.orders
        for i, c in enumerate(corders):
            if c:
                rows[i] = [x % c for x in rows[i]]
        for j, d in enumerate(self.domain.orders):
            if d == 0:
                continue
            for i, c in enumerate(corders):
                x = rows[i][j] * d
                if (c == 0 and x != 0) or (c and x % c):
                    raise NotWellDefined(
                        f"column {j} of order {d} does not map into the {d}-torsion of the codomain"
                    )
        object.__setattr__(self, "matrix", IntMatrix.from_rows(rows, n) if m else IntMatrix(0, n, ()))

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, a: FGAbelianGroup, b: FGAbelianGroup) -> "GroupHom":
        return cls(a, b, IntMatrix.zeros(b.ngens, a.ngens))

    @classmethod
    def identity(cls, a: FGAbelianGroup) -> "GroupHom":
        return cls(a, a, IntMatrix.identity(a.ngens))

    @classmethod
    def from_rows(cls, a: FGAbelianGroup, b: FGAbelianGroup, rows: Sequence[Sequence[int]]) -> "GroupHom":
        return cls(a, b, IntMatrix.from_rows(rows, a.ngens) if b.ngens else IntMatrix(0, a.ngens, ()))

    @classmethod
    def scalar(cls, a: FGAbelianGroup, k: int) -> "GroupHom":
        return cls(a, a, IntMatrix.identity(a.ngens).scale(k))

    # algebra ------------------------------------------------------------------
    def __call__(self, vec: Sequence[int]) -> tuple[int, ...]:
        return self.codomain.reduce(self.matrix.apply(list(vec)))

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        """Composition ``self o other``."""
        if other.codomain.key() != self.domain.key():
            raise ValueError("composition of non-composable homomorphisms")
        return GroupHom(other.domain, self.codomain, self.matrix @ other.matrix)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(self.domain, self.codomain, self.matrix - other.matrix)

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.domain, self.codomain, -self.matrix)

    def scale(self, k: int) -> "GroupHom":
        return GroupHom(self.domain, self.codomain, self.matrix.scale(k))

    def power(self, k: int) -> "GroupHom":
        return GroupHom(self.domain, self.codomain, self.matrix.power(k))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (
            self.domain.key() == other.domain.key()
            and self.codomain.key() == other.codomain.key()
            and self.matrix == other.matrix
        )

    def __hash__(self) -> int:
        return hash((self.domain.key(), self.codomain.key(), self.matrix))

    def is_injective(self) -> bool:
        return kernel_hom(self)[0].is_zero()

    def is_surjective(self) -> bool:
        return cokernel_hom(self)[0].is_zero()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "GroupHom":
        """Inverse of an isomorphism."""
        if not self.is_isomorphism():
            raise ValueError("homomorphism is not invertible")
        big = hstack([self.matrix, _relation_matrix(self.codomain)], self.codomain.ngens)
        sol = solve_integer(big, IntMatrix.identity(self.codomain.ngens))
        assert sol is not None
        return GroupHom(self.codomain, self.domain, sol.select_rows(range(self.domain.ngens)))


def kernel_hom(f: GroupHom) -> tuple[FGAbelianGroup, GroupHom]:
    """Kernel of ``f`` with its inclusion into the domain."""
    dom, cod = f.domain, f.codomain
    n = dom.ngens
    big = hstack([f.matrix, _relation_matrix(cod)], cod.ngens)
    basis = integer_kernel(big).select_rows(range(n))  # lattice of x with f(x) = 0
    k = basis.cols
    rel = _relation_matrix(dom)
    x = solve_integer(basis, rel)
    if x is None:  # pragma: no cover - the relation lattice always lies in the kernel
        raise ArithmeticError("kernel lattice does not contain the relations")
    group = presented_group(k, x)
    inclusion = GroupHom(group, dom, basis @ group.from_nf)
    return group, inclusion


def cokernel_hom(f: GroupHom) -> tuple[FGAbelianGroup, GroupHom]:
    """Cokernel of ``f`` with the projection from the codomain."""
    cod = f.codomain
    rels = hstack([_relation_matrix(cod), f.matrix], cod.ngens)
    group = presented_group(cod.ngens, rels)
    return group, GroupHom(cod, group, group.to_nf)


def image_hom(f: GroupHom) -> tuple[FGAbelianGroup, GroupHom]:
    """Image of ``f`` as a subgroup of the codomain, with its inclusion."""
    _, proj = cokernel_hom(f)
    return kernel_hom(proj)


def direct_sum_groups(groups: Sequence[FGAbelianGroup]) -> tuple[FGAbelianGroup, list[GroupHom], list[GroupHom]]:
    """Direct sum in normal form together with injections and projections."""
    orders = [o for g in groups for o in g.orders]
    total = cyclic_sum(orders)
    injections: list[GroupHom] = []
    projections: list[GroupHom] = []
    offset = 0
    for g in groups:
        n = g.ngens
        embed = IntMatrix.from_rows(
            [[int(i == j + offset) for j in range(n)] for i in range(len(orders))], n
        ) if orders else IntMatrix(0, n, ())
        injections.append(GroupHom(g, total, total.to_nf @ embed))
        proj = IntMatrix.from_rows(
            [[int(j == i + offset) for j in range(len(orders))] for i in range(n)], len(orders)
        ) if n else IntMatrix(0, len(orders), ())
        projections.append(GroupHom(total, g, proj @ total.from_nf))
        offset += n
    return total, injections, projections


def direct_sum_homs(homs: Sequence[GroupHom]) -> GroupHom:
    """Block-diagonal sum of homomorphisms between the summed groups."""
    dom, _, dproj = direct_sum_groups([h.domain for h in homs])
    cod, cinj, _ = direct_sum_groups([h.codomain for h in homs])
    total = GroupHom.zero(dom, cod)
    for h, pi, iota in zip(homs, dproj, cinj):
        total = total + iota @ h @ pi
    return total


@dataclass(frozen=True)
class HomGroup:
    """``Hom(A, B)`` with an explicit correspondence between its elements and homomorphisms."""

    source: FGAbelianGroup
    target: FGAbelianGroup
    group: FGAbelianGroup
    entries: tuple[tuple[int, int, int], ...]  # (row, col, generator value) per summand

    def to_hom(self, coords: Sequence[int]) -> GroupHom:
        x = self.group.from_nf.apply(list(coords))
        rows = [[0] * self.source.ngens for _ in range(self.target.ngens)]
        for (i, j, g), c in zip(self.entries, x):
            rows[i][j] += g * c
        return GroupHom.from_rows(self.source, self.target, rows)

    def coords(self, f: GroupHom) -> tuple[int, ...]:
        vec = [f.matrix[i, j] // g for (i, j, g) in self.entries]
        return self.group.from_presentation(vec)

    @property
    def generators(self) -> list[GroupHom]:
        return [self.to_hom(b) for b in self.group.basis()]


def hom_group(a: FGAbelianGroup, b: FGAbelianGroup) -> HomGroup:
    """``Hom(A, B)``, computed one pair of cyclic summands at a time."""
    entries: list[tuple[int, int, int]] = []
    orders: list[int] = []
    for j, d in enumerate(a.orders):
        for i, c in enumerate(b.orders):
            if d == 0:
                gen, order = 1, c  # Hom(Z, Z/c) = Z/c, Hom(Z, Z) = Z
            elif c == 0:
                continue  # Hom(Z/d, Z) = 0
            else:
                g = gcd(d, c)
                gen, order = c // g, g
            if order == 1:
                continue
            entries.append((i, j, gen))
            orders.append(order)
    return HomGroup(a, b, cyclic_sum(orders), tuple(entries))


@dataclass(frozen=True)
class TensorGroup:
    """``A (x) B`` presented on the products of normal-form generators."""

    left: FGAbelianGroup
    right: FGAbelianGroup
    group: FGAbelianGroup

    def pair(self, i: int, j: int) -> tuple[int, ...]:
        """Normal-form coordinates of ``a_i (x) b_j``."""
        vec = [0] * (self.left.ngens * self.right.ngens)
        vec[i * self.right.ngens + j] = 1
        return self.group.from_presentation(vec)


def tensor_group(a: FGAbelianGroup, b: FGAbelianGroup) -> TensorGroup:
    na, nb = a.ngens, b.ngens
    cols: list[list[int]] = []
    for i, x in enumerate(a.orders):
        for j, y in enumerate(b.orders):
            for o in (x, y):
                if o:
                    col = [0] * (na * nb)
                    col[i * nb + j] = o
                    cols.append(col)
    rels = IntMatrix.from_columns(cols, na * nb)
    return TensorGroup(a, b, presented_group(na * nb, rels))


def tensor_homs(f: GroupHom, g: GroupHom, src: TensorGroup | None = None, dst: TensorGroup | None = None) -> GroupHom:
    """``f (x) g`` between the tensor products of domains and codomains."""
    src = src or tensor_group(f.domain, g.domain)
    dst = dst or tensor_group(f.codomain, g.codomain)
    mat = dst.group.to_nf @ kronecker(f.matrix, g.matrix) @ src.group.from_nf
    return GroupHom(src.group, dst.group, mat)


def transport(f: GroupHom, src: FGAbelianGroup, dst: FGAbelianGroup) -> GroupHom:
    """Reinterpret ``f`` between groups with identical invariants."""
    if src.key() != f.domain.key() or dst.key() != f.codomain.key():
        raise ValueError("transport needs groups with identical invariants")
    return GroupHom(src, dst, f.matrix)


__all__ = [
    "FGAbelianGroup",
    "GroupHom",
    "HomGroup",
    "NotWellDefined",
    "TensorGroup",
    "ZERO_GROUP",
    "block_diag",
    "cokernel_hom",
    "cyclic",
    "cyclic_sum",
    "direct_sum_groups",
    "direct_sum_homs",
    "free_group",
    "hom_group",
    "image_hom",
    "iso_groups",
    "kernel_hom",
    "presented_group",
    "tensor_group",
    "tensor_homs",
    "transport",
]

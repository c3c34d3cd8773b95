"""Kernels, cokernels, projective resolutions, Hom and Ext^1 of Mackey functors.

Resolutions are built from representable functors ``A_{G/H}``.  A map out of
a sum of representables is recorded by the images of the generators, each an
element of a representable level and hence a formal integer combination of
Burnside spans.  Hom into a target ``N`` is then computed with the Yoneda
identification ``Hom(A_{G/H}, N) = N(G/H)``: the induced maps between these
level groups are sums of span actions on ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .groups import (
    FGAbelianGroup,
    GroupHom,
    cokernel_hom,
    direct_sum_groups,
    free_group,
    kernel_hom,
)
from .mackey import (
    BurnsideSpan,
    MackeyFunctor,
    MackeyHom,
    SubgroupLattice,
    direct_sum,
    representable,
    representable_basis,
    span_action,
    validate,
    yoneda_hom,
    zero_functor,
)
from .matrix import IntMatrix, hstack, solve_integer


class InducedMapError(ArithmeticError):
    """A structure map failed to descend to a kernel or cokernel."""


def _relations(g: FGAbelianGroup) -> IntMatrix:
    n = g.ngens
    cols = [[g.torsion[j] if i == j else 0 for i in range(n)] for j in range(len(g.torsion))]
    return IntMatrix.from_columns(cols, n)


def factor_through_injection(f: GroupHom, inc: GroupHom) -> GroupHom:
    """The unique ``x`` with ``inc o x = f`` for an injective ``inc``."""
    big = hstack([inc.matrix, _relations(inc.codomain)], inc.codomain.ngens)
    sol = solve_integer(big, f.matrix)
    if sol is None:
        raise InducedMapError("map does not factor through the subgroup")
    return GroupHom(f.domain, inc.domain, sol.select_rows(range(inc.domain.ngens)))


def section_matrix(f: GroupHom) -> IntMatrix:
    """An integer matrix ``S`` with ``f o S = id`` on codomain coordinates (``f`` surjective)."""
    big = hstack([f.matrix, _relations(f.codomain)], f.codomain.ngens)
    sol = solve_integer(big, IntMatrix.identity(f.codomain.ngens))
    if sol is None:
        raise InducedMapError("map is not surjective")
    return sol.select_rows(range(f.domain.ngens))


def kernel_mackey(f: MackeyHom) -> tuple[MackeyFunctor, MackeyHom]:
    """Levelwise kernel of ``f`` with the induced Mackey structure."""
    m = f.domain
    lat = m.lattice
    level: dict[int, FGAbelianGroup] = {}
    inc: dict[int, GroupHom] = {}
    for h in lat.levels:
        level[h], inc[h] = kernel_hom(f.maps[h])
    res = {(h, k): factor_through_injection(m.res[(h, k)] @ inc[k], inc[h]) for (h, k) in lat.edges}
    tr = {(h, k): factor_through_injection(m.tr[(h, k)] @ inc[h], inc[k]) for (h, k) in lat.edges}
    weyl = {h: factor_through_injection(m.weyl[h] @ inc[h], inc[h]) for h in lat.levels}
    k = MackeyFunctor(lat, level, res, tr, weyl, name=f"ker({m.name or 'f'})")
    return k, MackeyHom(k, m, inc)


def cokernel_mackey(f: MackeyHom) -> tuple[MackeyFunctor, MackeyHom]:
    """Levelwise cokernel of ``f`` with the induced Mackey structure."""
    n = f.codomain
    lat = n.lattice
    level: dict[int, FGAbelianGroup] = {}
    proj: dict[int, GroupHom] = {}
    for h in lat.levels:
        level[h], proj[h] = cokernel_hom(f.maps[h])

    def induced(s: GroupHom, a: int, b: int) -> GroupHom:
        return GroupHom(level[a], level[b], proj[b].matrix @ s.matrix @ level[a].from_nf)

    res = {(h, k): induced(n.res[(h, k)], k, h) for (h, k) in lat.edges}
    tr = {(h, k): induced(n.tr[(h, k)], h, k) for (h, k) in lat.edges}
    weyl = {h: induced(n.weyl[h], h, h) for h in lat.levels}
    c = MackeyFunctor(lat, level, res, tr, weyl, name=f"coker({n.name or 'f'})")
    return c, MackeyHom(n, c, proj)


def image_mackey(f: MackeyHom) -> tuple[MackeyFunctor, MackeyHom]:
    _, proj = cokernel_mackey(f)
    return kernel_mackey(proj)


# ---------------------------------------------------------------------------
# free functors and covers

@dataclass
class FreeFunctor:
    """A direct sum of representables, one per generator level."""

    lattice: SubgroupLattice
    generators: list[int]
    functor: MackeyFunctor = field(init=False)
    offsets: dict[int, list[int]] = field(init=False)

    def __post_init__(self) -> None:
        lat = self.lattice
        if self.generators:
            self.functor = direct_sum(*[_rep(lat, h) for h in self.generators], name="P")
        else:
            self.functor = zero_functor(lat)
        self.offsets = {}
        for k in lat.levels:
            off, acc = [], 0
            for h in self.generators:
                off.append(acc)
                acc += len(representable_basis(lat, h, k))
            self.offsets[k] = off

    def multiplicities(self) -> list[tuple[int, int]]:
        return [(h, self.generators.count(h)) for h in self.lattice.levels if h in self.generators]

    def spans(self, k: int, vec: Sequence[int]) -> list[tuple[int, int, BurnsideSpan]]:
        """Decompose an element of level ``k`` into ``(summand, coefficient, span)`` terms."""
        out = []
        for a, h in enumerate(self.generators):
            base = representable_basis(self.lattice, h, k)
            off = self.offsets[k][a]
            for i, (ell, t) in enumerate(base):
                c = vec[off + i]
                if c:
                    out.append((a, c, BurnsideSpan(h, k, ell, t)))
        return out


_REP_CACHE: dict[tuple[SubgroupLattice, int], MackeyFunctor] = {}


def _rep(lat: SubgroupLattice, h: int) -> MackeyFunctor:
    key = (lat, h)
    if key not in _REP_CACHE:
        _REP_CACHE[key] = representable(lat, h)
    return _REP_CACHE[key]


def _free_map(free: FreeFunctor, target: MackeyFunctor, elements: Sequence[Sequence[int]]) -> MackeyHom:
    """The map out of a free functor sending generator ``a`` to ``elements[a]``."""
    lat = free.lattice
    maps: dict[int, GroupHom] = {}
    for k in lat.levels:
        cols: list[list[int]] = []
        for h, x in zip(free.generators, elements):
            y = yoneda_hom(h, target, x, _rep(lat, h))[k]
            cols.extend(y.matrix.columns())
        mat = IntMatrix.from_columns(cols, target.level[k].ngens)
        maps[k] = GroupHom(free.functor.level[k], target.level[k], mat)
    return MackeyHom(free.functor, target, maps)


@dataclass
class Cover:
    free: FreeFunctor
    elements: list[tuple[int, ...]]
    epsilon: MackeyHom


def projective_cover_step(m: MackeyFunctor, order: str = "top") -> Cover:
    """Cover ``m`` by representables, adding generators only where needed.

    Levels are visited top first (``order="top"``) or bottom first
    (``order="bottom"``).  At each level one generator is added at a time,
    taken from the cokernel of the map out of the representables chosen so
    far, until that cokernel vanishes.  A final pass drops every generator
    whose removal keeps the map surjective, trying the largest
    representables first.
    """
    lat = m.lattice
    levels = list(lat.levels) if order == "top" else list(reversed(lat.levels))
    gens: list[int] = []
    elements: list[tuple[int, ...]] = []
    images: list[MackeyHom] = []

    def cokernel_at(k: int, chosen: Sequence[int]) -> FGAbelianGroup:
        cols: list[list[int]] = []
        for i in chosen:
            cols.extend(images[i][k].matrix.columns())
        eps_k = GroupHom(free_group(len(cols)), m.level[k], IntMatrix.from_columns(cols, m.level[k].ngens))
        return cokernel_hom(eps_k)[0]

    for k in levels:
        while True:
            c = cokernel_at(k, range(len(gens)))
            if c.is_zero():
                break
            lift = m.level[k].reduce(c.from_nf.column(0))
            gens.append(k)
            elements.append(lift)
            images.append(yoneda_hom(k, m, lift, _rep(lat, k)))

    keep = list(range(len(gens)))
    size = {h: sum(_rep(lat, h).ranks()[k][0] for k in lat.levels) for h in lat.levels}
    for i in sorted(keep, key=lambda j: (-size[gens[j]], -j)):
        trial = [j for j in keep if j != i]
        if all(cokernel_at(k, trial).is_zero() for k in lat.levels):
            keep = trial
    gens = [gens[i] for i in keep]
    elements = [elements[i] for i in keep]
    free = FreeFunctor(lat, gens)
    return Cover(free, elements, _free_map(free, m, elements))


@dataclass
class ProjectiveResolution:
    """``P2 -> P1 -> P0 -> M -> 0`` with each ``P_i`` a sum of representables.

    ``images[i][j]`` is the element of ``P_i`` hit by generator ``j`` of
    ``P_{i+1}``; ``images[0]`` lists the images of the generators of ``P0`` in M.
    """

    target: MackeyFunctor
    terms: list[FreeFunctor]
    images: list[list[tuple[int, ...]]]
    maps: list[MackeyHom]  # epsilon, d1, d2

    @property
    def augmentation(self) -> MackeyHom:
        return self.maps[0]

    def differential_spans(self, i: int) -> list[list[tuple[int, int, BurnsideSpan]]]:
        """Column ``j`` of ``d_i`` as a formal combination of spans into summands of ``P_{i-1}``."""
        src, dst = self.terms[i], self.terms[i - 1]
        return [dst.spans(h, v) for h, v in zip(src.generators, self.images[i])]

    def violations(self) -> list[str]:
        out: list[str] = []
        eps = self.maps[0]
        if not eps.is_surjective():
            out.append("augmentation is not surjective")
        chain = [eps] + self.maps[1:]
        for a, b in zip(chain, chain[1:]):
            if not (a @ b).is_zero():
                out.append("consecutive maps do not compose to zero")
        lat = self.target.lattice
        for a, b in zip(chain, chain[1:]):
            for h in lat.levels:
                ker, inc = kernel_hom(a.maps[h])
                into = factor_through_injection(b.maps[h], inc)
                if not cokernel_hom(into)[0].is_zero():
                    out.append(f"not exact at level {lat.level_name(h)}")
        return out


def resolution(m: MackeyFunctor, length: int = 2, order: str = "top") -> ProjectiveResolution:
    """A projective resolution of ``m`` of the given length (at most 2)."""
    if not 0 <= length <= 2:
        raise ValueError("resolutions are computed up to length 2")
    cover = projective_cover_step(m, order)
    terms = [cover.free]
    images = [list(cover.elements)]
    maps = [cover.epsilon]
    current = cover.epsilon
    for _ in range(length):
        ker, inc = kernel_mackey(current)
        step = projective_cover_step(ker, order)
        lifted = [inc.maps[h](x) for h, x in zip(step.free.generators, step.elements)]
        d = _free_map(step.free, current.domain, lifted)
        terms.append(step.free)
        images.append(lifted)
        maps.append(d)
        current = d
    return ProjectiveResolution(m, terms, images, maps)


# ---------------------------------------------------------------------------
# Hom and Ext via Yoneda

@dataclass
class YonedaComplex:
    """The cochain complex ``Hom(P_0, N) -> Hom(P_1, N) -> Hom(P_2, N)``."""

    groups: list[FGAbelianGroup]
    projections: list[list[GroupHom]]
    differentials: list[GroupHom]


def yoneda_complex(res: ProjectiveResolution, n: MackeyFunctor) -> YonedaComplex:
    cache: dict[BurnsideSpan, GroupHom] = {}

    def act(s: BurnsideSpan) -> GroupHom:
        if s not in cache:
            cache[s] = span_action(s, n)
        return cache[s]

    groups: list[FGAbelianGroup] = []
    injections: list[list[GroupHom]] = []
    projections: list[list[GroupHom]] = []
    for term in res.terms:
        g, inj, proj = direct_sum_groups([n.level[h] for h in term.generators])
        groups.append(g)
        injections.append(inj)
        projections.append(proj)
    diffs: list[GroupHom] = []
    for i in range(1, len(res.terms)):
        total = GroupHom.zero(groups[i - 1], groups[i])
        for j, terms in enumerate(res.differential_spans(i)):
            for a, c, s in terms:
                total = total + (injections[i][j] @ act(s) @ projections[i - 1][a]).scale(c)
        diffs.append(total)
    return YonedaComplex(groups, projections, diffs)


def _resolution_cached(m: MackeyFunctor, order: str) -> ProjectiveResolution:
    key = (id(m), order)
    hit = _RES_CACHE.get(key)
    if hit is not None and hit.target is m:
        return hit
    r = resolution(m, 2, order)
    _RES_CACHE[key] = r
    return r


_RES_CACHE: dict[tuple[int, str], ProjectiveResolution] = {}


def hom_mackey(m: MackeyFunctor, n: MackeyFunctor, order: str = "top") -> tuple[FGAbelianGroup, list[MackeyHom]]:
    """``Hom(M, N)`` with one explicit Mackey homomorphism per normal-form generator."""
    if m.lattice != n.lattice:
        raise ValueError("Hom between functors over different lattices")
    res = _resolution_cached(m, order)
    cx = yoneda_complex(res, n)
    d0 = cx.differentials[0] if cx.differentials else GroupHom.zero(cx.groups[0], free_group(0))
    group, inc = kernel_hom(d0)
    eps = res.augmentation
    lat = m.lattice
    sections = {h: section_matrix(eps.maps[h]) for h in lat.levels}
    free = res.terms[0]
    homs: list[MackeyHom] = []
    for b in group.basis():
        elt = inc(b)
        parts = [proj(elt) for proj in cx.projections[0]]
        phi = _free_map(free, n, parts)
        maps = {h: GroupHom(m.level[h], n.level[h], phi.maps[h].matrix @ sections[h]) for h in lat.levels}
        homs.append(MackeyHom(m, n, maps))
    return group, homs


def ext1(m: MackeyFunctor, n: MackeyFunctor, order: str = "top") -> FGAbelianGroup:
    """``Ext^1(M, N)`` as the first cohomology of the Yoneda-reduced complex."""
    if m.lattice != n.lattice:
        raise ValueError("Ext between functors over different lattices")
    res = _resolution_cached(m, order)
    cx = yoneda_complex(res, n)
    d0, d1 = cx.differentials
    _, inc = kernel_hom(d1)
    boundary = factor_through_injection(d0, inc)
    return cokernel_hom(boundary)[0]


__all__ = [
    "Cover",
    "FreeFunctor",
    "InducedMapError",
    "ProjectiveResolution",
    "YonedaComplex",
    "cokernel_mackey",
    "ext1",
    "factor_through_injection",
    "hom_mackey",
    "image_mackey",
    "kernel_mackey",
    "projective_cover_step",
    "resolution",
    "section_matrix",
    "validate",
    "yoneda_complex",
]

"""Independent computation of H^alpha_{C_n}(S^0) from cell structures.

For ``alpha = m + P - N`` with honest representations ``P`` and ``N``,
``H^alpha(S^0)(G/H)`` is the degree ``m`` cohomology of ``S^N ^ D(S^P)``
with coefficients in the representable functor ``A_{G/H}``.

A cell complex here is a chain complex of finite G-sets whose differentials
are integer combinations of G-maps.  A "pull" term in degree ``j`` is a
G-map ``S_j -> S_{j-1}`` (what a space has); a "push" term is a G-map
``S_{j-1} -> S_j`` whose transfer is the differential (what a dual has).
G-sets are lists of blocks; a block is a product of cyclic orbits
``Z/m_1 x ... x Z/m_r`` on which the generator adds 1 in every slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Callable, Sequence

from cpqmackey.groups import FGAbelianGroup, presented_group
from cpqmackey.mackey import BurnsideSpan, SubgroupLattice, representable, span_action
from cpqmackey.matrix import IntMatrix, integer_kernel, solve_integer

Block = tuple[int, ...]
Point = tuple[int, ...]


def _lcm(values: Sequence[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@dataclass
class Term:
    degree: int  # chain degree of the source of the differential
    coef: int
    kind: str  # "pull" or "push"
    src: int  # block index in degree ``degree`` (pull) or ``degree - 1`` (push)
    dst: int
    fn: Callable[[Point], Point]


@dataclass
class Complex:
    n: int
    blocks: dict[int, list[Block]] = field(default_factory=dict)
    terms: list[Term] = field(default_factory=list)


def sphere_complex(n: int, exponents: Sequence[int]) -> Complex:
    """Reduced cells of ``S^V`` for ``V = sum xi^k``, kernels nested from large to small."""
    ks = list(exponents)
    orders = [gcd(k, n) for k in ks]
    for a, b in zip(orders, orders[1:]):
        assert a % b == 0, "kernels must be nested"
    cx = Complex(n, {0: [(1,)]})
    if ks:
        cx.terms.append(Term(1, 1, "pull", 0, 0, lambda x: (0,)))
    for i, (k, c) in enumerate(zip(ks, orders), start=1):
        m = n // c
        cx.blocks[2 * i - 1] = [(m,)]
        cx.blocks[2 * i] = [(m,)]
        # the generator of G/K that moves the base point one step along the circle
        s = pow(k // c, -1, m) if m > 1 else 0
        cx.terms.append(Term(2 * i, 1, "pull", 0, 0, lambda x, s=s, m=m: ((x[0] + s) % m,)))
        cx.terms.append(Term(2 * i, -1, "pull", 0, 0, lambda x: x))
        if i > 1:
            prev = n // orders[i - 2]
            for t in range(prev):
                cx.terms.append(Term(2 * i - 1, 1, "pull", 0, 0, lambda x, t=t, prev=prev: ((x[0] + t) % prev,)))
    return cx


def dual(cx: Complex) -> Complex:
    out = Complex(cx.n, {-d: list(b) for d, b in cx.blocks.items()})
    for t in cx.terms:
        # a map S_j -> S_{j-1} becomes a map from degree -j up to degree -(j-1)
        out.terms.append(Term(-t.degree + 1, t.coef, "push" if t.kind == "pull" else "pull", t.src, t.dst, t.fn))
    return out


def smash(x: Complex, y: Complex) -> Complex:
    out = Complex(x.n)
    index: dict[tuple[int, int, int, int], tuple[int, int]] = {}
    for i, xb in sorted(x.blocks.items()):
        for k, yb in sorted(y.blocks.items()):
            for a, ba in enumerate(xb):
                for b, bb in enumerate(yb):
                    d = i + k
                    lst = out.blocks.setdefault(d, [])
                    index[(i, a, k, b)] = (d, len(lst))
                    lst.append(ba + bb)

    def lookup(i: int, a: int, k: int, b: int) -> int:
        return index[(i, a, k, b)][1]

    for t in x.terms:
        lo_i = t.degree - 1
        for k, yb in y.blocks.items():
            for b, bb in enumerate(yb):
                src_deg, dst_deg = (t.degree, lo_i) if t.kind == "pull" else (lo_i, t.degree)
                ln = len(x.blocks[src_deg][t.src])
                out.terms.append(
                    Term(
                        t.degree + k,
                        t.coef,
                        t.kind,
                        lookup(src_deg, t.src, k, b),
                        lookup(dst_deg, t.dst, k, b),
                        lambda pt, f=t.fn, ln=ln: f(pt[:ln]) + pt[ln:],
                    )
                )
    for t in y.terms:
        lo_k = t.degree - 1
        for i, xb in x.blocks.items():
            sign = -1 if i % 2 else 1
            for a, ba in enumerate(xb):
                src_deg, dst_deg = (t.degree, lo_k) if t.kind == "pull" else (lo_k, t.degree)
                ln = len(ba)
                out.terms.append(
                    Term(
                        i + t.degree,
                        sign * t.coef,
                        t.kind,
                        lookup(i, a, src_deg, t.src),
                        lookup(i, a, dst_deg, t.dst),
                        lambda pt, f=t.fn, ln=ln: pt[:ln] + f(pt[ln:]),
                    )
                )
    return out


# -- orbits of product blocks ------------------------------------------------


def _anchor(block: Block) -> tuple[int, list[int]]:
    """The orbit period and the slots used to pin down representatives."""
    period = _lcm(block)
    full = [j for j, m in enumerate(block) if m == period]
    if full or period == 1:
        return period, full[:1]
    slots: list[int] = []
    covered = 1
    for j, m in enumerate(block):
        if m > 1 and gcd(covered, m) == 1:
            slots.append(j)
            covered *= m
    assert covered == period
    return period, slots


def orbit_reps(block: Block) -> list[Point]:
    _, slots = _anchor(block)
    ranges = [range(1) if j in slots else range(m) for j, m in enumerate(block)]
    out: list[Point] = [()]
    for r in ranges:
        out = [pt + (v,) for pt in out for v in r]
    return out


def locate(block: Block, pt: Point) -> tuple[Point, int]:
    """Write ``pt`` as ``g^s`` applied to its orbit representative."""
    period, slots = _anchor(block)
    s = 0
    for j in slots:  # Chinese remainder: s = pt[j] mod block[j] on every anchor slot
        m = block[j]
        while s % m != pt[j] % m:
            s += _lcm([block[i] for i in slots if i < j] or [1])
    rep = tuple((v - s) % m for v, m in zip(pt, block))
    return rep, s % period if period else 0


# -- cochains ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _rep_functor(p: int, q: int, h: int):
    return representable(SubgroupLattice(p, q), h)


@lru_cache(maxsize=None)
def _span_matrix(p: int, q: int, h: int, src: int, dst: int, mid: int, twist: int) -> IntMatrix:
    return span_action(BurnsideSpan(src, dst, mid, twist), _rep_functor(p, q, h)).matrix


def cochain_differential(cx: Complex, degree: int, p: int, q: int, h: int) -> tuple[IntMatrix, int, int]:
    """The coboundary ``C^{degree-1} -> C^{degree}`` with coefficients ``A_{G/h}``."""
    n = cx.n
    rep_f = _rep_functor(p, q, h)

    def layout(d: int) -> tuple[dict[tuple[int, Point], int], int]:
        offs: dict[tuple[int, Point], int] = {}
        pos = 0
        for b, block in enumerate(cx.blocks.get(d, [])):
            stab = n // _lcm(block)
            for rep in orbit_reps(block):
                offs[(b, rep)] = pos
                pos += rep_f.level[stab].ngens
        return offs, pos

    src_off, src_dim = layout(degree - 1)
    dst_off, dst_dim = layout(degree)
    rows = [[0] * src_dim for _ in range(dst_dim)]
    for t in cx.terms:
        if t.degree != degree:
            continue
        # orbits of the domain of the G-map
        dom_deg = degree if t.kind == "pull" else degree - 1
        cod_deg = degree - 1 if t.kind == "pull" else degree
        dom_block = cx.blocks[dom_deg][t.src]
        cod_block = cx.blocks[cod_deg][t.dst]
        k_dom = n // _lcm(dom_block)
        k_cod = n // _lcm(cod_block)
        for rep in orbit_reps(dom_block):
            image, s = locate(cod_block, t.fn(rep))
            if t.kind == "pull":
                mat = _span_matrix(p, q, h, k_cod, k_dom, k_dom, s)
                r0, c0 = dst_off[(t.src, rep)], src_off[(t.dst, image)]
            else:
                mat = _span_matrix(p, q, h, k_dom, k_cod, k_dom, -s)
                r0, c0 = dst_off[(t.dst, image)], src_off[(t.src, rep)]
            for i, row in enumerate(mat.to_rows()):
                for j, v in enumerate(row):
                    if v:
                        rows[r0 + i][c0 + j] += t.coef * v
    return IntMatrix.from_rows(rows, src_dim), src_dim, dst_dim


def cohomology_group(cx: Complex, m: int, p: int, q: int, h: int) -> FGAbelianGroup:
    a, _, mid = cochain_differential(cx, m, p, q, h)
    b, _, _ = cochain_differential(cx, m + 1, p, q, h)
    if mid == 0:
        return presented_group(0, IntMatrix.zeros(0, 0))
    kb = integer_kernel(b) if b.rows else IntMatrix.identity(mid)
    if kb.cols == 0:
        return presented_group(0, IntMatrix.zeros(0, 0))
    coords = solve_integer(kb, a) if a.cols else IntMatrix.zeros(kb.cols, 0)
    assert coords is not None, "coboundary does not land in the cocycles"
    return presented_group(kb.cols, coords)


def check_square_zero(cx: Complex, degree: int, p: int, q: int, h: int) -> bool:
    a, _, _ = cochain_differential(cx, degree, p, q, h)
    b, _, _ = cochain_differential(cx, degree + 1, p, q, h)
    if not a.cols or not b.rows:
        return True
    return (b @ a).is_zero()


# -- representations -----------------------------------------------------------


def _split(n: int, twists: dict[int, int], p: int, q: int) -> tuple[list[int], list[int]]:
    """Exponent lists for the (C_p, free) nested chain and the C_q chain."""
    chain_p: list[int] = []
    chain_q: list[int] = []
    for k in sorted(twists, key=lambda k: -gcd(k, n)):
        c = twists[k]
        for _ in range(c):
            (chain_q if k % q == 0 and k % p else chain_p).append(k)
    return chain_p, chain_q


def sphere_of(n: int, twists: dict[int, int], p: int, q: int) -> Complex:
    """``S^V`` as a smash of two nested chains (kernel C_p then free, and kernel C_q)."""
    a, b = _split(n, twists, p, q)
    return smash(sphere_complex(n, a), sphere_complex(n, b))


def point_cohomology(trivial: int, twists: dict[int, int], p: int, q: int, level: int) -> FGAbelianGroup:
    """``H^alpha(S^0)(G/level)`` for ``alpha = trivial + sum twists[k] xi^k``."""
    n = p * q
    pos = {k: c for k, c in twists.items() if c > 0}
    neg = {k: -c for k, c in twists.items() if c < 0}
    cx = smash(sphere_of(n, neg, p, q), dual(sphere_of(n, pos, p, q)))
    return cohomology_group(cx, trivial, p, q, level)

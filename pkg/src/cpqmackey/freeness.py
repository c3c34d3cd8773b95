"""Even-type cell complexes and the conditions under which their cohomology is free.

A cell ``G x_K D(V)`` is recorded by its orbit level ``K`` (a subgroup
order), the honest representation ``V`` and the stage at which it is
attached.  Attaching maps are not modelled: whether the cohomology splits
is decided from fixed-point dimensions alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping, Sequence

from .cohomology import (
    FixedDims,
    NotTabulated,
    NotTabulatedError,
    VirtualRep,
    cohomology_orbit,
    cohomology_point,
    fixed_dims,
    level_groups,
    lewis_table,
    orbit_level_groups,
)
from .groups import FGAbelianGroup


def _levels(p: int, q: int) -> dict[int, int]:
    """Subgroup order -> index into a fixed-dims tuple."""
    return {1: 0, p: 1, q: 2, p * q: 3}


def ll(W: VirtualRep, V: VirtualRep, strong: bool = False) -> bool:
    """The order ``W << V`` on honest representations.

    Evaluated literally: whenever ``|W^S| < |V^S|``, every ``T`` containing
    ``S`` must have ``|W^T| <= |V^T|``.  With ``strong`` the pair is also
    accepted when ``|W| < |V|`` and the ``C_p`` and ``C_q`` dimensions agree.
    """
    if not (W.is_actual() and V.is_actual()):
        raise ValueError("ll compares honest representations")
    if (W.p, W.q) != (V.p, V.q):
        raise ValueError("representations of different groups")
    w, v = fixed_dims(W).as_tuple(), fixed_dims(V).as_tuple()
    return dims_ll(w, v, W.p, W.q, strong)


def dims_ll(w: Sequence[int], v: Sequence[int], p: int, q: int, strong: bool = False) -> bool:
    """``ll`` on fixed-dims quadruples ``(|.|, |.^{C_p}|, |.^{C_q}|, |.^{C_pq}|)``."""
    idx = _levels(p, q)
    ok = True
    for s, i in idx.items():
        if w[i] < v[i]:
            for t, j in idx.items():
                if t % s == 0 and w[j] > v[j]:
                    ok = False
    if not ok and strong:
        return w[0] < v[0] and w[1] == v[1] and w[2] == v[2]
    return ok


# ---------------------------------------------------------------------------
# cells and complexes


@dataclass(frozen=True)
class Cell:
    stage: int
    K: int  # order of the isotropy subgroup of the orbit G/K
    rep: VirtualRep
    label: str = ""

    def __post_init__(self) -> None:
        if not self.rep.is_actual():
            raise ValueError(f"cell representation {self.rep} is not honest")
        n = self.rep.p * self.rep.q
        if self.K not in _levels(self.rep.p, self.rep.q):
            raise ValueError(f"orbit level {self.K} is not a subgroup order of C_{n}")

    @property
    def even(self) -> bool:
        return self.rep.trivial % 2 == 0

    @property
    def dims(self) -> FixedDims:
        return fixed_dims(self.rep)

    @property
    def name(self) -> str:
        return self.label or str(self.rep)


@dataclass
class CellComplex:
    p: int
    q: int
    base: list[int] = field(default_factory=lambda: [])
    cells: list[Cell] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.base and not self.cells:
            self.base = [self.p * self.q]
        levels = _levels(self.p, self.q)
        for k in self.base:
            if k not in levels:
                raise ValueError(f"base orbit level {k} is not a subgroup order")
        stages = [c.stage for c in self.cells]
        if stages != sorted(stages):
            raise ValueError("cells must be listed in stage order")
        if any(c.stage < 0 for c in self.cells):
            raise ValueError("cell stages start at 0")

    def to_json(self) -> dict:
        cells = []
        for c in self.cells:
            entry = {"stage": c.stage, "K": c.K, "rep": c.rep.to_json()}
            if c.label:
                entry["label"] = c.label
            cells.append(entry)
        return {"p": self.p, "q": self.q, "base": list(self.base), "cells": cells}

    @classmethod
    def from_json(cls, data: Mapping) -> "CellComplex":
        p, q = int(data["p"]), int(data["q"])
        cells = [
            Cell(int(c["stage"]), int(c["K"]), VirtualRep.from_json(c["rep"], p, q), str(c.get("label", "")))
            for c in data.get("cells", [])
        ]
        return cls(p, q, [int(k) for k in data.get("base", [p * q])], cells)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "CellComplex":
        return cls.from_json(json.loads(text))


@dataclass(frozen=True)
class _BaseCell:
    """A summand ``H^*(G/K_+)`` of the base, treated as a cell at stage -1."""

    K: int
    rep: VirtualRep
    stage: int = -1

    @property
    def name(self) -> str:
        return "X0"


# ---------------------------------------------------------------------------
# even type


@dataclass
class EvenTypeReport:
    odd_cells: list[int] = field(default_factory=list)
    ll_violations: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.odd_cells and not self.ll_violations

    def __bool__(self) -> bool:
        return self.ok

    def lines(self, X: CellComplex) -> list[str]:
        out = [f"odd cell #{i}: {X.cells[i].name} (trivial multiplicity {X.cells[i].rep.trivial})" for i in self.odd_cells]
        for i, j in self.ll_violations:
            a, b = X.cells[i], X.cells[j]
            out.append(f"not {a.name} << {b.name}: dims {a.dims} vs {b.dims} (stages {a.stage} < {b.stage})")
        return out


def check_even_type(X: CellComplex, strong: bool = False) -> EvenTypeReport:
    """Every cell even, and ``W << V`` whenever ``W`` is attached at an earlier stage than ``V``."""
    report = EvenTypeReport()
    report.odd_cells = [i for i, c in enumerate(X.cells) if not c.even]
    for i, a in enumerate(X.cells):
        for j, b in enumerate(X.cells):
            if a.stage < b.stage and not ll(a.rep, b.rep, strong):
                report.ll_violations.append((i, j))
    return report


# ---------------------------------------------------------------------------
# vanishing of the connecting maps


@dataclass(frozen=True)
class VanishingResult:
    """The group that classifies module maps ``H^{*-W}(G/K_+) -> H^{*-V+1}(G/K'_+)``."""

    alpha: FixedDims
    K: int
    K_prime: int
    group: FGAbelianGroup
    functor: str  # the cohomology the group was read from
    branch: str

    @property
    def vanishes(self) -> bool:
        return self.group.rank == 0 and not self.group.torsion

    def __bool__(self) -> bool:
        return self.vanishes


def _top_branch(W: FixedDims, V: FixedDims) -> str:
    """Which case of the top-level argument a pair falls into."""
    if W.a_e < V.a_e:
        return "|W|<|V|: all fixed dims of alpha at most 1"
    if W.a_p < V.a_p or W.a_q < V.a_q:
        return "|W|>=|V| with a smaller C_p or C_q dim"
    return "|W|>=|V|: alpha positive below the top"


def verify_vanishing(W: VirtualRep, V: VirtualRep, K: int, K_prime: int) -> VanishingResult:
    """Check the group that receives the connecting map vanishes at ``alpha = W + 1 - V``.

    ``K`` is the orbit of the earlier cell ``W``, ``K_prime`` that of ``V``.
    The result is truthy exactly when the group is zero.
    """
    p, q = W.p, W.q
    n = p * q
    for rep in (W, V):
        if not rep.is_actual() or rep.trivial % 2:
            raise ValueError(f"{rep} is not an even honest representation")
    for k in (K, K_prime):
        if k not in _levels(p, q):
            raise ValueError(f"orbit level {k} is not a subgroup order")
    alpha = W.shifted(1) - V
    dims = fixed_dims(alpha)

    if K == n and K_prime == n:
        ans = cohomology_point(dims, p=p, q=q)
        if isinstance(ans, NotTabulated):
            assert not ll(W, V), f"even pair with W << V reached an open table entry at {dims}"
            raise NotTabulatedError(ans.reason)
        return VanishingResult(dims, K, K_prime, level_groups(ans, n), str(ans), _top_branch(fixed_dims(W), fixed_dims(V)))

    if K == n:
        # the image of 1 in the top group of H^alpha(G/K'_+)
        ans = cohomology_orbit(dims, _orbit_name(K_prime, p, q), p=p, q=q)
        return VanishingResult(dims, K, K_prime, level_groups(ans, n), str(ans), "top group of the orbit cohomology")

    if K == 1:
        # a sum of copies of the underlying group, which only sees |alpha|
        if K_prime == n:
            group = orbit_level_groups(dims, 1, p, q)
            functor = f"H^alpha(S^0)(G/e) for |alpha|={dims.a_e}"
        else:
            ans = cohomology_orbit(dims, _orbit_name(K_prime, p, q), p=p, q=q)
            group, functor = level_groups(ans, 1), str(ans)
        return VanishingResult(dims, K, K_prime, group, functor, "underlying level, parity of |alpha|")

    # K = C_r: reduce to C_r-cohomology of G/K'_+, a sum of copies of
    # C_r/C_r (when C_r fixes G/K') or C_r/e (otherwise)
    side = "p" if K == p else "q"
    a_r = dims.a_p if side == "p" else dims.a_q
    lew = lewis_table(dims.a_e, a_r, p=p, q=q, side=side)
    if isinstance(lew, NotTabulated):  # pragma: no cover - the C_r table is total
        raise NotTabulatedError(lew.reason)
    r = K
    group = level_groups(lew, r if K_prime % r == 0 else 1)
    return VanishingResult(dims, K, K_prime, group, str(lew), f"C_{side} table at ({dims.a_e}, {a_r})")


def _orbit_name(k: int, p: int, q: int) -> str:
    return {1: "e", p: "C_p", q: "C_q"}[k]


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class Generator:
    """One free summand ``Sigma^V H^*(G/K_+)``."""

    rep: VirtualRep
    K: int
    label: str
    stage: int

    @property
    def dims(self) -> FixedDims:
        return fixed_dims(self.rep)


@dataclass
class FreenessReport:
    even_type: EvenTypeReport
    failures: list[tuple[str, str, VanishingResult]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.even_type.ok and not self.failures

    def lines(self, X: CellComplex) -> list[str]:
        out = self.even_type.lines(X)
        for a, b, res in self.failures:
            out.append(
                f"nonzero obstruction for {a} -> {b} (K={res.K}, K'={res.K_prime}): "
                f"alpha {res.alpha}, group {res.group} from {res.functor}"
            )
        return out


class FreenessViolation(Exception):
    def __init__(self, report: FreenessReport, complex_: CellComplex) -> None:
        self.report = report
        self.complex = complex_
        super().__init__("; ".join(report.lines(complex_)) or "freeness hypotheses fail")


def freeness_report(X: CellComplex, strong: bool = False) -> FreenessReport:
    """Run the even-type check and every vanishing check the decomposition relies on."""
    report = FreenessReport(check_even_type(X, strong))
    earlier: list = [_BaseCell(k, VirtualRep.zero(X.p, X.q)) for k in X.base]
    by_stage: dict[int, list[Cell]] = {}
    for c in X.cells:
        by_stage.setdefault(c.stage, []).append(c)
    for stage in sorted(by_stage):
        for b in by_stage[stage]:
            if not b.even:
                continue
            for a in earlier:
                if a.rep.trivial % 2:
                    continue
                try:
                    res = verify_vanishing(a.rep, b.rep, a.K, b.K)
                except NotTabulatedError as exc:
                    raise FreenessViolation(report, X) from exc
                if not res:
                    report.failures.append((a.name, b.name, res))
        earlier.extend(by_stage[stage])
    return report


def free_decomposition(X: CellComplex, strong: bool = False) -> list[Generator]:
    """Generators of ``H^*(X_+)``: one per base orbit, then one per cell in stage order."""
    report = freeness_report(X, strong)
    if not report.ok:
        raise FreenessViolation(report, X)
    zero = VirtualRep.zero(X.p, X.q)
    gens = [Generator(zero, k, "0", -1) for k in X.base]
    gens.extend(Generator(c.rep, c.K, c.name, c.stage) for c in X.cells)
    return gens


# ---------------------------------------------------------------------------
# builders


def projective_space_complex(n: int, p: int, q: int) -> CellComplex:
    """Cells ``D(W_k)``, ``W_k = xi^{-k} (x) (1 + xi + ... + xi^{k-1})``, for ``k = 1..n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    cells = []
    for k in range(1, n + 1):
        rep = VirtualRep.build(p, q, 0, _count(j - k for j in range(k)))
        expected = (2 * k, 2 * (k // p), 2 * (k // q), 2 * (k // (p * q)))
        assert fixed_dims(rep).as_tuple() == expected, (k, fixed_dims(rep), expected)
        cells.append(Cell(k, p * q, rep, f"W_{k}"))
    return CellComplex(p, q, [p * q], cells)


def _count(exponents: Iterable[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for e in exponents:
        out[e] = out.get(e, 0) + 1
    return out


def schubert_sequences(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Monotone ``0 <= a_1 <= ... <= a_k <= n - k``, ordered by ``sum(a)`` then lexicographically."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    seqs = combinations_with_replacement(range(n - k + 1), k)
    yield from sorted(seqs, key=lambda a: (sum(a), a))


def schubert_rep(a: Sequence[int], p: int, q: int) -> VirtualRep:
    """Tangent representation of the Schubert cell with pivots ``a_i + i``.

    Row ``i`` has a free entry in every column ``j`` left of its pivot that is
    not an earlier pivot; it carries the weight ``xi^{j - (a_i + i)}``.
    """
    weights: list[int] = []
    for i, ai in enumerate(a, start=1):
        pivot = ai + i
        earlier = {a[l - 1] + l for l in range(1, i)}
        weights.extend(j - pivot for j in range(1, pivot) if j not in earlier)
    return VirtualRep.build(p, q, 0, _count(weights))


def grassmannian_formula_dims(a: Sequence[int], p: int, q: int) -> tuple[int, int, int, int]:
    """The closed form ``2 * sum floor(a_i / h)`` over ``h = 1, p, q, pq``.

    It agrees with ``schubert_rep`` when ``k = 1`` but not in general.
    """
    return tuple(2 * sum(x // h for x in a) for h in (1, p, q, p * q))  # type: ignore[return-value]


def grassmannian_complex(n: int, k: int, p: int, q: int, *, check_formula: bool = False) -> CellComplex:
    """Schubert cells of ``G(U(n), k)``, staged by ``sum(a)``.

    With ``check_formula`` each cell's dims are asserted against
    ``grassmannian_formula_dims``.
    """
    cells = []
    for a in schubert_sequences(n, k):
        rep = schubert_rep(a, p, q)
        assert fixed_dims(rep).a_e == 2 * sum(a)
        if check_formula:
            assert fixed_dims(rep).as_tuple() == grassmannian_formula_dims(a, p, q), (a, fixed_dims(rep))
        cells.append(Cell(sum(a), p * q, rep, "W_(" + ",".join(map(str, a)) + ")"))
    return CellComplex(p, q, [], cells) if cells else CellComplex(p, q)


def entrywise_pairs(n: int, k: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs ``a <= b`` (entrywise, ``a != b``) of Schubert sequences."""
    seqs = list(schubert_sequences(n, k))
    for a in seqs:
        for b in seqs:
            if a != b and all(x <= y for x, y in zip(a, b)):
                yield a, b


# ---------------------------------------------------------------------------
# output


def _level_name(k: int, p: int, q: int) -> str:
    return {1: "e", p: "C_p", q: "C_q", p * q: "G"}[k]


def generator_rows(gens: Sequence[Generator], p: int, q: int) -> list[tuple[str, str, tuple[int, int, int, int]]]:
    return [(g.label, _level_name(g.K, p, q), g.dims.as_tuple()) for g in gens]


def generator_table(gens: Sequence[Generator], p: int, q: int) -> str:
    """A plain-text table with one row per generator."""
    rows = [(label, k, "(" + ",".join(map(str, d)) + ")") for label, k, d in generator_rows(gens, p, q)]
    head = ("cell", "K", "fixed dims")
    widths = [max(len(r[i]) for r in rows + [head]) for i in range(3)]
    fmt = "  ".join("{:<%d}" % w for w in widths)
    lines = [fmt.format(*head).rstrip(), fmt.format(*("-" * w for w in widths))]
    lines.extend(fmt.format(*r).rstrip() for r in rows)
    return "\n".join(lines)

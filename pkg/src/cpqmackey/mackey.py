"""Mackey functors for the cyclic groups C_p and C_pq.

Subgroups of a cyclic group are determined by their order, so a lattice
level is simply an integer ``h`` dividing ``|G|``.  A Mackey functor stores

* a group ``M(G/H)`` per level,
* restriction and transfer along every covering edge ``H < K`` of prime index,
* the automorphism ``w_H`` of ``M(G/H)`` by which the fixed generator ``g`` of
  ``G`` acts.

Restrictions and transfers between non-adjacent levels are composites; the
validator checks that the two routes through the C_pq diamond agree.

Conjugation by ``g**t`` on ``M(G/H)`` is ``w_H**t``.  A span
``G/K <- G/L -> G/H`` with twist ``t`` acts as ``tr^H_L o w_L^t o res^K_L``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence

from .groups import (
    FGAbelianGroup,
    GroupHom,
    TensorGroup,
    direct_sum_groups,
    direct_sum_homs,
    free_group,
    tensor_group,
    tensor_homs,
)
from .matrix import IntMatrix


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


class LatticeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SubgroupLattice:
    """Subgroup lattice of ``C_p`` (``q is None``) or ``C_pq``."""

    p: int
    q: int | None = None

    def __post_init__(self) -> None:
        primes = [self.p] if self.q is None else [self.p, self.q]
        for r in primes:
            if not is_prime(r) or r == 2:
                raise ValueError(f"{r} is not an odd prime")
        if self.q is not None and self.p == self.q:
            raise ValueError("p and q must be distinct")

    @classmethod
    def cyclic(cls, p: int, q: int | None = None) -> "SubgroupLattice":
        return cls(p, q)

    @property
    def is_prime(self) -> bool:
        return self.q is None

    @property
    def order(self) -> int:
        return self.p if self.q is None else self.p * self.q

    @property
    def primes(self) -> tuple[int, ...]:
        return (self.p,) if self.q is None else (self.p, self.q)

    @cached_property
    def levels(self) -> tuple[int, ...]:
        """Subgroup orders, top level first."""
        if self.q is None:
            return (self.p, 1)
        return (self.p * self.q, self.p, self.q, 1)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Covering pairs ``(H, K)`` with ``H < K`` of prime index."""
        if self.q is None:
            return ((1, self.p),)
        p, q = self.p, self.q
        return ((1, p), (1, q), (p, p * q), (q, p * q))

    def index(self, h: int) -> int:
        return self.order // h

    def below(self, h: int, k: int) -> bool:
        return k % h == 0

    def pairs(self) -> list[tuple[int, int]]:
        """All comparable pairs ``(H, K)`` with ``H <= K``."""
        return [(h, k) for k in self.levels for h in self.levels if k % h == 0]

    def route(self, h: int, k: int, first: int | None = None) -> list[int]:
        """A chain of levels from ``k`` down to ``h``, stepping by primes.

        ``first`` selects which prime to divide out first when there is a choice.
        """
        chain = [k]
        cur = k
        primes = list(self.primes)
        if first is not None:
            primes.sort(key=lambda r: r != first)
        while cur != h:
            for r in primes:
                if cur % r == 0 and (cur // r) % h == 0:
                    cur //= r
                    break
            chain.append(cur)
        return chain

    def level_name(self, h: int) -> str:
        return "e" if h == 1 else f"C_{h}"

    def crt_exponent(self, r: int) -> int:
        """Exponent ``e`` with ``g**e`` generating the C_r factor: ``e = 1 mod r`` and ``0`` mod the other prime."""
        if self.q is None:
            return 1
        other = self.q if r == self.p else self.p
        return other * pow(other, -1, r) % self.order

    def describe(self) -> str:
        return f"C_{self.p}" if self.q is None else f"C_{self.p}x{self.q}"


class MackeyFunctor:
    """A Mackey functor over a :class:`SubgroupLattice`.

    ``res[(h, k)]``: M(G/K) -> M(G/H) and ``tr[(h, k)]``: M(G/H) -> M(G/K) for each
    covering edge; ``weyl[h]`` is the action of the generator on M(G/H).
    """

    def __init__(
        self,
        lattice: SubgroupLattice,
        level: Mapping[int, FGAbelianGroup],
        res: Mapping[tuple[int, int], GroupHom],
        tr: Mapping[tuple[int, int], GroupHom],
        weyl: Mapping[int, GroupHom] | None = None,
        name: str | None = None,
    ) -> None:
        self.lattice = lattice
        self.level = dict(level)
        self.res = dict(res)
        self.tr = dict(tr)
        if weyl is None:
            weyl = {h: GroupHom.identity(self.level[h]) for h in lattice.levels}
        self.weyl = dict(weyl)
        self.name = name
        for h in lattice.levels:
            if h not in self.level or h not in self.weyl:
                raise ValueError(f"missing data at level {h}")
        for e in lattice.edges:
            if e not in self.res or e not in self.tr:
                raise ValueError(f"missing structure maps on edge {e}")

    # composites -----------------------------------------------------------
    def restriction(self, k: int, h: int, first: int | None = None) -> GroupHom:
        """``res^K_H`` along a chain of covering edges."""
        chain = self.lattice.route(h, k, first)
        f = GroupHom.identity(self.level[k])
        for a, b in zip(chain, chain[1:]):
            f = self.res[(b, a)] @ f
        return f

    def transfer(self, h: int, k: int, first: int | None = None) -> GroupHom:
        """``tr^K_H`` along a chain of covering edges."""
        chain = self.lattice.route(h, k, first)[::-1]
        f = GroupHom.identity(self.level[h])
        for lo, hi in zip(chain, chain[1:]):
            f = self.tr[(lo, hi)] @ f
        return f

    def conj(self, h: int, t: int) -> GroupHom:
        """Conjugation by ``g**t`` on ``M(G/H)``."""
        return self.weyl[h].power(t % self.lattice.index(h))

    def ranks(self) -> dict[int, tuple[int, tuple[int, ...]]]:
        return {h: self.level[h].key() for h in self.lattice.levels}

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.level.values())

    def __repr__(self) -> str:
        body = ", ".join(f"{self.lattice.level_name(h)}: {self.level[h]}" for h in self.lattice.levels)
        label = f"{self.name} " if self.name else ""
        return f"<MackeyFunctor {label}{{{body}}}>"


def zero_functor(lattice: SubgroupLattice) -> MackeyFunctor:
    z = free_group(0)
    return MackeyFunctor(
        lattice,
        {h: z for h in lattice.levels},
        {e: GroupHom.zero(z, z) for e in lattice.edges},
        {e: GroupHom.zero(z, z) for e in lattice.edges},
        name="0",
    )


def functors_equal(m: MackeyFunctor, n: MackeyFunctor) -> bool:
    """Literal equality of all level invariants and structure matrices."""
    if m.lattice != n.lattice:
        return False
    lat = m.lattice
    return (
        all(m.level[h].key() == n.level[h].key() and m.weyl[h] == n.weyl[h] for h in lat.levels)
        and all(m.res[e] == n.res[e] and m.tr[e] == n.tr[e] for e in lat.edges)
    )


# ---------------------------------------------------------------------------
# validation

def _check(ok: bool, out: list[str], message: str) -> None:
    if not ok:
        out.append(message)


def validate(m: MackeyFunctor) -> list[str]:
    """Check every Mackey axiom on generators; returns the list of violations."""
    lat = m.lattice
    n = lat.order
    out: list[str] = []
    name = lat.level_name
    top = lat.levels[0]
    _check(m.weyl[top] == GroupHom.identity(m.level[top]), out, "Weyl action at the top level is not the identity")
    for h in lat.levels:
        w = m.weyl[h]
        _check(w.domain.key() == m.level[h].key() and w.codomain.key() == m.level[h].key(), out,
               f"Weyl map at {name(h)} has the wrong shape")
        _check(w.power(lat.index(h)) == GroupHom.identity(m.level[h]), out,
               f"w^[G:H] != id at {name(h)}")
    for (h, k) in lat.edges:
        r, t = m.res[(h, k)], m.tr[(h, k)]
        _check(r.domain.key() == m.level[k].key() and r.codomain.key() == m.level[h].key(), out,
               f"res {name(k)}->{name(h)} has the wrong shape")
        _check(t.domain.key() == m.level[h].key() and t.codomain.key() == m.level[k].key(), out,
               f"tr {name(h)}->{name(k)} has the wrong shape")
    if out:
        return out
    for (h, k) in lat.edges:
        r, t = m.res[(h, k)], m.tr[(h, k)]
        _check(r @ m.weyl[k] == m.weyl[h] @ r, out, f"res {name(k)}->{name(h)} does not commute with w")
        _check(t @ m.weyl[h] == m.weyl[k] @ t, out, f"tr {name(h)}->{name(k)} does not commute with w")
        gen_k = n // k  # g**(n/k) generates K
        _check(t @ m.conj(h, gen_k) == t, out, f"tr {name(h)}->{name(k)} does not absorb conjugation by {name(k)}")
        _check(m.conj(h, gen_k) @ r == r, out, f"res {name(k)}->{name(h)} is not fixed by conjugation by {name(k)}")
    if not lat.is_prime:
        p, q = lat.primes
        top = p * q
        _check(m.restriction(top, 1, p) == m.restriction(top, 1, q), out,
               "composite restriction to e depends on the route")
        _check(m.transfer(1, top, p) == m.transfer(1, top, q), out,
               "composite transfer from e depends on the route")
    for kk in lat.levels:
        for j in lat.levels:
            for h in lat.levels:
                if kk % j or kk % h:
                    continue
                lhs = m.restriction(kk, j) @ m.transfer(h, kk)
                meet = gcd(j, h)
                count = kk // lcm(j, h)
                rhs = GroupHom.zero(m.level[h], m.level[j])
                down = m.restriction(h, meet)
                up = m.transfer(meet, j)
                for i in range(count):
                    rhs = rhs + up @ m.conj(meet, (n // kk) * i) @ down
                _check(lhs == rhs, out,
                       f"double-coset formula fails: res^{name(kk)}_{name(j)} tr^{name(kk)}_{name(h)}")
    return out


@dataclass(frozen=True)
class MackeyHom:
    """A levelwise family of homomorphisms between Mackey functors."""

    domain: MackeyFunctor
    codomain: MackeyFunctor
    maps: Mapping[int, GroupHom]

    def __getitem__(self, h: int) -> GroupHom:
        return self.maps[h]

    def violations(self) -> list[str]:
        m, n = self.domain, self.codomain
        lat = m.lattice
        out: list[str] = []
        if n.lattice != lat:
            return ["lattice mismatch"]
        for h in lat.levels:
            f = self.maps[h]
            if f.domain.key() != m.level[h].key() or f.codomain.key() != n.level[h].key():
                out.append(f"map at {lat.level_name(h)} has the wrong shape")
        if out:
            return out
        for h in lat.levels:
            _check(self.maps[h] @ m.weyl[h] == n.weyl[h] @ self.maps[h], out,
                   f"does not commute with w at {lat.level_name(h)}")
        for (h, k) in lat.edges:
            _check(self.maps[h] @ m.res[(h, k)] == n.res[(h, k)] @ self.maps[k], out,
                   f"does not commute with res {lat.level_name(k)}->{lat.level_name(h)}")
            _check(self.maps[k] @ m.tr[(h, k)] == n.tr[(h, k)] @ self.maps[h], out,
                   f"does not commute with tr {lat.level_name(h)}->{lat.level_name(k)}")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def __matmul__(self, other: "MackeyHom") -> "MackeyHom":
        return MackeyHom(other.domain, self.codomain, {h: self.maps[h] @ other.maps[h] for h in self.maps})

    def __add__(self, other: "MackeyHom") -> "MackeyHom":
        return MackeyHom(self.domain, self.codomain, {h: self.maps[h] + other.maps[h] for h in self.maps})

    def scale(self, k: int) -> "MackeyHom":
        return MackeyHom(self.domain, self.codomain, {h: f.scale(k) for h, f in self.maps.items()})

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.maps.values())

    def is_isomorphism(self) -> bool:
        return all(f.is_isomorphism() for f in self.maps.values())

    def is_surjective(self) -> bool:
        return all(f.is_surjective() for f in self.maps.values())

    def is_injective(self) -> bool:
        return all(f.is_injective() for f in self.maps.values())

    @classmethod
    def identity(cls, m: MackeyFunctor) -> "MackeyHom":
        return cls(m, m, {h: GroupHom.identity(m.level[h]) for h in m.lattice.levels})

    @classmethod
    def zero(cls, m: MackeyFunctor, n: MackeyFunctor) -> "MackeyHom":
        return cls(m, n, {h: GroupHom.zero(m.level[h], n.level[h]) for h in m.lattice.levels})


# ---------------------------------------------------------------------------
# constructions

def direct_sum(*functors: MackeyFunctor, name: str | None = None) -> MackeyFunctor:
    """Levelwise direct sum with block-diagonal structure maps."""
    if not functors:
        raise ValueError("direct_sum needs at least one summand")
    lat = functors[0].lattice
    if any(f.lattice != lat for f in functors):
        raise LatticeMismatch("direct sum of functors over different lattices")
    if len(functors) == 1:
        return functors[0]
    level = {h: direct_sum_groups([f.level[h] for f in functors])[0] for h in lat.levels}
    res = {e: direct_sum_homs([f.res[e] for f in functors]) for e in lat.edges}
    tr = {e: direct_sum_homs([f.tr[e] for f in functors]) for e in lat.edges}
    weyl = {h: direct_sum_homs([f.weyl[h] for f in functors]) for h in lat.levels}
    if name is None:
        name = " + ".join(f.name or "?" for f in functors)
    return MackeyFunctor(lat, level, res, tr, weyl, name=name)


def tensor_external(m: MackeyFunctor, n: MackeyFunctor, name: str | None = None) -> MackeyFunctor:
    """External tensor of a C_p-functor and a C_q-functor, a C_pq-functor.

    The generator of C_pq corresponds to the pair of generators under the
    Chinese remainder isomorphism, so ``w = w_M (x) w_N`` at every level.
    """
    if not (m.lattice.is_prime and n.lattice.is_prime) or m.lattice.p == n.lattice.p:
        raise LatticeMismatch("tensor_external needs a C_p-functor and a C_q-functor")
    p, q = m.lattice.p, n.lattice.p
    lat = SubgroupLattice(p, q)
    tg: dict[int, TensorGroup] = {}
    for h in lat.levels:
        tg[h] = tensor_group(m.level[gcd(h, p)], n.level[gcd(h, q)])
    level = {h: tg[h].group for h in lat.levels}

    def idm(mm: MackeyFunctor, h: int) -> GroupHom:
        return GroupHom.identity(mm.level[h])

    res: dict[tuple[int, int], GroupHom] = {}
    tr: dict[tuple[int, int], GroupHom] = {}
    for (h, k) in lat.edges:
        hp, hq, kp, kq = gcd(h, p), gcd(h, q), gcd(k, p), gcd(k, q)
        if hp != kp:  # the edge moves along the p-factor
            r = tensor_homs(m.res[(hp, kp)], idm(n, hq), tg[k], tg[h])
            t = tensor_homs(m.tr[(hp, kp)], idm(n, hq), tg[h], tg[k])
        else:
            r = tensor_homs(idm(m, hp), n.res[(hq, kq)], tg[k], tg[h])
            t = tensor_homs(idm(m, hp), n.tr[(hq, kq)], tg[h], tg[k])
        res[(h, k)] = r
        tr[(h, k)] = t
    weyl = {h: tensor_homs(m.weyl[gcd(h, p)], n.weyl[gcd(h, q)], tg[h], tg[h]) for h in lat.levels}
    if name is None and m.name and n.name:
        name = f"{m.name} (x) {n.name}"
    return MackeyFunctor(lat, level, res, tr, weyl, name=name)


def _restrict_to_prime(m: MackeyFunctor, r: int, top: int, bottom: int, label: str) -> MackeyFunctor:
    lat = m.lattice
    if lat.is_prime or r not in lat.primes:
        raise LatticeMismatch(f"{label} needs a C_pq-functor and one of its primes")
    sub = SubgroupLattice(r)
    e = lat.crt_exponent(r)
    level = {r: m.level[top], 1: m.level[bottom]}
    res = {(1, r): m.res[(bottom, top)]}
    tr = {(1, r): m.tr[(bottom, top)]}
    weyl = {r: GroupHom.identity(m.level[top]), 1: m.conj(bottom, e)}
    inner = m.name or "M"
    return MackeyFunctor(sub, level, res, tr, weyl, name=f"{label}_{r}({inner})")


def phi_restrict(m: MackeyFunctor, r: int) -> MackeyFunctor:
    """Restriction along inducing up C_r-sets: C_r/C_r -> M(G/C_r), C_r/e -> M(G/e)."""
    return _restrict_to_prime(m, r, r, 1, "Phi")


def rho_restrict(m: MackeyFunctor, r: int) -> MackeyFunctor:
    """Restriction along inflation of C_r-sets: C_r/C_r -> M(G/G), C_r/e -> M(G/C_s)."""
    lat = m.lattice
    if lat.is_prime:
        raise LatticeMismatch("rho_restrict needs a C_pq-functor")
    other = lat.order // r
    return _restrict_to_prime(m, r, lat.order, other, "rho")


# ---------------------------------------------------------------------------
# Burnside spans and representable functors

@dataclass(frozen=True)
class BurnsideSpan:
    """The span ``G/K <- G/L -> G/H`` with twist ``g**twist``.

    It acts on a Mackey functor as ``tr^H_L o w_L^twist o res^K_L``,
    a map ``N(G/K) -> N(G/H)``.
    """

    source: int
    target: int
    middle: int
    twist: int = 0

    def __post_init__(self) -> None:
        if self.source % self.middle or self.target % self.middle:
            raise ValueError("the middle level must lie below both ends")


def span_action(s: BurnsideSpan | Iterable[tuple[int, BurnsideSpan]], n: MackeyFunctor) -> GroupHom:
    """Action of a span, or of a formal integer combination of spans, on ``n``."""
    if isinstance(s, BurnsideSpan):
        return n.transfer(s.middle, s.target) @ n.conj(s.middle, s.twist) @ n.restriction(s.source, s.middle)
    terms = list(s)
    if not terms:
        raise ValueError("empty formal sum needs explicit levels")
    total: GroupHom | None = None
    for c, sp in terms:
        f = span_action(sp, n).scale(c)
        total = f if total is None else total + f
    assert total is not None
    return total


def _orbits(points: Sequence[tuple[int, int]], act: Callable[[tuple[int, int]], tuple[int, int]]) -> list[list[tuple[int, int]]]:
    seen: set[tuple[int, int]] = set()
    orbits: list[list[tuple[int, int]]] = []
    for pt in points:
        if pt in seen:
            continue
        orbit = [pt]
        seen.add(pt)
        nxt = act(pt)
        while nxt not in seen:
            seen.add(nxt)
            orbit.append(nxt)
            nxt = act(nxt)
        orbits.append(orbit)
    return orbits


def representable_basis(lat: SubgroupLattice, h: int, k: int) -> list[tuple[int, int]]:
    """Basis of ``A_{G/H}(G/K)`` as pairs ``(L, t)``.

    Each G-orbit of ``G/K x G/H`` is labelled by the twist ``t`` of its
    representative ``(0, t)``; the pair ``(L, t)`` is the transitive G-set
    ``G/L`` mapping onto that orbit, for each ``L`` below the stabiliser
    ``H meet K``.  The element acts as ``tr^K_L o c^t o res^H_L`` on the
    universal element.  Subgroups are listed largest first.
    """
    n = lat.order
    gk, gh = n // k, n // h  # |G/K|, |G/H|; g acts by +1 on both
    points = [(a, b) for a in range(gk) for b in range(gh)]
    orbits = _orbits(points, lambda pt: ((pt[0] + 1) % gk, (pt[1] + 1) % gh))
    twists = sorted(next(b for a, b in orb if a == 0) for orb in orbits)
    meet = gcd(h, k)
    subs = sorted(divisors(meet), reverse=True)
    subs = [d for d in subs if d in lat.levels]
    return [(ell, t) for t in twists for ell in subs]


def representable(lat: SubgroupLattice, h: int) -> MackeyFunctor:
    """The free Mackey functor ``A_{G/H}`` on one generator at level ``H``."""
    n = lat.order
    basis = {k: representable_basis(lat, h, k) for k in lat.levels}
    index = {k: {b: i for i, b in enumerate(basis[k])} for k in lat.levels}
    level = {k: free_group(len(basis[k])) for k in lat.levels}

    def twist_mod(k: int) -> int:
        return n // lcm(h, k)

    def matrix(src: int, dst: int, image: Callable[[tuple[int, int]], list[tuple[int, int]]]) -> GroupHom:
        rows = [[0] * len(basis[src]) for _ in basis[dst]]
        for j, b in enumerate(basis[src]):
            for ell, t in image(b):
                rows[index[dst][(ell, t % twist_mod(dst))]][j] += 1
        return GroupHom.from_rows(level[src], level[dst], rows)

    res: dict[tuple[int, int], GroupHom] = {}
    tr: dict[tuple[int, int], GroupHom] = {}
    for (j, k) in lat.edges:
        def res_image(b: tuple[int, int], j: int = j, k: int = k) -> list[tuple[int, int]]:
            ell, t = b
            return [(gcd(j, ell), t + (n // k) * i) for i in range(k // lcm(j, ell))]

        res[(j, k)] = matrix(k, j, res_image)
        tr[(j, k)] = matrix(j, k, lambda b: [b])
    weyl = {k: matrix(k, k, lambda b: [(b[0], b[1] + 1)]) for k in lat.levels}
    return MackeyFunctor(lat, level, res, tr, weyl, name=f"A_G/{lat.level_name(h)}")


def representable_generator(lat: SubgroupLattice, h: int) -> tuple[int, ...]:
    """Coordinates of the identity span in ``A_{G/H}(G/H)``."""
    basis = representable_basis(lat, h, h)
    return tuple(int(b == (h, 0)) for b in basis)


def yoneda_hom(h: int, m: MackeyFunctor, x: Sequence[int], rep: MackeyFunctor | None = None) -> MackeyHom:
    """The unique map ``A_{G/H} -> M`` sending the identity span to ``x``."""
    lat = m.lattice
    rep = rep or representable(lat, h)
    x = list(x)
    maps: dict[int, GroupHom] = {}
    for k in lat.levels:
        cols = []
        for ell, t in representable_basis(lat, h, k):
            cols.append(list(span_action(BurnsideSpan(h, k, ell, t), m)(x)))
        mat = IntMatrix.from_columns(cols, m.level[k].ngens)
        maps[k] = GroupHom(rep.level[k], m.level[k], mat)
    return MackeyHom(rep, m, maps)


def iso_search(m: MackeyFunctor, n: MackeyFunctor, bound: int = 3, max_generators: int = 6) -> MackeyHom | None:
    """Look for an isomorphism among small combinations of generators of Hom(M, N).

    Sound but incomplete: ``None`` means no isomorphism was found within the
    search bounds.
    """
    from .homological import hom_mackey

    if m.lattice != n.lattice:
        return None
    if any(m.level[h].key() != n.level[h].key() for h in m.lattice.levels):
        return None
    _, gens = hom_mackey(m, n)
    if not gens:
        return MackeyHom.zero(m, n) if m.is_zero() and n.is_zero() else None
    if len(gens) > max_generators:
        return None
    coeff_range = sorted(range(-bound, bound + 1), key=lambda c: (abs(c), c < 0))
    for coeffs in itertools.product(coeff_range, repeat=len(gens)):
        if not any(coeffs):
            continue
        f = MackeyHom.zero(m, n)
        for c, g in zip(coeffs, gens):
            if c:
                f = f + g.scale(c)
        if f.is_isomorphism():
            return f
    return None

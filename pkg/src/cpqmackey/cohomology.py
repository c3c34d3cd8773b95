"""RO(C_pq)-graded Bredon cohomology of a point, of orbits and of representation spheres.

Everything here is a lookup into classification tables keyed by the four
fixed-point dimensions of a virtual representation ``alpha``::

    a_e = |alpha|,  a_p = |alpha^{C_p}|,  a_q = |alpha^{C_q}|,  a_pq = |alpha^{C_pq}|

Answers name functors symbolically (see :mod:`cpqmackey.catalog`) and realize
them on demand.  Three answer types are used:

``Determined``
    a direct sum of catalog names.
``DependsOnChoice``
    a family containing ``A_r[d]`` where ``d`` is a unit mod ``r`` that the
    caller must supply (the engine never computes it).
``NotTabulated``
    a dimension quadruple the tables do not cover.

The tables are written for one orientation of the primes; the mirrored
regions (``p`` and ``q`` swapped) are generated automatically.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Callable, Iterator, Mapping, Optional, Union

from .catalog import CpName, CpqName, SumName, catalog
from .groups import FGAbelianGroup, cyclic_sum, iso_groups
from .mackey import MackeyFunctor, SubgroupLattice, iso_search, zero_functor


class ParityError(ValueError):
    """Fixed-point dimensions of mixed parity, which no virtual representation has."""


class NotTabulatedError(LookupError):
    """Raised when group values are requested for an answer the tables leave open."""


# ---------------------------------------------------------------------------
# virtual representations


def fold_exponent(k: int, n: int) -> int:
    """Reduce ``k`` mod ``n`` and identify ``xi^k`` with its conjugate ``xi^(n-k)``."""
    k %= n
    return min(k, n - k)


@dataclass(frozen=True)
class VirtualRep:
    """An integer combination of the trivial representation and the ``xi^k``.

    ``twists`` is kept as a sorted tuple of ``(k, multiplicity)`` with
    ``1 <= k <= (pq-1)/2`` and nonzero multiplicities.
    """

    p: int
    q: int
    trivial: int = 0
    twists: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        half = (self.p * self.q - 1) // 2
        keys = [k for k, _ in self.twists]
        if any(not 1 <= k <= half for k in keys):
            raise ValueError(f"twist exponents must lie in [1, {half}]")
        if keys != sorted(set(keys)) or any(c == 0 for _, c in self.twists):
            raise ValueError("twists must be sorted, distinct and nonzero; use VirtualRep.build")

    @classmethod
    def build(cls, p: int, q: int, trivial: int = 0, twists: Optional[Mapping[int, int]] = None) -> "VirtualRep":
        """Build from any exponents; they are folded, and ``xi^0`` becomes two trivials."""
        n = p * q
        acc: dict[int, int] = {}
        for k, c in (twists or {}).items():
            f = fold_exponent(k, n)
            if f == 0:
                trivial += 2 * c
            else:
                acc[f] = acc.get(f, 0) + c
        return cls(p, q, trivial, tuple(sorted((k, c) for k, c in acc.items() if c)))

    @classmethod
    def zero(cls, p: int, q: int) -> "VirtualRep":
        return cls(p, q)

    @property
    def twist_map(self) -> dict[int, int]:
        return dict(self.twists)

    def _check_same(self, other: "VirtualRep") -> None:
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError("representations of different groups")

    def __add__(self, other: "VirtualRep") -> "VirtualRep":
        self._check_same(other)
        tw = self.twist_map
        for k, c in other.twists:
            tw[k] = tw.get(k, 0) + c
        return VirtualRep.build(self.p, self.q, self.trivial + other.trivial, tw)

    def __neg__(self) -> "VirtualRep":
        return VirtualRep(self.p, self.q, -self.trivial, tuple((k, -c) for k, c in self.twists))

    def __sub__(self, other: "VirtualRep") -> "VirtualRep":
        return self + (-other)

    def shifted(self, n: int) -> "VirtualRep":
        """Add ``n`` trivial summands."""
        return VirtualRep(self.p, self.q, self.trivial + n, self.twists)

    def is_actual(self) -> bool:
        """True for an honest representation (all multiplicities nonnegative)."""
        return self.trivial >= 0 and all(c > 0 for _, c in self.twists)

    def dims(self) -> "FixedDims":
        return fixed_dims(self)

    def to_json(self) -> dict:
        return {"trivial": self.trivial, "twists": {str(k): c for k, c in self.twists}}

    @classmethod
    def from_json(cls, data: Mapping, p: int, q: int) -> "VirtualRep":
        tw = {int(k): int(c) for k, c in dict(data.get("twists", {})).items()}
        return cls.build(p, q, int(data.get("trivial", 0)), tw)

    def __str__(self) -> str:
        parts: list[tuple[int, str]] = [(c, f"xi^{k}") for k, c in self.twists]
        if self.trivial:
            parts.append((self.trivial, ""))
        if not parts:
            return "0"
        out = ""
        for i, (c, sym) in enumerate(parts):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = str(mag) if not sym else (sym if mag == 1 else f"{mag}{sym}")
            if i == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += f" {sign} {body}"
        return out


_TERM_RE = re.compile(r"([+-]?)(\d*)\*?(xi(?:\^(-?\d+))?)?")


def parse_rep(text: str, p: int, q: int) -> VirtualRep:
    """Parse expressions such as ``"xi^3 + xi^5 - 4"`` or ``"2xi - 1"``.

    A bare integer counts trivial summands, ``xi`` means ``xi^1``, and
    exponents are reduced and folded.
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty representation expression")
    trivial = 0
    tw: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos or (pos > 0 and not m.group(1)):
            raise ValueError(f"cannot parse representation {text!r} near {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef_txt, xi = m.group(2), m.group(3)
        if xi is None:
            if not coef_txt:
                raise ValueError(f"cannot parse representation {text!r} near {s[pos:]!r}")
            trivial += sign * int(coef_txt)
        else:
            coef = int(coef_txt) if coef_txt else 1
            k = int(m.group(4)) if m.group(4) is not None else 1
            tw[k] = tw.get(k, 0) + sign * coef
        pos = m.end()
    return VirtualRep.build(p, q, trivial, tw)


@dataclass(frozen=True)
class FixedDims:
    """The fixed-point dimensions ``(a_e, a_p, a_q, a_pq)``."""

    a_e: int
    a_p: int
    a_q: int
    a_pq: int

    def __post_init__(self) -> None:
        if len({x % 2 for x in self.as_tuple()}) != 1:
            raise ParityError(f"fixed-point dimensions {self.as_tuple()} have mixed parity")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a_e, self.a_p, self.a_q, self.a_pq)

    @property
    def even(self) -> bool:
        return self.a_e % 2 == 0

    def mirrored(self) -> "FixedDims":
        return FixedDims(self.a_e, self.a_q, self.a_p, self.a_pq)

    def shifted(self, de: int = 0, dp: int = 0, dq: int = 0, dg: int = 0) -> "FixedDims":
        return FixedDims(self.a_e + de, self.a_p + dp, self.a_q + dq, self.a_pq + dg)

    @classmethod
    def parse(cls, text: str) -> "FixedDims":
        vals = [int(x) for x in text.replace(" ", "").split(",") if x]
        if len(vals) != 4:
            raise ValueError("expected four comma-separated integers a_e,a_p,a_q,a_pq")
        return cls(*vals)

    def __str__(self) -> str:
        return "({}, {}, {}, {})".format(*self.as_tuple())


def fixed_dims(alpha: VirtualRep) -> FixedDims:
    """Dimensions of the fixed points of ``alpha`` under ``e, C_p, C_q, C_pq``.

    ``xi^k`` is fixed by ``C_p`` exactly when ``p`` divides ``k``.
    """
    n = alpha.trivial
    a_e = n + 2 * sum(c for _, c in alpha.twists)
    a_p = n + 2 * sum(c for k, c in alpha.twists if k % alpha.p == 0)
    a_q = n + 2 * sum(c for k, c in alpha.twists if k % alpha.q == 0)
    return FixedDims(a_e, a_p, a_q, n)


def realizable(dims: FixedDims, p: int, q: int) -> VirtualRep:
    """A virtual representation with the given fixed-point dimensions.

    Uses only ``1``, ``xi^p``, ``xi^q`` and ``xi``.
    """
    n = dims.a_pq
    cp = (dims.a_p - n) // 2
    cq = (dims.a_q - n) // 2
    ce = (dims.a_e - dims.a_p - dims.a_q + n) // 2
    return VirtualRep.build(p, q, n, {p: cp, q: cq, 1: ce})


def exponent_classes(p: int, q: int) -> dict[str, list[int]]:
    """Folded exponents grouped by kernel: divisible by ``p``, by ``q``, or coprime."""
    half = (p * q - 1) // 2
    out: dict[str, list[int]] = {"p": [], "q": [], "e": []}
    for k in range(1, half + 1):
        out["p" if k % p == 0 else "q" if k % q == 0 else "e"].append(k)
    return out


def random_witness(dims: FixedDims, p: int, q: int, rng: random.Random, padding: int = 2) -> VirtualRep:
    """A random representation with the given dimensions.

    The base witness has its twist counts spread over random exponents of
    the right kernel type, and ``padding`` pairs ``xi^a - xi^b`` of equal
    type are added on top.
    """
    base = realizable(dims, p, q)
    classes = exponent_classes(p, q)
    counts = {"p": 0, "q": 0, "e": 0}
    for k, c in base.twists:
        counts["p" if k % p == 0 else "q" if k % q == 0 else "e"] += c
    tw: dict[int, int] = {}
    for kind, total in counts.items():
        sign = 1 if total >= 0 else -1
        for _ in range(abs(total)):
            k = rng.choice(classes[kind])
            tw[k] = tw.get(k, 0) + sign
    for _ in range(padding):
        kind = rng.choice([k for k in classes if classes[k]])
        a, b = rng.choice(classes[kind]), rng.choice(classes[kind])
        tw[a] = tw.get(a, 0) + 1
        tw[b] = tw.get(b, 0) - 1
    rep = VirtualRep.build(p, q, dims.a_pq, tw)
    assert fixed_dims(rep) == dims
    return rep


# ---------------------------------------------------------------------------
# answers


@dataclass(frozen=True)
class Determined:
    """A table entry that is a fixed direct sum of catalog functors."""

    expression: SumName
    p: int
    q: Optional[int]
    over: str = "pq"  # "pq" for C_pq functors, "p"/"q" for C_p/C_q ones
    region: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "expression", self.expression.canonical())

    @property
    def functor(self) -> MackeyFunctor:
        return _realize(self.expression, self.p, self.q, self.over)

    def __str__(self) -> str:
        return str(self.expression)


@dataclass(frozen=True)
class DependsOnChoice:
    """A family ``fixed + sum of X_r(A_r[d])`` with a unit ``d`` mod ``r``.

    ``lifts`` holds ``(family, side)`` pairs; family ``""`` means the bare
    C_r functor ``A_r[d]``.
    """

    fixed: SumName
    lifts: tuple[tuple[str, str], ...]
    p: int
    q: Optional[int]
    d: Optional[int] = None
    over: str = "pq"
    region: str = ""

    def expression(self, d: Optional[int] = None) -> SumName:
        d = self.d if d is None else d
        if d is None:
            raise ValueError("this answer depends on a choice of d; supply it")
        terms = list(self.fixed.terms)
        for fam, side in self.lifts:
            inner = CpName("A", side, d)
            if not fam:
                terms.append(inner)
            elif fam == "cA" and d == 1:
                terms.append(CpqName("A"))  # A_q tensor A_p is the Burnside functor
            else:
                terms.append(CpqName(fam, side, inner))
        return SumName(tuple(terms)).canonical()

    @property
    def family(self) -> str:
        parts = [str(t) for t in self.fixed.terms]
        for fam, side in self.lifts:
            inner = f"A_{side}[d]"
            parts.append(inner if not fam else f"{fam}_{side}({inner})")
        return " + ".join(sorted(parts))

    def with_d(self, d: Optional[int]) -> "DependsOnChoice":
        if d is not None:
            for _, side in self.lifts:
                r = self.p if side == "p" else self.q
                if r is not None and d % r == 0:
                    raise ValueError(f"d must be a unit mod {r}")
        return DependsOnChoice(self.fixed, self.lifts, self.p, self.q, d, self.over, self.region)

    @property
    def functor(self) -> MackeyFunctor:
        return _realize(self.expression(), self.p, self.q, self.over)

    def __str__(self) -> str:
        return str(self.expression()) if self.d is not None else self.family


@dataclass(frozen=True)
class NotTabulated:
    reason: str
    dims: Optional[FixedDims] = None

    def __str__(self) -> str:
        return f"not tabulated: {self.reason}"


CohomologyAnswer = Union[Determined, DependsOnChoice, NotTabulated]


def _realize(expr: SumName, p: int, q: Optional[int], over: str) -> MackeyFunctor:
    if over == "pq":
        return catalog(expr, p, q)
    r = p if over == "p" else q
    if not expr.terms:
        return zero_functor(SubgroupLattice(r))
    return catalog(expr, p, q)


def level_groups(ans: CohomologyAnswer, level: int) -> FGAbelianGroup:
    """The group of ``ans`` at the level ``G/H`` with ``|H| = level``.

    Dependent families are evaluated at ``d = 1``; their groups do not
    depend on ``d``.
    """
    if isinstance(ans, NotTabulated):
        raise NotTabulatedError(ans.reason)
    if isinstance(ans, DependsOnChoice) and ans.d is None:
        ans = ans.with_d(1)
    return ans.functor.level[level]


# ---------------------------------------------------------------------------
# the C_p table


def lewis_table(a_e: int, a_r: int, d: Optional[int] = None, *, p: int, q: Optional[int] = None, side: str = "p") -> CohomologyAnswer:
    """``H^alpha_{C_r}(S^0)`` for ``|alpha| = a_e`` and ``|alpha^{C_r}| = a_r``.

    ``side`` selects which prime (``p`` or ``q``) is the group order.
    """
    if (a_e - a_r) % 2:
        raise ParityError(f"({a_e}, {a_r}) have mixed parity")
    box = lambda c: SumName((CpName("box", side, coeff=c),))  # noqa: E731
    tors = f"Z/{side}"
    if a_e == 0 and a_r == 0:
        ans = DependsOnChoice(SumName(), (("", side),), p, q, over=side, region="A[d]")
        return ans.with_d(d) if d is not None else ans
    if a_e == 0:
        name = SumName((CpName("R" if a_r < 0 else "L", side),))
    elif a_r == 0:
        name = box("Z")
    elif a_e > 0 and a_r < 0 and a_r % 2 == 0:
        name = box(tors)
    elif a_e < 0 and a_r > 1 and a_r % 2 == 1:
        name = box(tors)
    else:
        name = SumName()
    return Determined(name, p, q, over=side)


def _lift(ans: CohomologyAnswer, family: str, side: str) -> CohomologyAnswer:
    """Apply a lifted family (``E``, ``C``, ``K`` ...) to a C_r answer."""
    if isinstance(ans, Determined):
        terms = tuple(CpqName(family, side, t) for t in ans.expression.terms)
        return Determined(SumName(terms), ans.p, ans.q)
    if isinstance(ans, DependsOnChoice):
        return DependsOnChoice(SumName(), ((family, side),), ans.p, ans.q, ans.d)
    return ans


def _combine(a: CohomologyAnswer, b: CohomologyAnswer) -> CohomologyAnswer:
    if isinstance(a, NotTabulated):
        return a
    if isinstance(b, NotTabulated):
        return b
    if isinstance(a, Determined) and isinstance(b, Determined):
        return Determined(a.expression + b.expression, a.p, a.q)
    dep, det = (a, b) if isinstance(a, DependsOnChoice) else (b, a)
    if isinstance(det, DependsOnChoice):
        raise AssertionError("two independent choices in one answer")
    assert isinstance(dep, DependsOnChoice) and isinstance(det, Determined)
    return DependsOnChoice(det.expression + dep.fixed, dep.lifts, dep.p, dep.q, dep.d)


# ---------------------------------------------------------------------------
# orbits and representation spheres


def _dims_and_primes(alpha: Union[VirtualRep, FixedDims], p: Optional[int], q: Optional[int]) -> tuple[FixedDims, int, int]:
    if isinstance(alpha, VirtualRep):
        return fixed_dims(alpha), alpha.p, alpha.q
    if p is None or q is None:
        raise ValueError("dimension input needs the primes p and q")
    return alpha, p, q


def cohomology_orbit(
    alpha: Union[VirtualRep, FixedDims],
    subgroup: Union[str, int],
    d: Optional[int] = None,
    p: Optional[int] = None,
    q: Optional[int] = None,
) -> CohomologyAnswer:
    """``H^alpha(C_pq/H_+)`` as a C_pq Mackey functor for ``H`` in ``e, C_p, C_q``."""
    dims, p, q = _dims_and_primes(alpha, p, q)
    key = {"e": 1, "1": 1, "C_p": p, "p": p, "C_q": q, "q": q}.get(str(subgroup), subgroup)
    if key == 1:
        return Determined(SumName((CpqName("free"),)) if dims.a_e == 0 else SumName(), p, q)
    if key == p:
        return _lift(lewis_table(dims.a_e, dims.a_p, d, p=p, q=q, side="p"), "E", "p")
    if key == q:
        return _lift(lewis_table(dims.a_e, dims.a_q, d, p=p, q=q, side="q"), "E", "q")
    raise ValueError(f"orbit subgroup must be e, C_p or C_q, not {subgroup!r}")


def cohomology_sphere(
    alpha: Union[VirtualRep, FixedDims],
    j: int,
    d: Optional[int] = None,
    p: Optional[int] = None,
    q: Optional[int] = None,
) -> CohomologyAnswer:
    """``H^alpha(S(xi^j)_+)`` for ``1 <= j <= pq - 1``."""
    dims, p, q = _dims_and_primes(alpha, p, q)
    n = p * q
    if j % n == 0:
        raise ValueError("xi^0 is not a rotation; j must not be divisible by pq")
    if gcd(j, n) == 1:
        if dims.a_e == 0:
            return Determined(SumName((CpqName("R"),)), p, q)
        if dims.a_e == 1:
            return Determined(SumName((CpqName("L"),)), p, q)
        return Determined(SumName(), p, q)
    side = "p" if j % p == 0 else "q"
    a_r = dims.a_p if side == "p" else dims.a_q
    below = lewis_table(dims.a_e - 1, a_r - 1, d, p=p, q=q, side=side)
    here = lewis_table(dims.a_e, a_r, d, p=p, q=q, side=side)
    return _combine(_lift(below, "C", side), _lift(here, "K", side))


# ---------------------------------------------------------------------------
# the C_pq tables

# Conditions are written with e, P, Q, G for a_e, a_p, a_q, a_pq.  Each
# region is stated once; the p <-> q mirror is generated.

_REGIONS: list[tuple[str, str]] = [
    # odd, a_e < 0
    ("odd e<0 P<0 Q<0 G<=1", "0"),
    ("odd e<0 P<0 Q<0 G>=3", "<<Z/pq>>"),
    ("odd e<0 P=1 Q=1", "0"),
    ("odd e<0 P=1 Q<0 G<=1", "0"),
    ("odd e<0 P=1 Q<0 G>=3", "<<Z/p>>"),
    ("odd e<0 P>1 Q=1", "K_p<Z/p>"),
    ("odd e<0 P>1 Q>1", "K_p<Z/p> + K_q<Z/q>"),
    ("odd e<0 P>1 Q<0 G<=1", "K_p<Z/p>"),
    ("odd e<0 P>1 Q<0 G>=3", "K_p<Z/p> + <<Z/p>>"),
    # odd, a_e > 0
    ("odd e>0 P>0 Q>0", "0"),
    ("odd e>0 P<0 Q<0 G<=1", "0"),
    ("odd e>0 P<0 Q<0 G>=3", "<<Z/pq>>"),
    ("odd e>0 P<0 Q>0 G<=1", "0"),
    ("odd e>0 P<0 Q>0 G>=3", "<<Z/q>>"),
    # even, a_e < 0
    ("even e<0 P<0 Q<0 G=0", "<<Z>>"),
    ("even e<0 P<0 Q<0 G!=0", "0"),
    ("even e<0 P=0 Q<0 G<0", "K_p<Z>"),
    ("even e<0 P=0 Q<0 G>0", "C_p<Z>"),
    ("even e<0 P=0 Q=0 G<0", "K_p<Z> + K_q<Z>"),
    ("even e<0 P=0 Q=0 G>0", "C_p<Z> + C_q<Z>"),
    ("even e<0 P=0 Q>0 G<0", "K_p<Z> + <<Z/p>>"),
    ("even e<0 P=0 Q>0 G>0", "C_p<Z>"),
    ("even e<0 P>0 Q<0 G>0", "0"),
    ("even e<0 P>0 Q<0 G<0", "<<Z/q>>"),
    ("even e<0 P>0 Q<0 G=0", "<<Z>>"),
    ("even e<0 P>0 Q>0 G>0", "0"),
    ("even e<0 P>0 Q>0 G<0", "<<Z/pq>>"),
    ("even e<0 P>0 Q>0 G=0", "<<Z>>"),
    # even, a_e > 0
    ("even e>0 P>0 Q>0 G>0", "0"),
    ("even e>0 P>0 Q>0 G=0", "<<Z>>"),
    ("even e>0 P>0 Q>0 G<0", "<<Z/pq>>"),
    ("even e>0 P<0 Q<0 G=0", "<<Z>> + C_p<Z/p> + C_q<Z/q>"),
    ("even e>0 P<0 Q<0 G!=0", "C_p<Z/p> + C_q<Z/q>"),
    ("even e>0 P<0 Q=0 G<0", "C_p<Z/p> + K_q<Z>"),
    ("even e>0 P<0 Q=0 G>0", "C_q<Z> + C_p<Z/p>"),
    ("even e>0 P<0 Q>0 G<0", "C_p<Z/p> + <<Z/p>>"),
    ("even e>0 P<0 Q>0 G>0", "C_p<Z/p>"),
    ("even e>0 P<0 Q>0 G=0", "<<Z>> + C_p<Z/p>"),
    ("even e>0 P=0 Q=0 G<0", "K_p<Z> + K_q<Z>"),
    ("even e>0 P=0 Q=0 G>0", "C_p<Z> + C_q<Z>"),
    ("even e>0 P>0 Q=0 G<0", "<<Z/q>> + K_q<Z>"),
    ("even e>0 P>0 Q=0 G>0", "C_q<Z>"),
    # a_e = 0
    ("even e=0 P>0 Q>0 G>0", "L_pq"),
    ("even e=0 P>0 Q>0 G<0", "L_pq + <<Z/pq>>"),
    ("even e=0 P>0 Q>0 G=0", "L_pq + <<Z>>"),
    ("even e=0 P<0 Q<0 G!=0", "R_pq"),
    ("even e=0 P<0 Q<0 G=0", "R_pq + <<Z>>"),
    ("even e=0 P>0 Q<0 G>0", "K_p(L_p)"),
    ("even e=0 P>0 Q<0 G<0", "<<Z/q>> + K_p(L_p)"),
    ("even e=0 P>0 Q<0 G=0", "<<Z>> + K_p(L_p)"),
]

# Dependent families: points where one of a_e, a_pq and one of a_p, a_q
# vanish.  Only these configurations are tabulated.
_FAMILIES: list[tuple[str, tuple[str, str]]] = [
    ("even e=0 P=0 Q=0 G=0", ("cA", "q")),
    ("even e>0 P=0 Q>0 G=0", ("Q", "q")),
    ("even e<0 P=0 Q<0 G=0", ("Q", "q")),
    ("even e=0 P=0 Q=-2 G=-2", ("K", "p")),
    ("even e=0 P=0 Q=2 G=2", ("C", "p")),
]

_COND_RE = re.compile(r"^([ePQG])(<=|>=|!=|<|>|=)(-?\d+)$")
_OPS: dict[str, Callable[[int, int], bool]] = {
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


@dataclass(frozen=True)
class Region:
    """One table cell: a conjunction of sign conditions and its answer."""

    label: str
    conditions: frozenset[str]
    payload: object  # a SumName, or a (family, side) pair for dependent families

    def __post_init__(self) -> None:
        parity: Optional[int] = None
        tests: list[tuple[int, Callable[[int, int], bool], int]] = []
        for cond in self.conditions:
            if cond in ("odd", "even"):
                parity = 1 if cond == "odd" else 0
                continue
            m = _COND_RE.match(cond)
            if not m:
                raise ValueError(f"bad region condition {cond!r}")
            tests.append(("ePQG".index(m.group(1)), _OPS[m.group(2)], int(m.group(3))))
        object.__setattr__(self, "_parity", parity)
        object.__setattr__(self, "_tests", tuple(tests))

    def matches(self, dims: FixedDims) -> bool:
        vals = dims.as_tuple()
        if self._parity is not None and vals[0] % 2 != self._parity:  # type: ignore[attr-defined]
            return False
        return all(op(vals[i], v) for i, op, v in self._tests)  # type: ignore[attr-defined]


def _mirror_condition(cond: str) -> str:
    if cond[:1] == "P":
        return "Q" + cond[1:]
    if cond[:1] == "Q":
        return "P" + cond[1:]
    return cond


def _build_regions(table: list[tuple[str, object]], parse: Callable[[object], object], mirror: Callable[[object], object]) -> list[Region]:
    out: list[Region] = []
    for text, payload in table:
        conds = frozenset(text.split())
        value = parse(payload)
        out.append(Region(text, conds, value))
        mconds = frozenset(_mirror_condition(c) for c in conds)
        if mconds == conds:
            continue
        out.append(Region(text + " (mirrored)", mconds, mirror(value)))
    return out


def _mirror_family(fam: object) -> object:
    kind, side = fam  # type: ignore[misc]
    return (kind, "q" if side == "p" else "p")


REGIONS: list[Region] = _build_regions(
    _REGIONS,  # type: ignore[arg-type]
    lambda s: SumName.of(s).canonical() if s != "0" else SumName(),
    lambda e: e.mirrored().canonical(),  # type: ignore[attr-defined]
)
FAMILIES: list[Region] = _build_regions(_FAMILIES, lambda f: f, _mirror_family)  # type: ignore[arg-type]

for _r in REGIONS:
    if frozenset(_mirror_condition(c) for c in _r.conditions) == _r.conditions:
        assert _r.payload == _r.payload.mirrored().canonical(), f"symmetric region {_r.label} has an asymmetric answer"  # type: ignore[attr-defined]


def dependent_pattern(dims: FixedDims) -> bool:
    """True where one of ``a_e, a_pq`` and one of ``a_p, a_q`` vanish."""
    return (dims.a_e == 0 or dims.a_pq == 0) and (dims.a_p == 0 or dims.a_q == 0)


def _bucket(dims: FixedDims) -> tuple[bool, int]:
    e = dims.a_e
    return dims.even, (e > 0) - (e < 0)


def _bucket_regions(regions: list[Region]) -> dict[tuple[bool, int], list[Region]]:
    """Group regions by parity and sign of ``a_e``; every region fixes both."""
    out: dict[tuple[bool, int], list[Region]] = {}
    for even in (True, False):
        for sgn in (-1, 0, 1):
            if sgn == 0 and not even:
                continue
            e_val = 2 * sgn if even else sgn
            out[(even, sgn)] = [
                r
                for r in regions
                if r._parity in (None, 0 if even else 1)  # type: ignore[attr-defined]
                and all(op(e_val, v) for i, op, v in r._tests if i == 0)  # type: ignore[attr-defined]
            ]
    return out


_REGION_BUCKETS = _bucket_regions(REGIONS)


def matching_regions(dims: FixedDims) -> list[Region]:
    """All determined-answer regions containing ``dims`` (at most one in a consistent table)."""
    return [r for r in _REGION_BUCKETS[_bucket(dims)] if r.matches(dims)]


def quadrant(dims: FixedDims) -> str:
    sign = lambda x: "0" if x == 0 else ("+" if x > 0 else "-")  # noqa: E731
    return "e{} p{} q{} pq{}".format(*(sign(x) for x in dims.as_tuple()))


@lru_cache(maxsize=None)
def _point(dims: FixedDims, p: int, q: int) -> CohomologyAnswer:
    if dependent_pattern(dims):
        fams = [r for r in FAMILIES if r.matches(dims)]
        if len(fams) > 1:
            raise AssertionError(f"overlapping dependent families at {dims}: {[r.label for r in fams]}")
        if fams:
            kind, side = fams[0].payload  # type: ignore[misc]
            return DependsOnChoice(SumName(), ((kind, side),), p, q, region=fams[0].label)
        return NotTabulated(f"dependent configuration {quadrant(dims)} beyond the worked families", dims)
    regions = matching_regions(dims)
    if len(regions) > 1:
        raise AssertionError(f"overlapping regions at {dims}: {[r.label for r in regions]}")
    if not regions:
        return NotTabulated(f"no table region for {quadrant(dims)}", dims)
    r = regions[0]
    return Determined(r.payload, p, q, region=r.label)  # type: ignore[arg-type]


def cohomology_point(
    alpha: Union[VirtualRep, FixedDims],
    d: Optional[int] = None,
    p: Optional[int] = None,
    q: Optional[int] = None,
) -> CohomologyAnswer:
    """``H^alpha(S^0)`` as a C_pq Mackey functor.

    In dependent families the answer is realized only when ``d`` is given.
    The degree-zero case ``(0, 0, 0, 0)`` uses ``d = 1`` by default, since
    ``H^0(S^0)`` is the Burnside functor.
    """
    dims, p, q = _dims_and_primes(alpha, p, q)
    ans = _point(dims, p, q)
    if isinstance(ans, DependsOnChoice):
        if d is None and dims.as_tuple() == (0, 0, 0, 0):
            d = 1
        if d is not None:
            return ans.with_d(d)
    return ans


def iter_grid(lo: int = -8, hi: int = 8) -> Iterator[FixedDims]:
    """All same-parity quadruples in ``[lo, hi]^4``."""
    rng = range(lo, hi + 1)
    for e in rng:
        for a in rng:
            if (a - e) % 2:
                continue
            for b in rng:
                if (b - e) % 2:
                    continue
                for g in rng:
                    if (g - e) % 2 == 0:
                        yield FixedDims(e, a, b, g)


# ---------------------------------------------------------------------------
# recurrences


@dataclass(frozen=True)
class RecurrenceVerdict:
    """Outcome of comparing ``H^alpha`` with ``H^{alpha+V}`` for one rotation ``V``."""

    which: str
    clause: str
    applicable: bool
    passed: Optional[bool] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return bool(self.passed) or not self.applicable


_LEVELS = lambda p, q: (p * q, p, q, 1)  # noqa: E731


def _groups(ans: CohomologyAnswer, p: int, q: int) -> list[FGAbelianGroup]:
    return [level_groups(ans, h) for h in _LEVELS(p, q)]


def _same(a: CohomologyAnswer, b: CohomologyAnswer, p: int, q: int, extra: SumName = SumName()) -> tuple[bool, str]:
    """Compare ``a + extra`` with ``b`` up to isomorphism."""
    if isinstance(a, DependsOnChoice) or isinstance(b, DependsOnChoice):
        if isinstance(a, DependsOnChoice) and isinstance(b, DependsOnChoice) and not extra.terms:
            ok = a.family == b.family
            return ok, f"{a.family} vs {b.family}"
        return False, f"{a} vs {b}: a determined answer cannot match a d-family"
    assert isinstance(a, Determined) and isinstance(b, Determined)
    left = (a.expression + extra).canonical()
    if left == b.expression:
        return True, str(left)
    lf = catalog(left, p, q)
    rf = b.functor
    if not all(iso_groups(lf.level[h], rf.level[h]) for h in _LEVELS(p, q)):
        return False, f"{left} vs {b.expression}: level groups differ"
    ok = iso_search(lf, rf) is not None
    return ok, f"{left} vs {b.expression}: {'isomorphic' if ok else 'no isomorphism found'}"


def _rank_sum(sub: CohomologyAnswer, mid: CohomologyAnswer, quo: CohomologyAnswer, p: int, q: int) -> tuple[bool, str]:
    """Necessary conditions for a short exact sequence ``sub -> mid -> quo`` at every level."""
    for h in _LEVELS(p, q):
        a, b, c = (level_groups(x, h) for x in (sub, mid, quo))
        if b.rank != a.rank + c.rank:
            return False, f"rank mismatch at level {h}"
        if a.rank == b.rank == c.rank == 0 and b.order() != a.order() * c.order():
            return False, f"order mismatch at level {h}"
    return True, "ranks and orders add up"


def _strip_free(g: FGAbelianGroup) -> FGAbelianGroup:
    """``g`` with one free summand removed."""
    assert g.rank >= 1
    return cyclic_sum([0] * (g.rank - 1) + list(g.torsion))


def _top_plus(small: CohomologyAnswer, big: CohomologyAnswer, p: int, q: int, order: int) -> tuple[bool, str]:
    """Top groups satisfy ``big = A + Z`` and ``small = A + Z/order`` (``order=0`` means ``Z``)."""
    n = p * q
    gb, gs = level_groups(big, n), level_groups(small, n)
    if gb.rank < 1:
        return False, f"top of larger side {gb} has no free summand"
    base = _strip_free(gb)
    want = cyclic_sum([0] * base.rank + list(base.torsion) + [order])
    ok = iso_groups(gs, want)
    return ok, f"top groups {gs} and {gb}"


def _shift_for(which: str) -> tuple[int, int, int, int]:
    return {"xi": (2, 0, 0, 0), "xi^p": (2, 2, 0, 0), "xi^q": (2, 0, 2, 0)}[which]


def _clause(dims: FixedDims, which: str) -> Optional[str]:
    e = dims.a_e
    if which == "xi":
        if e >= 1 or e <= -3:
            return "iso"
        return {0: "ses", -2: "top_free"}.get(e)
    r = dims.a_p if which == "xi^p" else dims.a_q
    if (e >= 1 and (r >= 1 or r <= -3)) or (e <= -3 and (r <= -3 or r >= 2)):
        return "iso"
    if r == 0 and (e >= 2 or e <= -3):
        return "ses"
    if r == 1 and e <= -3:
        return "plus_kappa"
    if r == -2 and e > 0:
        return "top_torsion"
    if r == -2 and e <= -4:
        return "top_free"
    return None


def recurrence_check(dims: FixedDims, which: str, p: int, q: int) -> RecurrenceVerdict:
    """Compare ``H^alpha`` with ``H^{alpha+V}`` for ``V`` one of ``xi, xi^p, xi^q``.

    The applicable statement depends on the dimensions: an isomorphism, a
    short exact sequence with kernel ``L_pq`` (for ``xi``) or ``C_r<Z>``, a
    new ``K_r<Z/r>`` summand, or a change of one summand at the top level.
    """
    if which not in ("xi", "xi^p", "xi^q"):
        raise ValueError("which must be xi, xi^p or xi^q")
    clause = _clause(dims, which)
    if clause is None:
        return RecurrenceVerdict(which, "", False, detail="no statement for these dimensions")
    target = dims.shifted(*_shift_for(which))
    a, b = cohomology_point(dims, p=p, q=q), cohomology_point(target, p=p, q=q)
    if isinstance(a, NotTabulated) or isinstance(b, NotTabulated):
        return RecurrenceVerdict(which, clause, False, detail="one side is not tabulated")
    side = "p" if which == "xi^p" else "q"
    if clause == "iso":
        ok, detail = _same(a, b, p, q)
    elif clause == "plus_kappa":
        ok, detail = _same(a, b, p, q, SumName.of(f"K_{side}<Z/{side}>"))
    elif clause == "ses":
        kernel = "L_pq" if which == "xi" else f"C_{side}<Z>"
        ok, detail = _rank_sum(Determined(SumName.of(kernel), p, q), a, b, p, q)
    elif clause == "top_free":
        top_a, top_b = level_groups(a, p * q), level_groups(b, p * q)
        ok = iso_groups(top_b, cyclic_sum([0] * (top_a.rank + 1) + list(top_a.torsion)))
        detail = f"top groups {top_a} and {top_b}"
    else:  # top_torsion
        ok, detail = _top_plus(a, b, p, q, p if side == "p" else q)
    return RecurrenceVerdict(which, clause, True, ok, detail)


# ---------------------------------------------------------------------------
# long exact sequence bookkeeping


def orbit_level_groups(dims: FixedDims, level: int, p: int, q: int) -> FGAbelianGroup:
    """``H^alpha(S^0)`` at a level below the top, read off from orbit cohomology.

    The value at ``G/H`` is the top group of ``H^alpha(G/H_+)``, so it is
    known even where the table for the point is open.
    """
    if level == p * q:
        raise ValueError("the top level is not an orbit value")
    name = {1: "e", p: "C_p", q: "C_q"}[level]
    return level_groups(cohomology_orbit(dims, name, p=p, q=q), p * q)


@lru_cache(maxsize=None)
def _point_ranks(dims: FixedDims, p: int, q: int) -> tuple[Optional[int], ...]:
    ans = cohomology_point(dims, p=p, q=q)
    if isinstance(ans, NotTabulated):
        return (None,) + tuple(orbit_level_groups(dims, h, p, q).rank for h in (p, q, 1))
    return tuple(g.rank for g in _groups(ans, p, q))


def _sphere_ranks(dims: FixedDims, j: int, p: int, q: int) -> tuple[int, ...]:
    # the sphere answer only sees a_e and the dimension fixed by the kernel of xi^j
    a_r = dims.a_p if j % p == 0 else dims.a_q if j % q == 0 else dims.a_e
    return _sphere_ranks_at(dims.a_e, a_r, j, p, q)


@lru_cache(maxsize=None)
def _sphere_ranks_at(a_e: int, a_r: int, j: int, p: int, q: int) -> tuple[int, ...]:
    dims = FixedDims(a_e, a_r, a_r, a_r) if j % p == 0 or j % q == 0 else FixedDims(a_e, a_e, a_e, a_e)
    ans = cohomology_sphere(dims, j, p=p, q=q)
    expr = ans.expression if isinstance(ans, Determined) else ans.with_d(1).expression()  # type: ignore[union-attr]
    return _expression_ranks(expr, p, q)


@lru_cache(maxsize=None)
def _expression_ranks(expr: SumName, p: int, q: int) -> tuple[int, ...]:
    f = catalog(expr, p, q)
    return tuple(f.level[h].rank for h in _LEVELS(p, q))


def les_rank_defect(dims: FixedDims, which: str, p: int, q: int) -> tuple[Optional[int], ...]:
    """Alternating rank sum over the long exact sequence of ``S(V)_+ -> S^0 -> S^V``.

    The sequence runs ``H^{b-V}(S^0) -> H^b(S^0) -> H^b(S(V)_+) -> H^{b+1-V}(S^0)``
    for ``b = alpha + n``.  Exactness forces the alternating sum of ranks to
    vanish.  The result lists the sums at the levels ``pq, p, q, 1``; a level
    is ``None`` when one of its terms is not tabulated.

    The sum only changes sign when ``alpha`` moves by a trivial summand, so
    it is computed once per line ``alpha + n``.
    """
    g = dims.a_pq
    base = dims.shifted(-g, -g, -g, -g)
    total = _line_defect(base, which, p, q)
    sign = -1 if g % 2 else 1
    return tuple(None if t is None else sign * t for t in total)


@lru_cache(maxsize=None)
def _line_defect(base: FixedDims, which: str, p: int, q: int) -> tuple[Optional[int], ...]:
    shift = _shift_for(which)
    j = {"xi": 1, "xi^p": p, "xi^q": q}[which]
    window = max(abs(x) for x in base.as_tuple()) + 6
    total: list[Optional[int]] = [0, 0, 0, 0]
    for n in range(-window, window + 1):
        beta = base.shifted(n, n, n, n)
        minus_v = beta.shifted(*(-s for s in shift))
        before, here = _point_ranks(minus_v, p, q), _point_ranks(beta, p, q)
        sphere = _sphere_ranks(beta, j, p, q)
        sign = -1 if n % 2 else 1  # three terms per step, so the sign flips every step
        for i in range(4):
            b, h, s = before[i], here[i], sphere[i]
            if abs(n) == window and (b or h or s):
                raise AssertionError(f"rank window too small at {beta}")
            cur = total[i]
            if cur is None or b is None or h is None:
                total[i] = None
            else:
                total[i] = cur + sign * (b - h + s)
    return tuple(total)


__all__ = [
    "CohomologyAnswer",
    "Determined",
    "DependsOnChoice",
    "FAMILIES",
    "FixedDims",
    "NotTabulated",
    "NotTabulatedError",
    "ParityError",
    "REGIONS",
    "RecurrenceVerdict",
    "Region",
    "VirtualRep",
    "cohomology_orbit",
    "cohomology_point",
    "cohomology_sphere",
    "dependent_pattern",
    "exponent_classes",
    "fixed_dims",
    "fold_exponent",
    "iter_grid",
    "les_rank_defect",
    "level_groups",
    "lewis_table",
    "matching_regions",
    "orbit_level_groups",
    "parse_rep",
    "quadrant",
    "random_witness",
    "realizable",
    "recurrence_check",
]

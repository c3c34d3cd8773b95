"""Named Mackey functors for C_p and C_pq.

Names are structured values (:class:`CpName`, :class:`CpqName`,
:class:`SumName`) with a plain-text syntax used by the CLI and JSON output.
The prime letters ``p`` and ``q`` are symbolic and resolved against the
primes of the lattice when a functor is built.

C_p functors (``r`` is ``p`` or ``q``)::

    A_r  A_r[d]  R_r  L_r  <Z>_r  <Z/n>_r  F_r  kappa_r

C_pq functors::

    A  A_{G/e}  R_pq  L_pq  <<Z>>  <<Z/pq>>
    E_r(M)  Q_r(M)  cA_r(M)  C_r(M)  K_r(M)    for a C_r functor M
    C_r<Z/r>                                   shorthand for C_r(<Z/r>_r)

and ``X + Y`` for direct sums, ``0`` for the zero functor.

Generator orders: ``A_r[d]`` has top level ``Z^2`` with generators
(trivial orbit, free orbit), so that restriction is the row ``[d r]``.
``F_r`` has bottom level ``Z^r`` with the generator acting by cyclic shift.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .groups import GroupHom, cyclic, free_group
from .mackey import (
    MackeyFunctor,
    MackeyHom,
    SubgroupLattice,
    direct_sum,
    representable,
    tensor_external,
    zero_functor,
)
from .matrix import IntMatrix

CP_KINDS = ("A", "R", "L", "box", "F", "kappa")
LIFTS = ("E", "Q", "cA", "C", "K")
# the C_s functor that each lifted family tensors with
LIFT_PARTNER = {"E": "F", "Q": "box", "cA": "A", "C": "L", "K": "R"}


def coeff_order(coeff: str, p: int, q: int | None) -> int:
    """Order of a coefficient group ``Z`` or ``Z/n`` (0 for ``Z``)."""
    if coeff == "Z":
        return 0
    if not coeff.startswith("Z/"):
        raise ValueError(f"bad coefficient group {coeff!r}")
    body = coeff[2:]
    symbols = {"p": p, "q": q, "pq": p * q if q else None}
    if body in symbols:
        val = symbols[body]
        if val is None:
            raise ValueError(f"coefficient {coeff} needs the prime q")
        return val
    if body.isdigit() and int(body) >= 1:
        return int(body)
    raise ValueError(f"bad coefficient group {coeff!r}")


@dataclass(frozen=True)
class CpName:
    """A C_r catalog functor; ``side`` is the prime letter ``"p"`` or ``"q"``."""

    kind: str
    side: str = "p"
    d: int = 1
    coeff: str = "Z"

    def __post_init__(self) -> None:
        if self.kind not in CP_KINDS:
            raise ValueError(f"unknown C_p functor kind {self.kind!r}")
        if self.side not in ("p", "q"):
            raise ValueError("side must be 'p' or 'q'")

    def __str__(self) -> str:
        r = self.side
        if self.kind == "A":
            return f"A_{r}" if self.d == 1 else f"A_{r}[{self.d}]"
        if self.kind == "box":
            return f"<{self.coeff}>_{r}"
        return f"{self.kind}_{r}"

    def mirrored(self) -> "CpName":
        return CpName(self.kind, "q" if self.side == "p" else "p", self.d, _swap_coeff(self.coeff))


@dataclass(frozen=True)
class CpqName:
    """A C_pq catalog functor: a basic one or a lifted family applied to a C_r name."""

    kind: str
    side: str = ""
    inner: CpName | None = None
    coeff: str = "Z"

    def __post_init__(self) -> None:
        basic = ("A", "free", "R", "L", "box")
        if self.kind in basic:
            if self.inner is not None:
                raise ValueError(f"{self.kind} takes no inner functor")
        elif self.kind in LIFTS:
            if self.inner is None or self.side not in ("p", "q") or self.inner.side != self.side:
                raise ValueError(f"lifted family {self.kind} needs an inner functor on side {self.side!r}")
        else:
            raise ValueError(f"unknown C_pq functor kind {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "A":
            return "A"
        if self.kind == "free":
            return "A_{G/e}"
        if self.kind in ("R", "L"):
            return f"{self.kind}_pq"
        if self.kind == "box":
            return f"<<{self.coeff}>>"
        assert self.inner is not None
        if self.inner.kind == "box":
            return f"{self.kind}_{self.side}<{self.inner.coeff}>"
        return f"{self.kind}_{self.side}({self.inner})"

    def mirrored(self) -> "CpqName":
        if self.inner is None:
            return CpqName(self.kind, coeff=_swap_coeff(self.coeff))
        return CpqName(self.kind, "q" if self.side == "p" else "p", self.inner.mirrored())


def _swap_coeff(coeff: str) -> str:
    return {"Z/p": "Z/q", "Z/q": "Z/p"}.get(coeff, coeff)


@dataclass(frozen=True)
class SumName:
    """A direct sum of catalog names; the empty sum is the zero functor."""

    terms: tuple[Union[CpName, CpqName], ...] = ()

    def __str__(self) -> str:
        return " + ".join(str(t) for t in self.terms) if self.terms else "0"

    def __add__(self, other: "SumName") -> "SumName":
        return SumName(self.terms + other.terms)

    def mirrored(self) -> "SumName":
        return SumName(tuple(t.mirrored() for t in self.terms))

    def canonical(self) -> "SumName":
        return SumName(tuple(sorted(self.terms, key=str)))

    @classmethod
    def of(cls, *terms: Union[CpName, CpqName, str]) -> "SumName":
        out: list[Union[CpName, CpqName]] = []
        for t in terms:
            if isinstance(t, str):
                out.extend(parse_name(t).terms)
            else:
                out.append(t)
        return cls(tuple(out))


AnyName = Union[CpName, CpqName, SumName]

# -- parsing ---------------------------------------------------------------

_CP_RE = re.compile(
    r"^(?:A_(?P<a>[pq])(?:\[(?P<d>-?\d+)\])?"
    r"|(?P<rl>R|L|F|kappa)_(?P<s>[pq])"
    r"|<(?P<bc>Z(?:/\w+)?)>_(?P<bs>[pq]))$"
)
_LIFT_RE = re.compile(r"^(?P<fam>E|Q|cA|C|K)_(?P<side>[pq])(?:\((?P<inner>.+)\)|<(?P<coeff>Z(?:/\w+)?)>)$")


def _split_sum(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def parse_cp(text: str) -> CpName:
    m = _CP_RE.match(text.strip())
    if not m:
        raise ValueError(f"unknown C_p functor name {text!r}")
    if m.group("a"):
        return CpName("A", m.group("a"), int(m.group("d") or 1))
    if m.group("rl"):
        return CpName(m.group("rl"), m.group("s"))
    return CpName("box", m.group("bs"), coeff=m.group("bc"))


def parse_term(text: str) -> Union[CpName, CpqName]:
    text = text.strip()
    if text == "A":
        return CpqName("A")
    if text == "A_{G/e}":
        return CpqName("free")
    if text in ("R_pq", "L_pq"):
        return CpqName(text[0])
    box = re.match(r"^<<(Z(?:/\w+)?)>>$", text)
    if box:
        return CpqName("box", coeff=box.group(1))
    lift = _LIFT_RE.match(text)
    if lift:
        side = lift.group("side")
        if lift.group("coeff") is not None:
            inner = CpName("box", side, coeff=lift.group("coeff"))
        else:
            inner = parse_cp(lift.group("inner"))
        return CpqName(lift.group("fam"), side, inner)
    return parse_cp(text)


def parse_name(text: str) -> SumName:
    """Parse a catalog expression such as ``"K_p<Z/p> + <<Z>>"``."""
    text = text.strip()
    if text in ("0", ""):
        return SumName(())
    return SumName(tuple(parse_term(t) for t in _split_sum(text)))


# -- construction ----------------------------------------------------------

def _prime(side: str, p: int, q: int | None) -> int:
    if side == "p":
        return p
    if q is None:
        raise ValueError("this functor needs the prime q")
    return q


def _build_cp(name: CpName, p: int, q: int | None) -> MackeyFunctor:
    r = _prime(name.side, p, q)
    lat = SubgroupLattice(r)
    label = str(name)
    kind = name.kind
    if kind == "A":
        top, bot = free_group(2), free_group(1)
        res = GroupHom.from_rows(top, bot, [[name.d, r]])
        tr = GroupHom.from_rows(bot, top, [[0], [1]])
        return MackeyFunctor(lat, {r: top, 1: bot}, {(1, r): res}, {(1, r): tr}, name=label)
    if kind in ("R", "L"):
        z = free_group(1)
        res = GroupHom.scalar(z, 1 if kind == "R" else r)
        tr = GroupHom.scalar(z, r if kind == "R" else 1)
        return MackeyFunctor(lat, {r: z, 1: z}, {(1, r): res}, {(1, r): tr}, name=label)
    if kind == "box":
        top = cyclic(coeff_order(name.coeff, p, q))
        bot = free_group(0)
        return MackeyFunctor(
            lat, {r: top, 1: bot}, {(1, r): GroupHom.zero(top, bot)}, {(1, r): GroupHom.zero(bot, top)}, name=label
        )
    if kind == "F":
        return free_orbit_functor(r, label)
    if kind == "kappa":
        from .homological import kernel_mackey

        f = free_orbit_functor(r)
        lp = _build_cp(CpName("L", name.side), p, q)
        sum_map = MackeyHom(
            f,
            lp,
            {
                r: GroupHom.from_rows(f.level[r], lp.level[r], [[1]]),
                1: GroupHom.from_rows(f.level[1], lp.level[1], [[1] * r]),
            },
        )
        k, _ = kernel_mackey(sum_map)
        k.name = label
        return k
    raise ValueError(f"unknown kind {kind}")


def free_orbit_functor(r: int, label: str = "F") -> MackeyFunctor:
    """``F_r``: ``Z`` on top, ``Z^r`` below, diagonal restriction, summing transfer."""
    lat = SubgroupLattice(r)
    top, bot = free_group(1), free_group(r)
    res = GroupHom.from_rows(top, bot, [[1] for _ in range(r)])
    tr = GroupHom.from_rows(bot, top, [[1] * r])
    shift = [[int(i == (j + 1) % r) for j in range(r)] for i in range(r)]
    weyl = {r: GroupHom.identity(top), 1: GroupHom.from_rows(bot, bot, shift)}
    return MackeyFunctor(lat, {r: top, 1: bot}, {(1, r): res}, {(1, r): tr}, weyl, name=label)


def _build_cpq(name: CpqName, p: int, q: int) -> MackeyFunctor:
    label = str(name)
    if name.kind == "free":
        m = representable(SubgroupLattice(p, q), 1)
        m.name = label
        return m
    if name.kind == "A":
        left, right = CpName("A", "p"), CpName("A", "q")
    elif name.kind in ("R", "L"):
        left, right = CpName(name.kind, "p"), CpName(name.kind, "q")
    elif name.kind == "box":
        left, right = CpName("box", "p", coeff=name.coeff), CpName("box", "q", coeff=name.coeff)
    else:
        assert name.inner is not None
        other = "q" if name.side == "p" else "p"
        partner_kind = LIFT_PARTNER[name.kind]
        partner = CpName(partner_kind, other)
        if name.side == "p":
            left, right = name.inner, partner
        else:
            left, right = partner, name.inner
    m = tensor_external(_build_cp(left, p, q), _build_cp(right, p, q))
    m.name = label
    return m


@lru_cache(maxsize=None)
def _build_cached(name: AnyName, p: int, q: int | None) -> MackeyFunctor:
    if isinstance(name, CpName):
        return _build_cp(name, p, q)
    if isinstance(name, CpqName):
        if q is None:
            raise ValueError(f"{name} is a C_pq functor and needs q")
        return _build_cpq(name, p, q)
    if not name.terms:
        lat = SubgroupLattice(p, q) if q is not None else SubgroupLattice(p)
        return zero_functor(lat)
    parts = [_build_cached(t, p, q) for t in name.terms]
    if len(parts) == 1:
        return parts[0]
    return direct_sum(*parts, name=str(name))


def catalog(name: Union[str, AnyName], p: int, q: int | None = None) -> MackeyFunctor:
    """Build a named functor over C_p (or C_q) or over C_pq.

    >>> catalog("L_p", 3).level[1]
    FGAbelianGroup(rank=1, torsion=(), gens=1, rels=IntMatrix(1x0, [[]]))
    >>> str(catalog("<<Z/pq>>", 3, 5).level[15])
    'Z/15'
    """
    if isinstance(name, str):
        parsed: AnyName = parse_name(name)
        if len(parsed.terms) == 1:
            parsed = parsed.terms[0]
    else:
        parsed = name
    return _build_cached(parsed, p, q)


def cp_catalog_names(side: str = "p", d_values: tuple[int, ...] = (1, 2)) -> list[CpName]:
    """The C_r catalog used for exhaustive checks."""
    names = [CpName("A", side, d) for d in d_values]
    names += [CpName("R", side), CpName("L", side), CpName("F", side), CpName("kappa", side)]
    names += [CpName("box", side, coeff=c) for c in ("Z", "Z/p", "Z/q")]
    return names


def cpq_catalog_names() -> list[CpqName]:
    names = [CpqName("A"), CpqName("R"), CpqName("L")]
    names += [CpqName("box", coeff=c) for c in ("Z", "Z/p", "Z/q", "Z/pq")]
    for side in ("p", "q"):
        inners = [
            CpName("A", side),
            CpName("A", side, 2),
            CpName("R", side),
            CpName("L", side),
            CpName("box", side, coeff="Z"),
            CpName("box", side, coeff=f"Z/{side}"),
        ]
        for fam in LIFTS:
            for inner in inners:
                names.append(CpqName(fam, side, inner))
    return names


__all__ = [
    "AnyName",
    "CpName",
    "CpqName",
    "SumName",
    "catalog",
    "coeff_order",
    "cp_catalog_names",
    "cpq_catalog_names",
    "free_orbit_functor",
    "parse_name",
]

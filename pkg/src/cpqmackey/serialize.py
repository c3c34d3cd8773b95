"""JSON forms of groups, Mackey functors, homomorphisms and cohomology answers.

Groups are stored by invariant factors together with their presentation,
and maps by their matrices in normal-form coordinates, so ``from_json(to_json(x))`` reproduces ``x``
exactly (equal levels, equal matrices).
"""

from __future__ import annotations

import json
from typing import Any, Mapping, Optional

from .cohomology import (
    CohomologyAnswer,
    DependsOnChoice,
    FixedDims,
    NotTabulated,
    level_groups,
)
from .groups import FGAbelianGroup, GroupHom, presented_group
from .mackey import MackeyFunctor, MackeyHom, SubgroupLattice
from .matrix import IntMatrix


def group_to_json(g: FGAbelianGroup) -> dict:
    return {
        "rank": g.rank,
        "torsion": list(g.torsion),
        "presentation": {"gens": g.gens, "relations": g.rels.cols, "rels": [list(r) for r in g.rels.to_rows()]},
    }


def group_from_json(data: Mapping) -> FGAbelianGroup:
    """Rebuild a group; without a presentation the normal form itself is used."""
    torsion = tuple(int(t) for t in data.get("torsion", []))
    rank = int(data.get("rank", 0))
    pres = data.get("presentation")
    if pres is None:
        orders = list(torsion) + [0] * rank
        n = len(orders)
        g = presented_group(n, IntMatrix.diag(orders) if n else IntMatrix.zeros(0, 0))
    else:
        gens, cols = int(pres["gens"]), int(pres["relations"])
        rows = [[int(x) for x in r] for r in pres["rels"]]
        rels = IntMatrix.from_rows(rows, cols) if gens else IntMatrix.zeros(0, cols)
        g = presented_group(gens, rels)
    if g.key() != (rank, torsion):
        raise ValueError(f"presentation gives {g}, not rank {rank} torsion {list(torsion)}")
    return g


def _rows(f: GroupHom) -> list[list[int]]:
    return [list(r) for r in f.matrix.to_rows()]


def _hom(domain: FGAbelianGroup, codomain: FGAbelianGroup, rows: Any) -> GroupHom:
    rows = [[int(x) for x in r] for r in rows]
    if len(rows) != codomain.ngens or any(len(r) != domain.ngens for r in rows):
        raise ValueError(f"matrix shape does not match {codomain.ngens}x{domain.ngens}")
    return GroupHom.from_rows(domain, codomain, rows)


def _edge_key(h: int, k: int) -> str:
    return f"{h}<{k}"


def _parse_edge(key: str) -> tuple[int, int]:
    h, k = key.split("<")
    return int(h), int(k)


def functor_to_json(m: MackeyFunctor) -> dict:
    lat = m.lattice
    return {
        "p": lat.p,
        "q": lat.q,
        "name": m.name,
        "levels": {str(h): group_to_json(m.level[h]) for h in lat.levels},
        "res": {_edge_key(h, k): _rows(m.res[(h, k)]) for h, k in lat.edges},
        "tr": {_edge_key(h, k): _rows(m.tr[(h, k)]) for h, k in lat.edges},
        "weyl": {str(h): _rows(m.weyl[h]) for h in lat.levels},
    }


def functor_from_json(data: Mapping) -> MackeyFunctor:
    q = data.get("q")
    lat = SubgroupLattice(int(data["p"]), None if q is None else int(q))
    level = {h: group_from_json(data["levels"][str(h)]) for h in lat.levels}
    res, tr = {}, {}
    for key, rows in data["res"].items():
        h, k = _parse_edge(key)
        res[(h, k)] = _hom(level[k], level[h], rows)
    for key, rows in data["tr"].items():
        h, k = _parse_edge(key)
        tr[(h, k)] = _hom(level[h], level[k], rows)
    weyl = None
    if "weyl" in data:
        weyl = {int(h): _hom(level[int(h)], level[int(h)], rows) for h, rows in data["weyl"].items()}
    return MackeyFunctor(lat, level, res, tr, weyl, data.get("name"))


def hom_to_json(f: MackeyHom) -> dict:
    return {
        "domain": functor_to_json(f.domain),
        "codomain": functor_to_json(f.codomain),
        "maps": {str(h): _rows(g) for h, g in sorted(f.maps.items(), reverse=True)},
    }


def hom_from_json(data: Mapping) -> MackeyHom:
    m, n = functor_from_json(data["domain"]), functor_from_json(data["codomain"])
    maps = {int(h): _hom(m.level[int(h)], n.level[int(h)], rows) for h, rows in data["maps"].items()}
    return MackeyHom(m, n, maps)


# ---------------------------------------------------------------------------
# cohomology answers


def answer_to_json(ans: CohomologyAnswer, dims: Optional[FixedDims] = None) -> dict:
    out: dict[str, Any] = {"dims": list(dims.as_tuple()) if dims else None}
    if isinstance(ans, NotTabulated):
        out.update(kind="not_tabulated", reason=ans.reason)
        return out
    if isinstance(ans, DependsOnChoice):
        out.update(kind="depends_on_choice", family=ans.family, d=ans.d, region=ans.region)
        if ans.d is None:
            return out
        out["expression"] = str(ans.expression())
    else:
        out.update(kind="determined", expression=str(ans.expression), region=ans.region)
    out["functor"] = functor_to_json(ans.functor)
    out["groups"] = {str(h): str(level_groups(ans, h)) for h in ans.functor.lattice.levels}
    return out


def dumps(obj: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2)

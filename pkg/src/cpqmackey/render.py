"""Text pictures of Mackey functors.

For ``C_pq`` the four levels sit on a diamond with ``G/G`` on top and
``G/e`` at the bottom.  Restrictions run down the outer edges and
transfers up the inner edges.  Structure matrices are listed below the
picture, since they rarely fit on an arrow.
"""

from __future__ import annotations

from .groups import GroupHom
from .mackey import MackeyFunctor


def level_label(h: int, top: int) -> str:
    if h == top:
        return "G/G"
    if h == 1:
        return "G/e"
    return f"G/C_{h}"


def _matrix(f: GroupHom) -> str:
    rows = f.matrix.to_rows()
    if not rows or not rows[0]:
        return "0"
    return "[" + "; ".join(" ".join(str(x) for x in r) for r in rows) + "]"


def _center(text: str, width: int) -> str:
    pad = max(width - len(text), 0)
    return " " * (pad // 2) + text


def diagram(m: MackeyFunctor) -> str:
    lat = m.lattice
    top = lat.order
    g = {h: f"{level_label(h, top)}: {m.level[h]}" for h in lat.levels}
    if lat.is_prime:
        lines = [
            g[top],
            "  |  ^",
            "res  tr",
            "  v  |",
            g[1],
        ]
    else:
        p, q = lat.primes
        left, right = g[p], g[q]
        gap = 8
        width = len(left) + gap + len(right)
        mid_l = len(left) // 2
        mid_r = len(left) + gap + len(right) // 2
        centre = width // 2

        def row(cells: dict[int, str]) -> str:
            line = [" "] * (width + 4)
            for pos, txt in cells.items():
                for i, ch in enumerate(txt):
                    if 0 <= pos + i < len(line):
                        line[pos + i] = ch
            return "".join(line).rstrip()

        span = max(centre - mid_l, 4)
        lines = [_center(g[top], width)]
        lines.append(row({centre - 4: "/ ^", centre + 2: "^ \\"}))
        lines.append(row({centre - span // 2 - 5: "res/", centre - 2: "tr", centre + 1: "tr", centre + span // 2 + 2: "\\res"}))
        lines.append(row({mid_l + 1: "v /", mid_r - 3: "\\ v"}))
        lines.append(left + " " * gap + right)
        lines.append(row({mid_l + 1: "\\ ^", mid_r - 3: "^ /"}))
        lines.append(row({centre - span // 2 - 5: "res\\", centre - 2: "tr", centre + 1: "tr", centre + span // 2 + 2: "/res"}))
        lines.append(row({centre - 4: "v \\", centre + 2: "/ v"}))
        lines.append(_center(g[1], width))
    return "\n".join(lines)


def structure_maps(m: MackeyFunctor) -> str:
    lat = m.lattice
    top = lat.order
    out = []
    for h, k in sorted(lat.edges, key=lambda e: (-e[1], -e[0])):
        a, b = level_label(k, top), level_label(h, top)
        out.append(f"res {a} -> {b}: {_matrix(m.res[(h, k)])}")
        out.append(f"tr  {b} -> {a}: {_matrix(m.tr[(h, k)])}")
    for h in lat.levels:
        if h != top and not m.level[h].is_zero():
            w = m.weyl[h]
            if w != GroupHom.identity(m.level[h]):
                out.append(f"gen on {level_label(h, top)}: {_matrix(w)}")
    return "\n".join(out)


def render_functor(m: MackeyFunctor) -> str:
    return diagram(m) + "\n\n" + structure_maps(m)

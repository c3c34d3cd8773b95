"""The thirteen acceptance criteria, each checked at exact equality.

Every criterion records its outcome through the ``criterion`` fixture; the
terminal summary prints one PASS/FAIL line per criterion.  Sub-claims that the
implementation shows to be false are split into their own strict xfail tests
so the rest of the criterion still runs.
"""

import random
import time
from math import comb, gcd

import pytest

from cpqmackey.catalog import catalog, cp_catalog_names, cpq_catalog_names, parse_name
from cpqmackey.cohomology import (
    DependsOnChoice,
    Determined,
    FixedDims,
    NotTabulated,
    cohomology_point,
    fixed_dims,
    iter_grid,
    les_rank_defect,
    level_groups,
    lewis_table,
    random_witness,
    VirtualRep,
    recurrence_check,
)
from cpqmackey.freeness import (
    Cell,
    CellComplex,
    FreenessViolation,
    check_even_type,
    entrywise_pairs,
    free_decomposition,
    freeness_report,
    grassmannian_complex,
    grassmannian_formula_dims,
    ll,
    projective_space_complex,
    schubert_rep,
    schubert_sequences,
    verify_vanishing,
)
from cpqmackey.groups import GroupHom, cokernel_hom, cyclic_sum, iso_groups, kernel_hom
from cpqmackey.homological import ext1, hom_mackey
from cpqmackey.mackey import iso_search, phi_restrict, rho_restrict, validate
from cpqmackey.matrix import IntMatrix, determinant, smith_normal_form

P, Q = 3, 5
N = P * Q
LEVELS = (N, P, Q, 1)


def c(name, p=P, q=Q):
    return catalog(name, p, q)


@pytest.fixture(scope="module")
def grid():
    return {d: cohomology_point(d, p=P, q=Q) for d in iter_grid(-8, 8)}


# -- 1. exact linear algebra -------------------------------------------------------------


def _diagonal_chain(d):
    diag = d.diagonal()
    off = any(d[i, j] for i in range(d.rows) for j in range(d.cols) if i != j)
    chain = all((a == 0 and b == 0) or (a != 0 and b % a == 0) for a, b in zip(diag, diag[1:]))
    return not off and all(x >= 0 for x in diag) and chain


def _random_hom(rng, dom, cod):
    rows = [[0] * dom.ngens for _ in range(cod.ngens)]
    for j, d in enumerate(dom.orders):
        for i, k in enumerate(cod.orders):
            if d and not k:
                continue
            step = k // gcd(k, d) if (k and d) else 1
            rows[i][j] = step * rng.randint(-5, 5)
    return GroupHom.from_rows(dom, cod, rows)


def test_criterion_01_linear_algebra(criterion):
    log = criterion(1, "exact linear algebra (500 SNFs, brute-force kernel/cokernel counts)")
    rng = random.Random(20261019)
    bad_snf = 0
    for _ in range(500):
        r, k = rng.randint(0, 6), rng.randint(0, 6)
        a = IntMatrix.from_rows([[rng.randint(-20, 20) for _ in range(k)] for _ in range(r)], k)
        U, D, V = smith_normal_form(a)
        if not (U @ a @ V == D and abs(determinant(U)) == 1 and abs(determinant(V)) == 1 and _diagonal_chain(D)):
            bad_snf += 1
    orders = [2, 3, 4, 5, 6, 8, 9, 10, 12]
    checked = bad_counts = 0
    while checked < 200:
        dom = cyclic_sum(rng.choices(orders, k=rng.randint(0, 3)))
        cod = cyclic_sum(rng.choices(orders, k=rng.randint(0, 3)))
        if dom.order() * cod.order() > 10**4:
            continue
        f = _random_hom(rng, dom, cod)
        kernel, inc = kernel_hom(f)
        coker, proj = cokernel_hom(f)
        image = {f(x) for x in dom.elements()}
        zeros = sum(1 for x in dom.elements() if f(x) == cod.zero())
        ok = (
            kernel.order() == zeros
            and coker.order() * len(image) == cod.order()
            and (f @ inc).is_zero()
            and (proj @ f).is_zero()
        )
        bad_counts += not ok
        checked += 1
    ok = log.record("snf+kernels", bad_snf == 0 and bad_counts == 0, f"500 SNFs, {checked} homs")
    assert ok, (bad_snf, bad_counts)


# -- 2. catalog validation ------------------------------------------------------------------


@pytest.mark.parametrize("p,q", [(3, 5), (3, 7), (5, 7)])
def test_criterion_02_catalog_validates(criterion, p, q):
    log = criterion(2, "every catalog functor satisfies the Mackey axioms at (3,5), (3,7), (5,7)")
    problems = {}
    names = cpq_catalog_names()
    for name in names:
        v = validate(catalog(name, p, q))
        if v:
            problems[str(name)] = v
    for side in ("p", "q"):
        for name in cp_catalog_names(side):
            v = validate(catalog(name, p, q))
            if v:
                problems[str(name)] = v
    ok = log.record(f"({p},{q})", not problems, f"({p},{q}): {len(names)} C_pq + 18 C_r functors")
    assert ok, problems


# -- 3. Hom/Ext reproduction ----------------------------------------------------------------

BRACKET_CP = ["<Z>_p", "<Z/p>_p", "<Z/q>_p"]
BRACKET_CPQ = ["<<Z>>", "<<Z/p>>", "<<Z/q>>", "<<Z/pq>>"]

# sub-claims whose computed value is not zero
EXT_R_P_NONZERO = {"<Z>_p", "<Z/p>_p"}
EXT_K_P_Z_NONZERO = {"<<Z>>", "<<Z/q>>", "<<Z/pq>>"}


def ext_zero_claims():
    for m in ["<Z>_p", "R_p", "L_p"]:
        for a in BRACKET_CP:
            if not (m == "R_p" and a in EXT_R_P_NONZERO):
                yield m, a
    for m in ["K_p<Z>", "K_p(R_p)", "K_p(L_p)"]:
        for a in BRACKET_CPQ:
            if not (m == "K_p<Z>" and a in EXT_K_P_Z_NONZERO):
                yield m, a
    yield "<<Z>>", "L_pq"


def test_criterion_03_hom_ext(criterion):
    log = criterion(3, "Hom/Ext vanishing and torsion values over C_p and C_pq")
    failures = []
    for a in BRACKET_CP:
        if not hom_mackey(c("L_p"), c(a))[0].is_zero():
            failures.append(f"Hom(L_p,{a})")
    for a in BRACKET_CPQ:
        if not hom_mackey(c("R_pq"), c(a))[0].is_zero():
            failures.append(f"Hom(R_pq,{a})")
    zero_claims = list(ext_zero_claims())
    for m, n in zero_claims:
        if not ext1(c(m), c(n)).is_zero():
            failures.append(f"Ext^1({m},{n})")
    if ext1(c("<Z>_p"), c("L_p")).key() != (0, (3,)):
        failures.append("Ext(<Z>,L_p) = Z/3")
    ok = log.record("attainable sub-claims", not failures, f"{len(zero_claims)} Ext vanishings, 7 Hom vanishings, Ext(<Z>,L_p)=Z/3")
    assert ok, failures


@pytest.mark.xfail(strict=True, reason="computed Ext^1(R_p, <A>) = Z/3 for A = Z, Z/3")
@pytest.mark.parametrize("a", sorted(EXT_R_P_NONZERO))
def test_criterion_03_ext_r_p_vanishes(criterion, a):
    log = criterion(3, "Hom/Ext vanishing and torsion values over C_p and C_pq")
    group = ext1(c("R_p"), c(a))
    assert log.record(f"Ext^1(R_p,{a})=0", group.is_zero(), f"got {group}")


@pytest.mark.xfail(strict=True, reason="computed Ext^1(K_p<Z>, <<A>>) = Z/5 for A = Z, Z/q, Z/pq")
@pytest.mark.parametrize("a", sorted(EXT_K_P_Z_NONZERO))
def test_criterion_03_ext_k_p_z_vanishes(criterion, a):
    log = criterion(3, "Hom/Ext vanishing and torsion values over C_p and C_pq")
    group = ext1(c("K_p<Z>"), c(a))
    assert log.record(f"Ext^1(K_p<Z>,{a})=0", group.is_zero(), f"got {group}")


# -- 4. adjunctions ---------------------------------------------------------------------------

ADJ_PAIRS = [
    (m, n)
    for m in ["A_p", "R_p", "L_p", "<Z>_p", "<Z/p>_p"]
    for n in ["A", "L_pq", "<<Z>>", "<<Z/q>>", "K_q<Z>"]
]


def _lift(fam, m):
    return f"{fam}{m[:-2]}" if m.startswith("<") else f"{fam}({m})"


def test_criterion_04_adjunctions(criterion):
    log = criterion(4, "E_p -| Phi_p* and A_p -| rho_p* on Hom and Ext^1")
    failures = []
    for m, n in ADJ_PAIRS:
        for fam, restrict in (("E_p", phi_restrict), ("cA_p", rho_restrict)):
            lifted, right = c(_lift(fam, m)), restrict(c(n), P)
            if not iso_groups(hom_mackey(lifted, c(n))[0], hom_mackey(c(m), right)[0]):
                failures.append(f"Hom {fam} {m},{n}")
            if not iso_groups(ext1(lifted, c(n)), ext1(c(m), right)):
                failures.append(f"Ext {fam} {m},{n}")
    ok = log.record("pairs", not failures, f"{len(ADJ_PAIRS)} pairs x 2 adjunctions x (Hom, Ext^1)")
    assert ok, failures


# -- 5. resolution independence ---------------------------------------------------------------


def test_criterion_05_resolution_independence(criterion):
    log = criterion(5, "Ext^1 agrees across two resolution orderings")
    pairs = [(m, a) for m in ["<Z>_p", "R_p", "L_p"] for a in BRACKET_CP]
    pairs += [(m, a) for m in ["K_p<Z>", "K_p(R_p)", "K_p(L_p)"] for a in BRACKET_CPQ]
    pairs += [("<Z>_p", "L_p"), ("<<Z>>", "L_pq")]
    diffs = [
        (m, n) for m, n in pairs
        if ext1(c(m), c(n), order="top").key() != ext1(c(m), c(n), order="bottom").key()
    ]
    ok = log.record("pairs", not diffs, f"{len(pairs)} pairs, top-first vs bottom-first covers")
    assert ok, diffs


# -- 6. the four base displays ---------------------------------------------------------------

# (sign of the trivial part, twist multiplicity, value at n)
BASE_DISPLAYS = {
    "xi^p - n": (-1, 1, {2: "K_p(A_p)", 0: "Q_p(A_p)"}),
    "n - xi^p": (1, -1, {2: "C_p(A_p)", 0: "Q_p(A_p)"}),
    "xi^p + xi^q - n": (-1, 1, {4: "R_pq", 2: "K_p<Z> + K_q<Z>", 0: "<<Z>>"}),
    "n - xi^p - xi^q": (1, -1, {4: "L_pq", 2: "C_p<Z> + C_q<Z>", 0: "<<Z>>"}),
}


def _expression(ans):
    return ans.expression() if isinstance(ans, DependsOnChoice) else ans.expression


def test_criterion_06_base_displays(criterion):
    log = criterion(6, "the four displayed families xi^p - n, n - xi^p, xi^p + xi^q - n, n - xi^p - xi^q")
    mismatches = []
    for template, (sign, mult, table) in BASE_DISPLAYS.items():
        twists = {P: mult, Q: mult} if "xi^q" in template else {P: mult}
        for n in range(-12, 13):
            rep = VirtualRep.build(P, Q, sign * n, twists)
            ans = cohomology_point(rep, 1)
            if isinstance(ans, NotTabulated):
                mismatches.append((template, n, "not tabulated"))
                continue
            want = parse_name(table.get(n, "0")).canonical()
            if _expression(ans).canonical() != want:
                mismatches.append((template, n, str(_expression(ans))))
    ok = log.record("displays", not mismatches, "n in [-12, 12], d = 1")
    assert ok, mismatches


# -- 7. the classification grid ---------------------------------------------------------------


def _nonvanishing_hypothesis(d):
    fixed = {"e": d.a_e, "p": d.a_p, "q": d.a_q, "pq": d.a_pq}
    pairs = [("p", "e"), ("q", "e"), ("pq", "p"), ("pq", "q")]
    return all(fixed[k] != 0 or fixed[h] != 0 for k, h in pairs)


def test_criterion_07a_total(criterion, grid):
    log = criterion(7, "classification grid [-8,8]^4 at (3,5)")
    kinds = {Determined: 0, DependsOnChoice: 0, NotTabulated: 0}
    undocumented = []
    for d, ans in grid.items():
        kinds[type(ans)] += 1
        if isinstance(ans, NotTabulated) and _nonvanishing_hypothesis(d):
            undocumented.append(d)
    ok = log.record(
        "a total",
        not undocumented and sum(kinds.values()) == len(grid),
        f"{len(grid)} points: {kinds[Determined]} determined, {kinds[DependsOnChoice]} d-families, "
        f"{kinds[NotTabulated]} open (all in the dependent pattern)",
    )
    assert ok, undocumented[:10]


def test_criterion_07b_validate(criterion, grid):
    log = criterion(7, "classification grid [-8,8]^4 at (3,5)")
    # a Determined answer's functor is fixed by its expression, so validate each once
    seen, invalid = {}, []
    for ans in grid.values():
        if isinstance(ans, Determined) and ans.expression not in seen:
            seen[ans.expression] = validate(ans.functor)
            if seen[ans.expression]:
                invalid.append(str(ans.expression))
    ok = log.record("b validate", not invalid, f"{len(seen)} distinct determined functors valid")
    assert ok, invalid


def test_criterion_07c_recurrences(criterion, grid):
    log = criterion(7, "classification grid [-8,8]^4 at (3,5)")
    applied, failed = 0, []
    for d in grid:
        for which in ("xi", "xi^p", "xi^q"):
            v = recurrence_check(d, which, P, Q)
            if v.applicable:
                applied += 1
                if not v.passed:
                    failed.append((d, which, v.clause, v.detail))
    ok = log.record("c recurrences", not failed, f"{applied} applicable recurrence checks")
    assert ok, failed[:10]


def test_criterion_07d_exact_sequence_ranks(criterion, grid):
    log = criterion(7, "classification grid [-8,8]^4 at (3,5)")
    nonzero, checked, skipped = [], 0, 0
    for d in grid:
        for which in ("xi", "xi^p", "xi^q"):
            for level, value in zip(LEVELS, les_rank_defect(d, which, P, Q)):
                if value is None:
                    skipped += 1
                elif value:
                    nonzero.append((d, which, level, value))
                else:
                    checked += 1
    ok = log.record(
        "d ranks", not nonzero,
        f"{checked} level sums zero, {skipped} top-level sums touch an open entry",
    )
    assert ok, nonzero[:10]


# -- 8. dependence on fixed dimensions only ---------------------------------------------------


def test_criterion_08_fixed_dims_only(criterion):
    log = criterion(8, "level groups depend only on fixed-point dimensions")
    rng = random.Random(8)
    quads, differing = 0, []
    while quads < 100:
        odd = rng.randint(0, 1)
        dims = FixedDims(*(2 * rng.randint(-4, 4 - odd) + odd for _ in range(4)))
        witnesses = set()
        while len(witnesses) < 5:
            witnesses.add(random_witness(dims, P, Q, rng))
        answers = [cohomology_point(w, 1) for w in witnesses]
        assert all(fixed_dims(w) == dims for w in witnesses)
        quads += 1
        if isinstance(answers[0], NotTabulated):
            if not all(isinstance(a, NotTabulated) for a in answers):
                differing.append(dims)
            continue
        for h in LEVELS:
            if len({level_groups(a, h).key() for a in answers}) != 1:
                differing.append((dims, h))
    ok = log.record("witnesses", not differing, "100 quadruples x 5 witnesses")
    assert ok, differing


# -- 9. determined under the non-vanishing hypothesis -----------------------------------------


def test_criterion_09_determined(criterion, grid):
    log = criterion(9, "answers are determined whenever the non-vanishing hypothesis holds")
    hyp = [d for d in grid if _nonvanishing_hypothesis(d)]
    bad = [d for d in hyp if not isinstance(grid[d], Determined)]
    ok = log.record("grid", not bad, f"{len(hyp)} hypothesis points all determined")
    assert ok, bad[:10]


# -- 10. compatibility with the C_p and C_q tables --------------------------------------------


def test_criterion_10_phi_compatible(criterion, grid):
    log = criterion(10, "Phi_r* of each determined answer matches the C_r table")
    mismatches, compared, isos = [], 0, set()
    for d, ans in grid.items():
        if not isinstance(ans, Determined):
            continue
        for r, a_r, side in ((P, d.a_p, "p"), (Q, d.a_q, "q")):
            lew = lewis_table(d.a_e, a_r, p=P, q=Q, side=side)
            restricted = phi_restrict(ans.functor, r)
            for h in (r, 1):
                compared += 1
                if restricted.level[h].key() != level_groups(lew, h).key():
                    mismatches.append((d, side, h))
            key = (ans.expression, side, str(lew))
            if isinstance(lew, Determined) and key not in isos:
                isos.add(key)
                if iso_search(restricted, lew.functor) is None:
                    mismatches.append((d, side, "no isomorphism"))
    ok = log.record("grid", not mismatches, f"{compared} level comparisons, {len(isos)} functor isomorphisms")
    assert ok, mismatches[:10]


# -- 11. freeness of CP^15 ---------------------------------------------------------------------


def test_criterion_11_projective_space(criterion):
    log = criterion(11, "CP(U(15)) is free with 16 generators")
    start = time.perf_counter()
    X = projective_space_complex(15, P, Q)
    even = check_even_type(X)
    reps = [VirtualRep.zero(P, Q)] + [cell.rep for cell in X.cells]
    pairs = [(a, b) for i, a in enumerate(reps) for b in reps[i + 1:]]
    nonvanishing = [(a, b) for a, b in pairs if not verify_vanishing(a, b, N, N)]
    gens = free_decomposition(X)
    expected = [(2 * k, 2 * (k // 3), 2 * (k // 5), 2 * (k // 15)) for k in range(16)]
    elapsed = time.perf_counter() - start
    ok = log.record(
        "CP15",
        even.ok and not nonvanishing and [g.dims.as_tuple() for g in gens] == expected and elapsed < 10,
        f"{len(pairs)} pairs vanish, 16 generators, {elapsed:.2f}s",
    )
    assert ok, (even, nonvanishing, elapsed)


# -- 12. freeness of G(U(6), 2) --------------------------------------------------------------


def test_criterion_12_cell_count(criterion):
    log = criterion(12, "G(U(6),2): cell count, << along the entrywise order, formula dims")
    X = grassmannian_complex(6, 2, P, Q)
    ok = log.record("15 cells", len(X.cells) == comb(6, 2) == 15)
    assert ok


@pytest.mark.xfail(strict=True, reason="the Schubert cell of (1,2) has C_p-fixed dim 2, the formula gives 0")
def test_criterion_12_formula_dims(criterion):
    log = criterion(12, "G(U(6),2): cell count, << along the entrywise order, formula dims")
    X = grassmannian_complex(6, 2, P, Q)
    diffs = [
        c.label for c, a in zip(X.cells, schubert_sequences(6, 2))
        if c.dims.as_tuple() != grassmannian_formula_dims(a, P, Q)
    ]
    assert log.record("formula dims", not diffs, f"{len(diffs)} cells differ"), diffs


@pytest.mark.xfail(strict=True, reason="8 entrywise pairs of Schubert cells fail <<")
def test_criterion_12_ll_entrywise(criterion):
    log = criterion(12, "G(U(6),2): cell count, << along the entrywise order, formula dims")
    bad = [(a, b) for a, b in entrywise_pairs(6, 2) if not ll(schubert_rep(a, P, Q), schubert_rep(b, P, Q))]
    assert log.record("<< entrywise", not bad, f"{len(bad)} pairs fail"), bad


@pytest.mark.xfail(strict=True, reason="free_decomposition rejects G(U(6),2) because << fails")
def test_criterion_12_fifteen_generators(criterion):
    log = criterion(12, "G(U(6),2): cell count, << along the entrywise order, formula dims")
    X = grassmannian_complex(6, 2, P, Q)
    try:
        count = len(free_decomposition(X)) - len(X.base)
    except FreenessViolation as exc:
        log.record("15 generators", False, f"rejected with {len(exc.report.lines(X))} report lines")
        raise
    assert log.record("15 generators", count == 15, f"{count} generators")


# -- 13. negative control ---------------------------------------------------------------------


def test_criterion_13_negative_control(criterion):
    log = criterion(13, "a complex violating << is rejected with a nonzero obstruction")
    W = VirtualRep.build(P, Q, 0, {3: 1})
    V = VirtualRep.build(P, Q, 0, {1: 2})
    X = CellComplex(P, Q, cells=[Cell(1, N, W, "W"), Cell(2, N, V, "V")])
    report = freeness_report(X)
    res = verify_vanishing(W, V, N, N)
    with pytest.raises(FreenessViolation):
        free_decomposition(X)
    ok = log.record(
        "control",
        not ll(W, V)
        and report.even_type.ll_violations == [(0, 1)]
        and res.functor == "K_p<Z/p>"
        and res.group.key() == (0, (3,)),
        f"alpha {res.alpha}, obstruction {res.group} from {res.functor}",
    )
    assert ok, (report.lines(X), res)

import itertools

import pytest

from cpqmackey.catalog import catalog, cp_catalog_names, cpq_catalog_names
from cpqmackey.groups import GroupHom, cokernel_hom
from cpqmackey.mackey import (
    BurnsideSpan,
    MackeyFunctor,
    MackeyHom,
    SubgroupLattice,
    direct_sum,
    functors_equal,
    iso_search,
    phi_restrict,
    representable,
    representable_generator,
    rho_restrict,
    span_action,
    tensor_external,
    validate,
    yoneda_hom,
    zero_functor,
)
from cpqmackey.matrix import IntMatrix

PRIME_PAIRS = [(3, 5), (3, 7), (5, 7)]
ATOMS = ["A_p", "A_p[2]", "R_p", "L_p", "<Z>_p", "F_p"]


def levels(m):
    return {h: str(m.level[h]) for h in m.lattice.levels}


# -- lattice ---------------------------------------------------------------------


def test_lattice_shape():
    lat = SubgroupLattice(3, 5)
    assert lat.levels == (15, 3, 5, 1)
    assert set(lat.edges) == {(1, 3), (1, 5), (3, 15), (5, 15)}
    assert SubgroupLattice(7).edges == ((1, 7),)


@pytest.mark.parametrize("p,q", [(3, 3), (4, 5), (2, 3), (3, 9)])
def test_lattice_rejects_bad_primes(p, q):
    with pytest.raises(ValueError):
        SubgroupLattice(p, q)


# -- validation -------------------------------------------------------------------


def test_burnside_p_valid():
    a = catalog("A_p", 3)
    assert validate(a) == []
    assert a.res[(1, 3)].matrix.to_rows() == [[1, 3]]
    assert a.tr[(1, 3)].matrix.to_rows() == [[0], [1]]


def test_corrupted_transfer_is_caught():
    a = catalog("A_p", 3)
    bad_tr = {(1, 3): GroupHom.from_rows(a.level[1], a.level[3], [[1], [1]])}
    bad = MackeyFunctor(a.lattice, a.level, a.res, bad_tr, a.weyl, "bad")
    problems = validate(bad)
    assert problems
    assert any("res" in v and "tr" in v for v in problems)


def test_zero_functor_valid():
    assert validate(zero_functor(SubgroupLattice(3, 5))) == []
    assert validate(zero_functor(SubgroupLattice(5))) == []


def test_nontrivial_weyl_at_top_is_caught():
    m = catalog("<Z>_p", 3)
    weyl = dict(m.weyl)
    weyl[3] = GroupHom.scalar(m.level[3], -1)
    assert validate(MackeyFunctor(m.lattice, m.level, m.res, m.tr, weyl, "w"))


@pytest.mark.parametrize("p,q", PRIME_PAIRS)
def test_cpq_catalog_valid(p, q):
    for name in cpq_catalog_names():
        m = catalog(name, p, q)
        assert validate(m) == [], name


@pytest.mark.parametrize("prime", [3, 5, 7])
def test_cp_catalog_valid(prime):
    for name in cp_catalog_names("p", (1, 2, 4)):
        assert validate(catalog(name, prime, 11)) == [], name


# -- catalog examples -----------------------------------------------------------


def test_l_p_shape():
    m = catalog("L_p", 3)
    assert levels(m) == {3: "Z", 1: "Z"}
    assert m.res[(1, 3)].matrix.to_rows() == [[3]]
    assert m.tr[(1, 3)].matrix.to_rows() == [[1]]


def test_double_bracket_zpq():
    assert levels(catalog("<<Z/pq>>", 3, 5)) == {15: "Z/15", 3: "0", 5: "0", 1: "0"}


def test_lifted_is_tensor():
    assert functors_equal(catalog("K_p(A_p)", 3, 5), tensor_external(catalog("A_p", 3), catalog("R_q", 3, 5)))


def test_unknown_name():
    with pytest.raises(ValueError):
        catalog("Z_p", 3)


# -- direct sums and tensors -------------------------------------------------


def test_sum_with_zero():
    m = catalog("R_pq", 3, 5)
    assert functors_equal(direct_sum(m, zero_functor(m.lattice)), m)


def test_k_sum_levels():
    s = direct_sum(catalog("K_p<Z>", 3, 5), catalog("K_q<Z>", 3, 5))
    # <Z> (x) R: the top pairs Z with Z, C_p sees <Z> top against R's bottom
    assert levels(s) == {15: "Z^2", 3: "Z", 5: "Z", 1: "0"}


def test_double_bracket_sum():
    s = direct_sum(catalog("<<Z/p>>", 3, 5), catalog("<<Z/q>>", 3, 5))
    f = iso_search(s, catalog("<<Z/pq>>", 3, 5))
    assert f is not None and f.is_isomorphism() and f.is_valid()


def test_sum_lattice_mismatch():
    with pytest.raises(ValueError):
        direct_sum(catalog("A_p", 3), catalog("A", 3, 5))


def test_tensor_examples():
    assert functors_equal(tensor_external(catalog("R_p", 3), catalog("R_q", 3, 5)), catalog("R_pq", 3, 5))
    e = tensor_external(catalog("A_p", 3), catalog("F_q", 3, 5))
    assert functors_equal(e, catalog("E_p(A_p)", 3, 5))
    assert e.level[1].key() == (5, ())
    assert tensor_external(catalog("<Z/p>_p", 3, 5), catalog("<Z/q>_q", 3, 5)).is_zero()


def _q_atom(name):
    return name.replace("_p", "_q")


@pytest.mark.parametrize("left,right", list(itertools.product(["A_p[2]", "R_p", "L_p", "<Z>_p", "F_p"], repeat=2)))
def test_tensor_pairs_valid(left, right):
    m = tensor_external(catalog(left, 3, 5), catalog(_q_atom(right), 3, 5))
    assert validate(m) == []


def test_tensor_lattice_mismatch():
    with pytest.raises(ValueError):
        tensor_external(catalog("A_p", 3), catalog("A_p", 3))


# -- restriction functors -----------------------------------------------------------


@pytest.mark.parametrize("atom", ATOMS + ["<Z/p>_p", "kappa_p"])
@pytest.mark.parametrize("family", ["C_p", "K_p"])
def test_phi_inverts_lifts(atom, family):
    lifted = f"{family}{atom[:-2]}" if atom.startswith("<") else f"{family}({atom})"
    m = catalog(atom, 3, 5)
    back = phi_restrict(catalog(lifted, 3, 5), 3)
    f = iso_search(back, m)
    assert f is not None and f.is_isomorphism()


def _interleave(n, copies):
    """Permutation sending block-major coordinates to copy-major ones."""
    rows = [[0] * (n * copies) for _ in range(n * copies)]
    for c in range(copies):
        for i in range(n):
            rows[c * n + i][i * copies + c] = 1
    return rows


def test_phi_of_e_is_power():
    p, q = 3, 5
    a = catalog("A_p", p)
    phi = phi_restrict(catalog("E_p(A_p)", p, q), p)
    target = direct_sum(*[a] * q)
    assert levels(phi) == levels(target)
    maps = {
        3: GroupHom.from_rows(phi.level[3], target.level[3], _interleave(2, q)),
        1: GroupHom(phi.level[1], target.level[1], IntMatrix.identity(q)),
    }
    f = MackeyHom(phi, target, maps)
    assert f.is_valid() and f.is_isomorphism()


def test_restrictions_of_zero():
    z = zero_functor(SubgroupLattice(3, 5))
    assert phi_restrict(z, 3).is_zero() and rho_restrict(z, 5).is_zero()


@pytest.mark.parametrize("coeff", ["Z", "Z/p", "Z/q"])
def test_rho_double_bracket(coeff):
    assert functors_equal(rho_restrict(catalog(f"<<{coeff}>>", 3, 5), 3), catalog(f"<{coeff}>_p", 3, 5))


def test_rho_l_pq():
    f = iso_search(rho_restrict(catalog("L_pq", 3, 5), 3), catalog("L_p", 3))
    assert f is not None and f.is_isomorphism()


# -- representables ------------------------------------------------------------------


def _orbits_with_stabilisers(n, k, h):
    """Orbits of Z/n on Z/n/k x Z/n/h, found with a union-find."""
    points = [(a, b) for a in range(n // k) for b in range(n // h)]
    parent = {x: x for x in points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in points:
        y = ((a + 1) % (n // k), (b + 1) % (n // h))
        parent[find((a, b))] = find(y)
    classes = {}
    for x in points:
        classes.setdefault(find(x), []).append(x)
    return [n // len(c) for c in classes.values()]


def _ndivisors(m):
    return sum(1 for d in range(1, m + 1) if m % d == 0)


@pytest.mark.parametrize("p,q", [(3, 5), (3, 7)])
def test_representable_ranks_match_orbit_count(p, q):
    lat = SubgroupLattice(p, q)
    for h in lat.levels:
        rep = representable(lat, h)
        assert validate(rep) == []
        for k in lat.levels:
            stabs = _orbits_with_stabilisers(lat.order, k, h)
            # one basis class per orbit and per subgroup of its stabiliser
            assert rep.level[k].key() == (sum(_ndivisors(s) for s in stabs), ())


def test_representable_examples():
    lat = SubgroupLattice(3, 5)
    top = representable(lat, 15)
    assert functors_equal(top, catalog("A", 3, 5)) or iso_search(top, catalog("A", 3, 5)) is not None
    assert top.level[1].key() == (1, ())
    assert representable(lat, 3).level[5].key() == (1, ())
    assert representable(lat, 1).level[1].key() == (15, ())
    assert len(_orbits_with_stabilisers(15, 1, 1)) == 15


# -- spans and Yoneda -------------------------------------------------------------------


def test_identity_span():
    m = catalog("R_pq", 3, 5)
    assert span_action(BurnsideSpan(15, 15, 15), m) == GroupHom.identity(m.level[15])


def test_span_through_cp_on_burnside():
    a = catalog("A", 3, 5)
    got = span_action(BurnsideSpan(15, 15, 3), a)
    assert got == a.tr[(3, 15)] @ a.res[(3, 15)]


def test_one_minus_g_on_free_orbit():
    lat = SubgroupLattice(3, 5)
    rep = representable(lat, 1)
    perm = span_action(BurnsideSpan(1, 1, 1, 1), rep).matrix.to_rows()
    # translation by the generator permutes the 15 orbit classes in a single cycle,
    # so 1 - g is identity minus a 15-cycle
    assert all(sorted(r) == [0] * 14 + [1] for r in perm)
    seen, i = set(), 0
    for _ in range(15):
        seen.add(i)
        i = next(r for r in range(15) if perm[r][i])
    assert len(seen) == 15 and i == 0
    assert all(perm[j][j] == 0 for j in range(15))


def test_yoneda_identity():
    lat = SubgroupLattice(3, 5)
    rep = representable(lat, 15)
    f = yoneda_hom(15, rep, list(representable_generator(lat, 15)))
    assert f.is_valid()
    assert all(f.maps[h] == GroupHom.identity(rep.level[h]) for h in lat.levels)
    # the catalog Burnside functor lists the same basis in another order
    g = yoneda_hom(15, catalog("A", 3, 5), [1, 0, 0, 0])
    assert g.is_valid() and g.is_isomorphism()


@pytest.mark.parametrize("name", ["R_pq", "L_pq", "<<Z/pq>>", "K_p<Z/p>", "E_q(R_q)", "A"])
def test_yoneda_always_valid(name):
    m = catalog(name, 3, 5)
    for h in m.lattice.levels:
        for x in itertools.islice(itertools.product(range(-1, 2), repeat=m.level[h].ngens), 20):
            assert yoneda_hom(h, m, list(x)).is_valid()


def test_yoneda_onto_bracket_z():
    f = yoneda_hom(3, catalog("<Z>_p", 3), [1], rep=catalog("A_p", 3))
    assert f.is_valid() and f.is_surjective()


# -- iso search -------------------------------------------------------------------------


def test_iso_search_identity():
    m = catalog("K_q(L_q)", 3, 5)
    f = iso_search(m, m)
    assert f is not None and f.is_isomorphism()


def test_c_and_k_of_z_mod_p():
    f = iso_search(catalog("C_p<Z/p>", 3, 5), catalog("K_p<Z/p>", 3, 5))
    assert f is not None and f.is_valid() and f.is_isomorphism()


def test_l_and_r_are_distinguished():
    l, r = catalog("L_p", 3), catalog("R_p", 3)
    assert levels(l) == levels(r)
    assert iso_search(l, r) is None
    # the cokernel of the transfer is an invariant: 0 for L_p, Z/p for R_p
    assert cokernel_hom(l.tr[(1, 3)])[0].is_zero()
    assert cokernel_hom(r.tr[(1, 3)])[0].key() == (0, (3,))

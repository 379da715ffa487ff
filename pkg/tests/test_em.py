import itertools

import pytest

from kansim.abelian import FinAbGroup, parse_group
from kansim.constructors import (
    BudgetExceeded,
    boundary_complex,
    completion_adjunction_check,
    point,
    quotient,
    standard_simplex,
    truncate,
)
from kansim.core import subcomplex_closure, validate, validate_map
from kansim.em import (
    b_spec_cone,
    b_spec_nullhomotopy,
    compare_sim_spec,
    em_skeleton,
    em_space,
    h_spec,
    is_nullhomotopic,
    mu,
    pi_n_matches_group,
    z_spec,
)
from kansim.kan import homotopy_group, kan_check, kan_skeleton_check, minimal_check


def sphere2(cap=3):
    d2 = standard_simplex(2, cap)
    mask = subcomplex_closure(
        d2, [d2.ref_of(1, lab) for lab in ["0.1", "0.2", "1.2"]]
    )
    return quotient(d2, mask)[0]


class TestEmSkeleton:
    def test_z2_level2_by_enumeration(self):
        g = parse_group("Z/2")
        s = em_skeleton(g, 1)
        # oracle: solutions of a0 - a1 + a2 = 0 over Z/2
        sols = [
            (a0, a1, a2)
            for a0, a1, a2 in itertools.product(range(2), repeat=3)
            if (a0 - a1 + a2) % 2 == 0
        ]
        assert s.level_size(2) == len(sols) == 4

    def test_z3_level2_count(self):
        s = em_skeleton(parse_group("Z/3"), 1)
        assert s.level_size(2) == 9

    @pytest.mark.parametrize("spec,n", [("Z/2", 1), ("Z/3", 1), ("Z/4", 1), ("Z/2+Z/2", 1), ("Z/2", 2)])
    def test_skeleton_checks(self, spec, n):
        g = parse_group(spec)
        s = em_skeleton(g, n)
        assert validate(s).ok
        assert kan_skeleton_check(s).passed
        assert minimal_check(s).passed
        assert s.level_size(n + 1) == g.order() ** (n + 1)

    def test_unique_horn_completion_at_level_n(self):
        from kansim.kan import enumerate_horns, find_completions, SimplexHorn
        from kansim.core import SimplexRef

        s = em_skeleton(parse_group("Z/3"), 1)
        for gap in range(3):
            for entries in enumerate_horns(s, 1, gap):
                horn = SimplexHorn(1, gap, tuple(
                    None if v is None else SimplexRef(1, v) for v in entries
                ))
                assert len(find_completions(s, horn)) == 1

    def test_infinite_group_rejected(self):
        with pytest.raises(ValueError):
            em_skeleton(parse_group("Z"), 1)


class TestEmSpace:
    def test_z2_dim2_level_sizes(self, em_z2_dim2):
        assert [em_z2_dim2.level_size(k) for k in range(5)] == [1, 1, 2, 8, 64]

    def test_budget_precheck_uses_growth_bound(self):
        with pytest.raises(BudgetExceeded) as exc:
            em_space(parse_group("Z/2"), 1, 4, level_budget=1000)
        assert exc.value.dimension == 4

    def test_pi_profile(self, em_z2, em_z3, em_z2_dim2):
        for em in (em_z2, em_z3):
            assert pi_n_matches_group(em)["table_matches"]
            assert homotopy_group(em, 2).is_trivial
        assert pi_n_matches_group(em_z2_dim2)["table_matches"]
        assert homotopy_group(em_z2_dim2, 1).is_trivial
        assert homotopy_group(em_z2_dim2, 3).is_trivial

    def test_kan_and_minimal(self, em_z2_dim2):
        assert kan_check(em_z2_dim2, 3).passed
        assert minimal_check(em_z2_dim2).passed

    def test_restriction_is_skeleton(self, em_z2):
        s = em_skeleton(parse_group("Z/2"), 1)
        assert truncate(em_z2, 2).levels == s.levels

    def test_every_cycle_fills_uniquely_at_completed_levels(self, em_z2):
        from kansim.constructors import enumerate_cycles

        for k in (3,):
            cycles = enumerate_cycles(em_z2, k - 1)
            bindex = em_z2.boundary_index(k)
            for c in cycles:
                assert len(bindex.get(c, ())) == 1
            assert len(cycles) == em_z2.level_size(k)

    def test_serialization_keeps_metadata(self, em_z2, tmp_path):
        from kansim.core import dumps, load, save

        path = tmp_path / "em.json"
        save(em_z2, path)
        back = load(path)
        assert back.em_meta == ("Z/2", 1)
        assert dumps(back) == dumps(em_z2)

    def test_no_homotopy_relation_warnings(self, em_z2, em_z2_dim2):
        assert homotopy_group(em_z2, 1).warnings == ()
        assert homotopy_group(em_z2_dim2, 2).warnings == ()


class TestMu:
    def test_identity_at_level_n(self, em_z2):
        g = parse_group("Z/2")
        m = mu(g, 1, 3, space=em_z2)
        prod = m.source
        pair_of = {p: i for i, p in enumerate(prod.product_pairs[1])}
        e = em_z2.ref_of(1, "(0)").index
        a = em_z2.ref_of(1, "(1)").index
        assert m.table[1][pair_of[(a, e)]] == a
        assert m.table[1][pair_of[(e, a)]] == a

    def test_entrywise_preserves_level2(self, em_z2):
        g = parse_group("Z/2")
        m = mu(g, 1, 3, space=em_z2)
        prod = m.source
        for p, (x, y) in enumerate(prod.product_pairs[2]):
            image = m.table[2][p]
            for i in range(3):
                xi = em_z2.faces[2][i][x]
                yi = em_z2.faces[2][i][y]
                want = m.table[1][
                    {q: j for j, q in enumerate(prod.product_pairs[1])}[(xi, yi)]
                ]
                assert em_z2.faces[2][i][image] == want

    def test_levelwise_group_structure(self, em_z2):
        g = parse_group("Z/2")
        m = mu(g, 1, 3, space=em_z2)
        prod = m.source
        for k in range(4):
            pair_of = {p: i for i, p in enumerate(prod.product_pairs[k])}
            e = em_z2.basepoint_ref(k).index
            size = em_z2.level_size(k)
            op = lambda a, b: m.table[k][pair_of[(a, b)]]
            for a in range(size):
                assert op(a, e) == a and op(e, a) == a
            for a in range(size):
                for b in range(size):
                    assert op(a, b) == op(b, a)
                    for c in range(size):
                        assert op(op(a, b), c) == op(a, op(b, c))

    def test_validates(self, em_z3):
        m = mu(parse_group("Z/3"), 1, 3, space=em_z3)
        assert validate_map(m).ok


class TestZSpec:
    def test_boundary2_count(self):
        b2 = boundary_complex(2, 2)
        fam = z_spec(b2, None, parse_group("Z/2"), 1)
        assert len(fam) == 8

    def test_point_only_constant(self):
        fam = z_spec(point(2), None, parse_group("Z/2"), 1)
        assert len(fam) == 1

    def test_delta2_relation(self):
        d2 = standard_simplex(2, 2)
        fam = z_spec(d2, None, parse_group("Z/2"), 1)
        assert len(fam) == 4

    def test_group_structure_matches_pointwise(self):
        b2 = boundary_complex(2, 2)
        g = parse_group("Z/2")
        fam = z_spec(b2, None, g, 1)
        zero = fam.zero()
        for a in fam:
            assert fam.add(a, zero) is a
            for b in fam:
                assert fam.add(a, b) is fam.add(b, a)

    def test_every_map_is_a_valid_pair_map(self):
        d2 = standard_simplex(2, 2)
        sub = subcomplex_closure(d2, [d2.ref_of(1, "0.1")])
        fam = z_spec(d2, sub, parse_group("Z/2"), 1)
        for c in fam:
            assert validate_map(c.map).ok
            for d in range(3):
                for x in sub.members[d]:
                    assert c.map.table[d][x] == c.space.basepoint_ref(d).index


class TestNullhomotopy:
    def test_zero_cocycle(self):
        b2 = boundary_complex(2, 2)
        fam = z_spec(b2, None, parse_group("Z/2"), 1)
        w = is_nullhomotopic(fam.zero())
        assert w is not None
        assert all(b.is_zero() for b in w.beta)

    def test_even_weight_cocycles_are_nullhomotopic(self):
        # a coboundary d*beta hits beta(b)-beta(a) on each edge, so it marks
        # an even number of triangle edges; the even-weight assignments are
        # exactly the nullhomotopic ones
        b2 = boundary_complex(2, 2)
        g = parse_group("Z/2")
        fam = z_spec(b2, None, g, 1)
        nondeg = set(b2.nondegenerate_indices(1))
        for c in fam:
            weight = sum(1 for x in nondeg if not c.assignment[x].is_zero())
            witness = is_nullhomotopic(c)
            assert (witness is not None) == (weight % 2 == 0)

    def test_all_edges_cocycle_is_not(self):
        b2 = boundary_complex(2, 2)
        g = parse_group("Z/2")
        fam = z_spec(b2, None, g, 1)
        nondeg = set(b2.nondegenerate_indices(1))
        target = next(
            c for c in fam
            if all(not c.assignment[x].is_zero() for x in nondeg)
        )
        assert is_nullhomotopic(target) is None

    def test_witness_counts(self):
        b2 = boundary_complex(2, 2)
        g = parse_group("Z/2")
        fam = z_spec(b2, None, g, 1)
        assert len(b_spec_nullhomotopy(fam)) == 4
        assert len(b_spec_cone(b2, None, g, 1)) == 4


class TestSimSpec:
    CASES = [
        ("bd2-Z2", lambda: boundary_complex(2, 2), "Z/2", 1),
        ("bd2-Z3", lambda: boundary_complex(2, 2), "Z/3", 1),
        ("d2-Z2", lambda: standard_simplex(2, 2), "Z/2", 1),
        ("sphere2-Z2", sphere2, "Z/2", 2),
        ("bd3-Z2", lambda: boundary_complex(3, 3), "Z/2", 2),
    ]

    @pytest.mark.parametrize("name,builder,spec,n", CASES, ids=[c[0] for c in CASES])
    def test_theorem_cases(self, name, builder, spec, n):
        report = compare_sim_spec(builder(), None, parse_group(spec), n)
        assert report.z_spec_count == report.z_sim_count
        assert report.sets_match
        assert report.addition_matches
        assert report.b_sets_match
        assert report.isomorphic
        assert report.passed

    def test_h_spec_values(self):
        assert h_spec(boundary_complex(2, 2), None, parse_group("Z/2"), 1)["group"] == parse_group("Z/2")
        assert h_spec(standard_simplex(2, 2), None, parse_group("Z/2"), 1)["group"].is_trivial
        assert h_spec(sphere2(), None, parse_group("Z/2"), 2)["group"] == parse_group("Z/2")

    def test_pullback_naturality(self):
        # enumerated maps f: Delta^1 -> boundary Delta^2 pull cocycles back
        # additively: f*(a + b) = f*a + f*b on level-n assignments
        from kansim.constructors import enumerate_maps

        b2 = boundary_complex(2, 2)
        d1 = standard_simplex(1, 2)
        g = parse_group("Z/2")
        fam = z_spec(b2, None, g, 1)
        maps = enumerate_maps(d1, b2)
        assert maps
        for f in maps[:6]:
            for a in fam:
                for b in fam:
                    s = fam.add(a, b)
                    pull = lambda c: tuple(
                        c.assignment[f.table[1][x]].coords
                        for x in range(d1.level_size(1))
                    )
                    lhs = pull(s)
                    rhs = tuple(
                        g.add(
                            g.element(pull(a)[x]), g.element(pull(b)[x])
                        ).coords
                        for x in range(d1.level_size(1))
                    )
                    assert lhs == rhs


class TestAdjunction:
    def test_delta1_z2(self):
        s = em_skeleton(parse_group("Z/2"), 1)
        report = completion_adjunction_check(standard_simplex(1, 3), s)
        assert report["bijection"]
        assert report["full_map_count"] == report["skeleton_map_count"] == 2

    def test_point_z3(self):
        s = em_skeleton(parse_group("Z/3"), 1)
        report = completion_adjunction_check(point(3), s)
        assert report["bijection"]
        assert report["full_map_count"] == 1

    def test_non_cocycle_assignment_absent_from_both_sides(self):
        from kansim.constructors import enumerate_maps

        d2 = standard_simplex(2, 2)
        s = em_skeleton(parse_group("Z/2"), 1)
        shat = em_space(parse_group("Z/2"), 1, 2)
        skel_maps = enumerate_maps(truncate(d2, 2), truncate(shat, 2))
        full_maps = enumerate_maps(d2, shat)
        # an assignment violating the alternating-sum relation on the top
        # triangle extends to no skeleton map and no full map
        one = shat.ref_of(1, "(1)").index
        zero = shat.ref_of(1, "(0)").index
        bad_profile = {"0.1": one, "0.2": zero, "1.2": zero}
        for maps in (skel_maps, full_maps):
            for f in maps:
                profile = {
                    lab: f.table[1][d2.ref_of(1, lab).index]
                    for lab in bad_profile
                }
                assert profile != bad_profile

import itertools

import pytest

from kansim.constructors import (
    BudgetExceeded,
    boundary_complex,
    complete,
    completion_adjunction_check,
    cone,
    coproduct,
    enumerate_cycles,
    enumerate_maps,
    horn_complex,
    loop_space,
    path_space,
    point,
    product,
    product_projections,
    quotient,
    standard_simplex,
    truncate,
)
from kansim.core import (
    SimplexRef,
    full_mask,
    subcomplex_closure,
    validate,
    validate_map,
)


def count_nondecreasing(n, length):
    return sum(1 for _ in itertools.combinations_with_replacement(range(n + 1), length))


class TestStandardFamilies:
    def test_delta1_level1(self):
        d1 = standard_simplex(1, 1)
        assert sorted(d1.levels[1]) == ["0.0", "0.1", "1.1"]
        assert d1.level_size(1) == 3

    def test_delta0_is_point(self):
        d0 = standard_simplex(0, 4)
        assert all(d0.level_size(k) == 1 for k in range(5))

    def test_face_omits_entry(self):
        d2 = standard_simplex(2, 2)
        top = d2.ref_of(2, "0.1.2")
        assert d2.label(d2.face(top, 1)) == "0.2"

    def test_level_counts_match_enumeration(self):
        d3 = standard_simplex(3, 3)
        for k in range(4):
            assert d3.level_size(k) == count_nondecreasing(3, k + 1)

    def test_boundary2_profile(self):
        b2 = boundary_complex(2, 2)
        nondeg1 = b2.nondegenerate_indices(1)
        assert len(nondeg1) == 3
        assert b2.nondegenerate_indices(2) == []

    def test_horn21_drops_long_edge(self):
        h = horn_complex(2, 1, 2)
        labels1 = [h.levels[1][i] for i in h.nondegenerate_indices(1)]
        assert sorted(labels1) == ["0.1", "1.2"]
        assert "0.2" not in h.levels[1]

    def test_boundary1_is_two_points(self):
        b1 = boundary_complex(1, 1)
        assert b1.level_size(0) == 2
        assert len(b1.nondegenerate_indices(1)) == 0

    def test_all_constructed_validate(self):
        for k in [standard_simplex(2, 3), boundary_complex(3, 3), horn_complex(3, 2, 3)]:
            assert validate(k).ok


class TestProductsAndCoproducts:
    def test_point_unit(self):
        d2 = standard_simplex(2, 2)
        p = product(point(2), d2)
        for k in range(3):
            assert p.level_size(k) == d2.level_size(k)
        assert validate(p).ok

    def test_square_level1_count(self):
        p = product(standard_simplex(1, 1), standard_simplex(1, 1))
        assert p.level_size(1) == 9

    def test_coproduct_sizes(self):
        c = coproduct(point(1), point(1))
        assert c.level_size(0) == 2
        assert validate(c).ok

    def test_sizes_exact(self):
        a, b = boundary_complex(2, 2), standard_simplex(1, 2)
        p, c = product(a, b), coproduct(a, b)
        for k in range(3):
            assert p.level_size(k) == a.level_size(k) * b.level_size(k)
            assert c.level_size(k) == a.level_size(k) + b.level_size(k)

    def test_projections_validate(self):
        p = product(standard_simplex(1, 2), boundary_complex(2, 2))
        p1, p2 = product_projections(p)
        assert validate_map(p1).ok and validate_map(p2).ok

    def test_cap_mismatch(self):
        with pytest.raises(ValueError):
            product(point(1), point(2))


class TestQuotientAndCone:
    def test_full_mask_gives_point(self):
        d2 = standard_simplex(2, 2)
        q, proj = quotient(d2, full_mask(d2))
        assert all(q.level_size(k) == 1 for k in range(3))
        assert validate(q).ok and validate_map(proj).ok

    def test_circle_model(self):
        d1 = standard_simplex(1, 1)
        boundary = subcomplex_closure(d1, [d1.ref_of(0, "0"), d1.ref_of(0, "1")])
        q, proj = quotient(d1, boundary)
        assert q.level_size(0) == 1
        assert len(q.nondegenerate_indices(1)) == 1
        assert validate(q).ok and validate_map(proj).ok

    def test_collapsed_labels(self):
        d1 = standard_simplex(1, 1)
        q, _ = quotient(d1, full_mask(d1))
        assert q.levels[0] == ("⋆0",)
        assert q.levels[1] == ("⋆1",)

    def test_empty_mask_level_rejected(self):
        from kansim.core import SubcomplexMask

        d1 = standard_simplex(1, 1)
        with pytest.raises(ValueError):
            quotient(d1, SubcomplexMask(d1, [set(), set()]))

    def test_cone_of_point(self):
        c, incl = cone(point(2))
        assert c.level_size(0) == 2
        assert validate(c).ok and validate_map(incl).ok

    def test_cone_collapses_far_end(self):
        k = boundary_complex(2, 2)
        c, incl = cone(k)
        seg = standard_simplex(1, 2)
        proj, pairs = c.cone_projection, c.cone_pair_index
        # everything over the vertex-1 end maps to the basepoint simplex
        for d in range(3):
            ones = seg.ref_of(d, ".".join(["1"] * (d + 1))).index
            star = c.basepoint_ref(d)
            for x in range(k.level_size(d)):
                assert proj.table[d][pairs[d][(x, ones)]] == star.index
        assert validate(c).ok

    def test_cone_validates_for_spheres(self):
        for k in [boundary_complex(2, 2), boundary_complex(3, 3)]:
            c, incl = cone(k)
            assert validate(c).ok
            assert validate_map(incl).ok


class TestPathAndLoops:
    def test_path_space_of_point(self):
        p, end = path_space(point(3))
        assert p.cap == 2
        assert all(p.level_size(k) == 1 for k in range(3))
        assert validate(p).ok and validate_map(end).ok

    def test_loop_level0_unwinds(self):
        d1 = standard_simplex(1, 2)
        # base at vertex 0: loops at level 0 are edges with both ends at 0
        loops = loop_space(d1)
        assert sorted(loops.levels[0]) == ["0.0"]
        assert validate(loops).ok


class TestTruncateAndComplete:
    def test_truncate_delta3(self):
        s = truncate(standard_simplex(3, 3), 2)
        assert [s.level_size(k) for k in range(3)] == [4, 10, 20]
        assert s.cap == 2

    def test_truncate_identity(self):
        d2 = standard_simplex(2, 2)
        s = truncate(d2, 2)
        assert s.levels == d2.levels

    def test_truncate_point(self):
        s = truncate(point(3), 0)
        assert s.level_size(0) == 1

    def test_complete_point_skeleton(self):
        s = truncate(point(3), 1)
        done = complete(s, 5)
        assert all(done.level_size(k) == 1 for k in range(6))
        assert validate(done).ok

    def test_cycle_enumeration_matches_brute_force(self):
        k = boundary_complex(2, 2)
        fast = enumerate_cycles(k, 1)
        slow = enumerate_cycles(k, 1, brute_force=True)
        assert sorted(fast) == sorted(slow)

    def test_budget_enforced(self):
        s = truncate(boundary_complex(2, 2), 2)
        with pytest.raises(BudgetExceeded) as exc:
            complete(s, 3, level_budget=1)
        assert exc.value.dimension == 3

    def test_completion_validates(self):
        s = truncate(boundary_complex(2, 2), 2)
        done = complete(s, 3)
        assert validate(done).ok
        assert done.levels[: 3] == s.levels


class TestMapEnumeration:
    def test_maps_delta1_to_delta1(self):
        d1 = standard_simplex(1, 1)
        maps = enumerate_maps(d1, d1)
        # a map is a monotone endpoint assignment: (0,0),(0,1),(1,1) ends
        # plus the flip is not simplicial; enumerate and cross-check by brute force
        brute = 0
        for t0 in itertools.product(range(2), repeat=2):
            for t1 in itertools.product(range(3), repeat=3):
                from kansim.core import SimplicialMap, validate_map

                f = SimplicialMap(d1, d1, [t0, t1])
                if validate_map(f).ok:
                    brute += 1
        assert len(maps) == brute

    def test_unique_map_to_point(self):
        d2 = standard_simplex(2, 2)
        maps = enumerate_maps(d2, point(2))
        assert len(maps) == 1

    def test_adjunction_point_case(self):
        # upper levels of the completion force nothing new over a point domain
        s = truncate(standard_simplex(1, 2), 1)
        report = completion_adjunction_check(point(2), s)
        assert report["bijection"]
        assert report["full_map_count"] == report["skeleton_map_count"] == 2

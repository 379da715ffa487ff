import itertools

import pytest

from kansim.abelian import FinAbGroup, parse_group
from kansim.constructors import (
    boundary_complex,
    cone,
    coproduct,
    point,
    quotient,
    standard_simplex,
)
from kansim.core import basepoint_mask, full_mask, subcomplex_closure
from kansim.homology import (
    BrokenDifferentialError,
    abelianization,
    additivity_check,
    chain_complex,
    cohomology,
    cone_acyclicity_check,
    connecting_map,
    homology,
    hurewicz_check,
    hurewicz_map,
)

Z = FinAbGroup(1)


def boundary_mask(n, cap):
    d = standard_simplex(n, cap)
    edges = [
        d.ref_of(n - 1, ".".join(str(v) for v in tup))
        for tup in itertools.combinations(range(n + 1), n)
    ]
    return d, subcomplex_closure(d, edges)


class TestChainComplex:
    def test_delta1_unnormalized_differential(self):
        d1 = standard_simplex(1, 1)
        data = chain_complex(d1, None, normalized=False)
        # basis order is level order: (0,0), (0,1), (1,1) against (0), (1)
        col = data.bases[1].index(d1.ref_of(1, "0.1").index)
        vals = [data.matrices[1].at(r, col) for r in range(2)]
        # d(0.1) = (1) - (0)
        zero_pos = data.bases[0].index(d1.ref_of(0, "0").index)
        one_pos = data.bases[0].index(d1.ref_of(0, "1").index)
        assert vals[one_pos] == 1 and vals[zero_pos] == -1

    def test_degenerate_edge_has_zero_boundary(self):
        d1 = standard_simplex(1, 1)
        data = chain_complex(d1, None, normalized=False)
        col = data.bases[1].index(d1.ref_of(1, "0.0").index)
        assert all(data.matrices[1].at(r, col) == 0 for r in range(2))

    def test_relative_differential_vanishes(self):
        d1 = standard_simplex(1, 1)
        ends = subcomplex_closure(d1, [d1.ref_of(0, "0"), d1.ref_of(0, "1")])
        data = chain_complex(d1, ends)
        assert data.matrices[1].is_zero()

    def test_dd_zero_guard(self):
        from kansim.core import TruncatedSimplicialSet

        d2 = standard_simplex(2, 2)
        faces = [list(list(t) for t in per) for per in d2.faces]
        top = d2.ref_of(2, "0.1.2")
        faces[2][0][top.index] = d2.ref_of(1, "0.1").index
        bad = TruncatedSimplicialSet("bad", 2, d2.levels, faces, d2.degens)
        with pytest.raises(BrokenDifferentialError):
            chain_complex(bad, None, normalized=False)


class TestHomology:
    def test_point_axiom(self):
        p = point(4)
        assert homology(p, None, Z, 0).group == Z
        for n in range(1, 4):
            assert homology(p, None, Z, n).group.is_trivial

    def test_circle(self):
        b2 = boundary_complex(2, 2)
        assert homology(b2, None, Z, 0).group == Z
        assert homology(b2, None, Z, 1).group == Z

    def test_sphere_normalized_and_unnormalized(self):
        b3 = boundary_complex(3, 3)
        for normalized in (True, False):
            hs = [homology(b3, None, Z, n, normalized).group for n in range(3)]
            assert hs[0] == Z
            assert hs[1].is_trivial
            assert hs[2] == Z

    @pytest.mark.parametrize("spec", ["Z/2", "Z/3", "Z/6"])
    def test_sphere_cyclic_coefficients(self, spec):
        a = parse_group(spec)
        b2 = boundary_complex(2, 2)
        assert homology(b2, None, a, 0).group == a
        assert homology(b2, None, a, 1).group == a

    def test_normalized_agrees_with_unnormalized_everywhere(self):
        d2 = standard_simplex(2, 3)
        sphere, _ = quotient(d2, subcomplex_closure(
            d2, [d2.ref_of(1, lab) for lab in ["0.1", "0.2", "1.2"]]
        ))
        for k in [boundary_complex(2, 2), sphere, point(2)]:
            for n in range(k.cap):
                a = homology(k, None, Z, n, normalized=True).group
                b = homology(k, None, Z, n, normalized=False).group
                assert a == b

    def test_sphere2_model(self):
        d2 = standard_simplex(2, 3)
        sphere, _ = quotient(d2, subcomplex_closure(
            d2, [d2.ref_of(1, lab) for lab in ["0.1", "0.2", "1.2"]]
        ))
        assert homology(sphere, None, Z, 0).group == Z
        assert homology(sphere, None, Z, 1).group.is_trivial
        assert homology(sphere, None, Z, 2).group == Z

    def test_generators_are_cycles(self):
        b2 = boundary_complex(2, 2)
        h1 = homology(b2, None, Z, 1)
        data = chain_complex(b2)
        pos = data.basis_position(1)
        for gen in h1.generators:
            vec = [0] * len(data.bases[1])
            for ref, el in gen.coefficients:
                vec[pos[ref.index]] = el.coords[0]
            assert all(v == 0 for v in data.matrices[1].mul_vector(vec))

    def test_top_degree_flagged(self):
        b2 = boundary_complex(2, 2)
        assert homology(b2, None, Z, 2).truncated


class TestCohomology:
    def test_circle_cohomology(self):
        b2 = boundary_complex(2, 2)
        assert cohomology(b2, None, Z, 1).group == Z

    def test_sphere2_mod2(self):
        d2 = standard_simplex(2, 3)
        sphere, _ = quotient(d2, subcomplex_closure(
            d2, [d2.ref_of(1, lab) for lab in ["0.1", "0.2", "1.2"]]
        ))
        a = parse_group("Z/2")
        assert cohomology(sphere, None, a, 2).group == a

    def test_field_duality(self):
        b3 = boundary_complex(3, 3)
        for spec in ["Z/2", "Z/3"]:
            a = parse_group(spec)
            for n in range(3):
                hn = homology(b3, None, a, n).group
                cn = cohomology(b3, None, a, n).group
                assert hn == cn


class TestConnectingAndAxioms:
    def test_interval_boundary_pair(self):
        d1 = standard_simplex(1, 1)
        ends = subcomplex_closure(d1, [d1.ref_of(0, "0"), d1.ref_of(0, "1")])
        cm = connecting_map(d1, ends, Z, 1)
        assert cm.well_defined
        # one relative generator, mapping to a generator of the kernel part
        assert len(cm.images) == 1
        image = cm.images[0][1]
        assert any(not el.is_zero() for el in image)

    def test_l_equals_k_zero_map(self):
        d1 = standard_simplex(1, 1)
        cm = connecting_map(d1, full_mask(d1), Z, 1)
        assert cm.images == ()

    def test_les_of_disk_pair(self):
        # H_n(D^2, S^1) sits between sphere groups: the connecting map
        # H_2(D,S) -> H_1(S) must be injective with full image
        d2 = standard_simplex(2, 2)
        sub = subcomplex_closure(
            d2, [d2.ref_of(1, lab) for lab in ["0.1", "0.2", "1.2"]]
        )
        rel2 = homology(d2, sub, Z, 2).group
        assert rel2 == Z
        cm = connecting_map(d2, sub, Z, 2)
        assert cm.well_defined
        image = cm.images[0][1]
        assert any(el.coords[0] in (1, -1) for el in image)

    def test_additivity(self):
        b2 = boundary_complex(2, 2)
        report = additivity_check([b2, b2])
        assert report["passed"]
        h1 = homology(coproduct(b2, b2), None, Z, 1).group
        assert h1 == FinAbGroup(2)

    def test_additivity_singleton(self):
        assert additivity_check([point(2)])["passed"]

    def test_cone_acyclic(self):
        for k in [boundary_complex(2, 2), boundary_complex(3, 3)]:
            report = cone_acyclicity_check(k)
            assert report["passed"]


def s3_table():
    """Symmetric group on 3 letters as a multiplication table fixture."""
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):
        return tuple(p[q[i]] for i in range(3))

    mult = [[index[compose(p, q)] for q in perms] for p in perms]
    return mult, index[(0, 1, 2)]


class TestAbelianization:
    def test_s3(self):
        from kansim.kan import HomotopyGroupTable

        mult, e = s3_table()
        inverse = tuple(
            next(b for b in range(6) if mult[a][b] == e) for a in range(6)
        )
        table = HomotopyGroupTable(
            point(2), 1, tuple((i,) for i in range(6)), e,
            tuple(tuple(r) for r in mult), inverse, False,
        )
        group, projection = abelianization(table)
        assert group == parse_group("Z/2")
        # the projection is onto and constant on cosets of A_3
        assert len({p for p in projection}) == 2

    def test_abelian_input_unchanged(self, em_z3):
        from kansim.kan import homotopy_group

        table = homotopy_group(em_z3, 1)
        group, projection = abelianization(table)
        assert group == parse_group("Z/3")
        assert len({p for p in projection}) == 3

    def test_trivial(self):
        from kansim.kan import homotopy_group

        table = homotopy_group(point(2), 1)
        group, _ = abelianization(table)
        assert group.is_trivial


class TestHurewicz:
    def test_em_z2(self, em_z2):
        report = hurewicz_check(em_z2, 1)
        assert report.passed
        assert report.iso_expected
        assert report.h_group == "Z/2"

    def test_em_z3_homomorphism_law(self, em_z3):
        table, part, images = hurewicz_map(em_z3, 1)
        for a in range(len(table.classes)):
            for b in range(len(table.classes)):
                c = table.mult[a][b]
                assert images[c] == images[a].group.add(images[a], images[b])

    def test_basepoint_class_maps_to_zero(self, em_z2):
        for normalized in (True, False):
            table, part, images = hurewicz_map(em_z2, 1, normalized=normalized)
            assert images[table.identity_class].is_zero()

    def test_degradation_reported(self):
        b2 = boundary_complex(2, 2)
        report = hurewicz_check(b2, 1)
        assert not report.iso_expected
        assert report.degradations

    def test_dim2(self, em_z2_dim2):
        report = hurewicz_check(em_z2_dim2, 2)
        assert report.passed
        assert report.h_group == "Z/2"

"""Instance families: determinism, structure, and measured ground truth.

The wall family's packing/cover gap is asserted from oracle measurements,
not from its layout, so the construction can change shape as long as the
gap survives.
"""

import pytest

from epkit.errors import InputError
from epkit.generators import (
    escher_wall,
    generate,
    odd_cycles,
    random_instance,
    subdivided_clique,
    zm_grid,
)
from epkit.graph import dump_json, graph_to_json_dict, walk_vertices
from epkit.groups import Cyclic, Product, Symmetric
from epkit.labeling import is_clean
from epkit.oracle import enumerate_non_null_cycles, max_packing, min_gfvs
from epkit.packing import verify_expansion


class TestOddCycles:
    def test_counts(self):
        g = odd_cycles(3)
        assert g.n == 9
        assert len(g.arcs) == 9

    def test_ground_truth(self):
        g = odd_cycles(3)
        assert len(min_gfvs(g)) == 3
        assert len(max_packing(g, 1)) == 3

    def test_length(self):
        g = odd_cycles(2, length=5)
        assert g.n == 10
        assert len(enumerate_non_null_cycles(g)) == 2

    def test_validation(self):
        with pytest.raises(InputError):
            odd_cycles(0)
        with pytest.raises(InputError):
            odd_cycles(1, length=1)


class TestEscherWall:
    def test_shape(self):
        g = escher_wall(2)
        assert g.n == 10
        assert len(g.arcs) == 8 + 5 + 5

    def test_measured_gap(self):
        # oracle-measured on this construction and frozen
        g = escher_wall(2)
        assert len(enumerate_non_null_cycles(g)) == 93
        assert len(max_packing(g, 1)) == 1
        assert len(max_packing(g, 2)) == 3
        assert len(min_gfvs(g)) == 2

    def test_middle_column_meets_everything(self):
        g = escher_wall(2)
        middle = {2, 7}
        for cycle in enumerate_non_null_cycles(g):
            assert middle & set(walk_vertices(g, cycle))

    def test_not_clean(self):
        assert not is_clean(escher_wall(2))
        assert not is_clean(escher_wall(3))

    def test_validation(self):
        with pytest.raises(InputError):
            escher_wall(1)


class TestZmGrid:
    def test_single_square(self):
        g = zm_grid(2, 2, 2)
        assert not is_clean(g)
        assert len(enumerate_non_null_cycles(g)) == 1

    def test_trivial_group_clean(self):
        assert is_clean(zm_grid(1, 3, 4))

    def test_z3_gap(self):
        g = zm_grid(3, 2, 4)
        # every square crosses one generator arc; all cycles non-null
        cycles = enumerate_non_null_cycles(g)
        assert cycles
        assert all(
            set(walk_vertices(g, c)) & {0, 1, 2, 3} for c in cycles
        )

    def test_validation(self):
        with pytest.raises(InputError):
            zm_grid(0, 2, 2)
        with pytest.raises(InputError):
            zm_grid(2, 0, 2)


class TestRandomInstance:
    def test_deterministic(self):
        a = random_instance(8, 14, Cyclic(3), seed=5)
        b = random_instance(8, 14, Cyclic(3), seed=5)
        assert dump_json(graph_to_json_dict(a)) == dump_json(graph_to_json_dict(b))

    def test_seeds_differ(self):
        a = random_instance(8, 14, Cyclic(3), seed=5)
        b = random_instance(8, 14, Cyclic(3), seed=6)
        assert dump_json(graph_to_json_dict(a)) != dump_json(graph_to_json_dict(b))

    def test_no_loops(self):
        g = random_instance(5, 40, Symmetric(3), seed=1)
        assert all(not a.is_loop for a in g.arcs)
        assert len(g.arcs) == 40

    def test_product_group(self):
        spec = Product((Cyclic(2), Symmetric(3)))
        g = random_instance(6, 10, spec, seed=2)
        assert g.group == spec

    def test_validation(self):
        with pytest.raises(InputError):
            random_instance(1, 3, Cyclic(2), seed=0)
        with pytest.raises(InputError):
            random_instance(4, -1, Cyclic(2), seed=0)


class TestSubdividedClique:
    @pytest.mark.parametrize("ell", [2, 3, 4, 5])
    def test_witness_verifies(self, ell):
        g, eta = subdivided_clique(ell)
        assert eta.order == ell
        assert verify_expansion(g, eta, ell)

    def test_vertex_count(self):
        g, _ = subdivided_clique(4)
        # 4 branch vertices plus 6 subdividers; the gadget adds only an arc
        assert g.n == 10

    def test_gadget_controls_cleanliness(self):
        dirty, _ = subdivided_clique(3, gadget="odd")
        clean, _ = subdivided_clique(3, gadget="none")
        assert not is_clean(dirty)
        assert is_clean(clean)

    def test_witness_survives_stripping(self):
        from epkit.solver import strip_null_arcs

        g, _ = subdivided_clique(4)
        assert len(strip_null_arcs(g).arcs) == len(g.arcs)

    def test_validation(self):
        with pytest.raises(InputError):
            subdivided_clique(1)
        with pytest.raises(InputError):
            subdivided_clique(3, gadget="sparkly")


class TestGenerate:
    def test_dispatch(self):
        g, extras = generate("odd_cycles", count=2)
        assert g.n == 6 and extras == {}

    def test_expansion_extra(self):
        g, extras = generate("subdivided_clique", ell=3)
        assert verify_expansion(g, extras["expansion"], 3)

    def test_random_seeded(self):
        g1, _ = generate("random", seed=9, n=6, arc_count=8, group=Cyclic(2))
        g2, _ = generate("random", seed=9, n=6, arc_count=8, group=Cyclic(2))
        assert dump_json(graph_to_json_dict(g1)) == dump_json(graph_to_json_dict(g2))

    def test_unknown_family(self):
        with pytest.raises(InputError):
            generate("mystery_meat")

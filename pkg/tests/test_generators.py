import numpy as np
import pytest

from netdis import GeneratorSpec, build, newman_watts, scale_free
from netdis.generators import complete, fixture, path, ring, star


def tail_exponent_mle(degrees, k_min=10):
    """Continuous maximum-likelihood tail fit (Hill-style estimator)."""
    tail = np.asarray([k for k in degrees if k >= k_min], dtype=float)
    assert len(tail) >= 20, "tail too small for a stable fit"
    return 1.0 + len(tail) / np.log(tail / (k_min - 0.5)).sum()


class TestNewmanWatts:
    def test_p_zero_is_ring_lattice(self):
        g = newman_watts(10, 2, 0.0, seed=1)
        assert g.link_count == 10
        assert all(g.degree(v) == 2 for v in range(10))

    def test_saturated_lattice_is_complete(self):
        g = newman_watts(5, 4, 0.0, seed=1)
        assert g.link_count == 10

    def test_vertex_transitive_at_p_zero(self):
        g = newman_watts(20, 6, 0.0, seed=3)
        assert set(g.degrees.tolist()) == {6}

    def test_expected_link_count(self):
        # lattice 3000 links plus Binomial(3000, 0.2) shortcuts: mean 3600
        counts = [newman_watts(1000, 6, 0.2, seed=s).link_count
                  for s in range(100)]
        assert abs(np.mean(counts) - 3600) / 3600 < 0.02

    def test_seed_reproducibility(self):
        a = newman_watts(100, 4, 0.3, seed=9)
        b = newman_watts(100, 4, 0.3, seed=9)
        assert np.array_equal(a.indices, b.indices)
        c = newman_watts(100, 4, 0.3, seed=10)
        assert not np.array_equal(a.indices, c.indices)

    def test_simple_graph_maintained(self):
        g = newman_watts(50, 4, 1.0, seed=2)
        a = g.adjacency()
        assert np.trace(a) == 0
        assert np.array_equal(a, a.T)
        assert g.degrees.sum() == 2 * g.link_count

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            newman_watts(10, 3, 0.1, seed=0)  # odd k
        with pytest.raises(ValueError):
            newman_watts(10, 10, 0.1, seed=0)  # k >= n
        with pytest.raises(ValueError):
            newman_watts(10, 2, 1.5, seed=0)


class TestScaleFree:
    def test_link_count_fixed_by_construction(self):
        g = scale_free(1000, 3.0, seed=4)
        assert g.link_count == 3000

    def test_seed_reproducibility(self):
        a = scale_free(300, 2.7, seed=11)
        b = scale_free(300, 2.7, seed=11)
        assert np.array_equal(a.indices, b.indices)

    def test_tail_exponent_recovers_gamma(self):
        fits = [tail_exponent_mle(scale_free(1000, 2.5, seed=s).degrees)
                for s in range(20)]
        assert abs(np.mean(fits) - 2.5) <= 0.3

    def test_large_gamma_looks_homogeneous(self):
        # weights degenerate toward uniform: degree spread shrinks
        g_flat = scale_free(500, 50.0, seed=6)
        g_heavy = scale_free(500, 2.2, seed=6)
        assert g_flat.degrees.max() < g_heavy.degrees.max()
        assert g_flat.degrees.std() < g_heavy.degrees.std()

    def test_infeasible_density_rejected(self):
        with pytest.raises(ValueError):
            scale_free(10, 3.0, seed=0, mean_degree=20)

    def test_gamma_validation(self):
        with pytest.raises(ValueError):
            scale_free(100, 2.0, seed=0)
        with pytest.raises(ValueError):
            scale_free(5, 3.0, seed=0)


class TestFixtures:
    def test_closed_form_link_counts(self):
        assert complete(3).link_count == 3
        assert star(4).link_count == 3
        assert path(4).link_count == 3
        assert ring(6).link_count == 6
        assert ring(6, 2).link_count == 12

    def test_star_center_is_node_zero(self):
        g = star(6)
        assert g.degree(0) == 5

    def test_ring_is_regular(self):
        g = ring(8, 2)
        assert set(g.degrees.tolist()) == {4}

    def test_fixture_dispatch_and_errors(self):
        assert fixture("complete", 4).link_count == 6
        with pytest.raises(ValueError):
            fixture("star", 1)
        with pytest.raises(ValueError):
            fixture("moebius", 5)


class TestGeneratorSpec:
    def test_round_trip(self):
        spec = GeneratorSpec("NW", 100, k=4, p=0.1, seed=77)
        again = GeneratorSpec.from_dict(spec.to_dict())
        assert again == spec

    def test_build_dispatch(self):
        assert build(GeneratorSpec("star", 5)).link_count == 4
        assert build(GeneratorSpec("ring", 9, k=4)).link_count == 18
        g = build(GeneratorSpec("NW", 30, k=4, p=0.5, seed=1))
        assert g.node_count == 30

    def test_same_spec_same_edges(self):
        spec = GeneratorSpec("SF", 200, gamma=2.8, seed=5)
        assert np.array_equal(build(spec).indices, build(spec).indices)

    def test_validation(self):
        with pytest.raises(ValueError):
            GeneratorSpec.from_dict({"family": "XX", "n": 10})
        with pytest.raises(ValueError):
            GeneratorSpec.from_dict({"family": "NW", "n": 10, "k": 12})

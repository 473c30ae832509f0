import io

import numpy as np
import pytest

from netdis import (
    Graph,
    GraphFormatError,
    as_node_set,
    degree,
    indicator_from_nodes,
    nodes_from_indicator,
    parse_edge_list,
    remove_nodes,
    to_edge_list,
)
from netdis.generators import complete, path, star

from conftest import random_graph


class TestParseEdgeList:
    def test_triangle(self):
        g = parse_edge_list("1 2\n2 3\n3 1")
        assert g.node_count == 3
        assert g.link_count == 3

    def test_symmetrize_dedupe_drop_loop(self):
        g = parse_edge_list("a b\nb a\na a")
        assert g.node_count == 2
        assert g.link_count == 1
        assert g.ingest_stats.loops_dropped == 1
        assert g.ingest_stats.duplicates_dropped == 1

    def test_comments_blank_lines_and_commas(self):
        g = parse_edge_list("# header\n% other comment\n\nx, y\ny,z\n")
        assert g.node_count == 3
        assert g.link_count == 2

    def test_labels_first_appearance_order(self):
        g = parse_edge_list("beta alpha\nalpha gamma")
        assert g.labels == ("beta", "alpha", "gamma")
        assert g.id_of("gamma") == 2

    def test_malformed_line_reports_number(self):
        with pytest.raises(GraphFormatError) as err:
            parse_edge_list("1 2\n3 4 5\n")
        assert err.value.line_no == 2
        assert "line 2" in str(err.value)

    def test_single_token_line_rejected(self):
        with pytest.raises(GraphFormatError):
            parse_edge_list("1 2\nlonely\n")

    def test_empty_input_rejected(self):
        with pytest.raises(GraphFormatError):
            parse_edge_list("")
        with pytest.raises(GraphFormatError):
            parse_edge_list("# only comments\n")

    def test_accepts_file_object(self):
        g = parse_edge_list(io.StringIO("1 2\n"))
        assert g.link_count == 1

    def test_dense_paper_scale_file(self):
        # same shape as the 62-node / 304-link ingestion case: N and W are
        # inferred from tokens alone
        rng = np.random.default_rng(5)
        edges = set()
        while len(edges) < 304:
            u, v = rng.integers(0, 62, 2)
            if u != v:
                edges.add((min(u, v), max(u, v)))
        text = "\n".join(f"p{u} p{v}" for u, v in sorted(edges))
        g = parse_edge_list(text)
        assert (g.node_count, g.link_count) == (62, 304)


class TestGraphInvariants:
    def test_degree_sum_is_twice_links(self, rng):
        for _ in range(20):
            g = random_graph(rng.integers(2, 25), rng.random(), rng)
            assert g.degrees.sum() == 2 * g.link_count

    def test_adjacency_symmetric_no_loops(self, rng):
        g = random_graph(20, 0.3, rng)
        a = g.adjacency()
        assert np.array_equal(a, a.T)
        assert np.trace(a) == 0

    def test_duplicate_and_reversed_edges_collapse(self):
        g = Graph(3, [(0, 1), (1, 0), (0, 1), (1, 2)])
        assert g.link_count == 2

    def test_out_of_range_edge_rejected(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 2)])


class TestDegree:
    def test_star_center_and_leaf(self):
        g = star(4)
        assert degree(g, 0) == 3
        assert degree(g, 1) == 1

    def test_complete(self):
        g = complete(5)
        assert all(degree(g, v) == 4 for v in range(5))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            degree(star(4), 9)


class TestRemoveNodes:
    def test_star_center_removal_isolates(self):
        g = remove_nodes(star(4), [0])
        assert g.node_count == 3
        assert g.link_count == 0

    def test_remove_nothing_is_identity(self):
        g = complete(3)
        h = remove_nodes(g, [])
        assert h.node_count == 3 and h.link_count == 3
        assert h.labels == g.labels

    def test_path_interior_removal(self):
        # path 1-2-3-4, remove the node labeled 2: only {3,4} survives
        g = parse_edge_list("1 2\n2 3\n3 4")
        h = remove_nodes(g, [g.id_of("2")])
        assert h.node_count == 3
        assert h.link_count == 1
        u, v = h.edges()[0]
        assert {h.labels[u], h.labels[v]} == {"3", "4"}

    def test_source_ids_record_remapping(self):
        g = path(5)
        h = remove_nodes(g, [1, 3])
        assert h.source_ids == (0, 2, 4)
        assert h.labels == ("0", "2", "4")

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            remove_nodes(path(3), [3])

    def test_sequential_equals_joint(self, rng):
        for _ in range(20):
            g = random_graph(12, 0.3, rng)
            nodes = list(rng.choice(12, 5, replace=False))
            a, b = set(nodes[:2]), set(nodes[2:])
            joint = remove_nodes(g, a | b)
            step1 = remove_nodes(g, a)
            b_mapped = [step1.labels.index(g.labels[v]) for v in b]
            two_step = remove_nodes(step1, b_mapped)
            assert joint.node_count == two_step.node_count
            joint_edges = {(joint.labels[u], joint.labels[v]) for u, v in joint.edges()}
            two_edges = {(two_step.labels[u], two_step.labels[v]) for u, v in two_step.edges()}
            assert joint_edges == two_edges

    def test_degree_sum_after_removal(self, rng):
        for _ in range(10):
            g = random_graph(15, 0.4, rng)
            h = remove_nodes(g, rng.choice(15, 4, replace=False))
            assert h.degrees.sum() == 2 * h.link_count


class TestSerialization:
    def test_header_and_ascending_pairs(self):
        text = to_edge_list(complete(3))
        lines = text.strip().split("\n")
        assert lines[0] == "# N=3 W=3"
        assert lines[1:] == ["0 1", "0 2", "1 2"]

    def test_round_trip_preserves_structure_and_labels(self, rng):
        for _ in range(10):
            g = random_graph(12, 0.5, rng)
            if g.degrees.min() == 0:
                continue  # serializer carries nodes only through their links
            h = parse_edge_list(to_edge_list(g))
            assert h.node_count == g.node_count
            assert h.link_count == g.link_count
            g_edges = {tuple(sorted((g.labels[u], g.labels[v]))) for u, v in g.edges()}
            h_edges = {tuple(sorted((h.labels[u], h.labels[v]))) for u, v in h.edges()}
            assert g_edges == h_edges
            assert set(h.labels) == set(g.labels)


class TestNodeSets:
    def test_as_node_set_sorts_and_validates(self):
        assert as_node_set([3, 1, 2], 5) == (1, 2, 3)
        with pytest.raises(ValueError):
            as_node_set([1, 1], 5)
        with pytest.raises(ValueError):
            as_node_set([5], 5)

    def test_indicator_bijection(self, rng):
        nodes = (1, 4, 7)
        x = indicator_from_nodes(nodes, 9)
        assert x.sum() == len(nodes)
        assert nodes_from_indicator(x) == nodes

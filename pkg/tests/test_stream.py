"""Pass protocol, replay determinism, and edge-list validation."""

import pytest

from triad.errors import EdgeListError, StreamUsageError
from triad.generators import gen_wheel
from triad.stream import EdgeStream, StreamStats


K3_TEXT = "0 1\n0 2\n1 2\n"


def k3_file(tmp_path):
    p = tmp_path / "k3.el"
    p.write_text(K3_TEXT)
    return p


class TestOpenAndValidate:
    def test_k3_file_stats(self, tmp_path):
        s = EdgeStream.from_file(k3_file(tmp_path))
        assert s.pass_counter == 0
        assert s.stats() == StreamStats(n=3, m=3)
        assert s.pass_counter == 1

    def test_stats_cached_after_first_pass(self, tmp_path):
        s = EdgeStream.from_file(k3_file(tmp_path))
        s.stats()
        s.stats()
        assert s.pass_counter == 1

    def test_two_seeds_same_multiset_different_order(self, tmp_path):
        path = tmp_path / "p.el"
        path.write_text("".join(f"{i} {i + 1}\n" for i in range(12)))
        a = list(EdgeStream.from_file(path, order_seed=1).edges())
        b = list(EdgeStream.from_file(path, order_seed=2).edges())
        assert sorted(a) == sorted(b)
        assert a != b

    def test_self_loop_rejected_with_line_number(self, tmp_path):
        p = tmp_path / "bad.el"
        p.write_text("0 1\n1 1\n")
        with pytest.raises(EdgeListError, match="line 2"):
            EdgeStream.from_file(p)

    def test_duplicate_rejected_either_orientation(self, tmp_path):
        p = tmp_path / "dup.el"
        p.write_text("0 1\n2 3\n1 0\n")
        with pytest.raises(EdgeListError, match="line 3"):
            EdgeStream.from_file(p)

    def test_malformed_line(self, tmp_path):
        p = tmp_path / "junk.el"
        p.write_text("0 1\nnope\n")
        with pytest.raises(EdgeListError, match="line 2"):
            EdgeStream.from_file(p)

    def test_comments_and_blanks_skipped(self, tmp_path):
        p = tmp_path / "c.el"
        p.write_text("# header\n\n0 1\n# mid\n1 2\n")
        s = EdgeStream.from_file(p)
        assert s.stats() == StreamStats(n=3, m=2)

    def test_in_memory_source_validated(self):
        with pytest.raises(EdgeListError):
            EdgeStream.from_edges([(0, 1), (1, 0)])


class TestPassProtocol:
    def test_one_pass_yields_all_edges_and_counts_once(self):
        s = EdgeStream.from_edges([(0, 1), (0, 2), (1, 2)])
        s.begin_pass()
        seen = []
        while (e := s.next_edge()) is not None:
            seen.append(e)
        s.end_pass()
        assert len(seen) == 3
        assert s.pass_counter == 1

    def test_consecutive_passes_identical_for_fixed_seed(self):
        s = EdgeStream.from_edges([(i, i + 1) for i in range(9)], order_seed=7)
        first = list(s.edges())
        second = list(s.edges())
        assert first == second
        assert s.pass_counter == 2

    def test_nested_begin_is_usage_error(self):
        s = EdgeStream.from_edges([(0, 1)])
        s.begin_pass()
        with pytest.raises(StreamUsageError):
            s.begin_pass()

    def test_end_before_exhaustion_is_usage_error(self):
        s = EdgeStream.from_edges([(0, 1), (1, 2)])
        s.begin_pass()
        s.next_edge()
        with pytest.raises(StreamUsageError):
            s.end_pass()

    def test_next_edge_outside_pass(self):
        s = EdgeStream.from_edges([(0, 1)])
        with pytest.raises(StreamUsageError):
            s.next_edge()

    def test_abort_does_not_count(self):
        s = EdgeStream.from_edges([(0, 1), (1, 2)])
        s.begin_pass()
        s.next_edge()
        s.abort_pass()
        assert s.pass_counter == 0
        assert list(s.edges()) != []  # stream still usable

    def test_breaking_out_of_iterator_aborts(self):
        s = EdgeStream.from_edges([(0, 1), (1, 2), (2, 3)])
        for _ in s.edges():
            break
        assert s.pass_counter == 0

    def test_reading_past_end_signals_none_not_error(self):
        s = EdgeStream.from_edges([(0, 1)])
        s.begin_pass()
        s.next_edge()
        assert s.next_edge() is None
        assert s.next_edge() is None
        s.end_pass()


class TestStats:
    def test_wheel_file(self, tmp_path):
        g, truth = gen_wheel(1001)
        p = tmp_path / "wheel.el"
        p.write_text("".join(f"{u} {v}\n" for u, v in g.edges()))
        s = EdgeStream.from_file(p)
        assert s.stats() == StreamStats(n=1001, m=2000)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.el"
        p.write_text("")
        s = EdgeStream.from_file(p)
        assert s.stats() == StreamStats(n=0, m=0)

    def test_stable_across_passes(self):
        s = EdgeStream.from_edges([(0, 5), (5, 9)], order_seed=3)
        first = s.stats()
        list(s.edges())
        assert s.stats() == first == StreamStats(n=3, m=2)


class TestReplayDeterminism:
    def test_k_passes_are_k_identical_permutations(self, tmp_path):
        g, _ = gen_wheel(31)
        p = tmp_path / "w.el"
        p.write_text("".join(f"{u} {v}\n" for u, v in g.edges()))
        s = EdgeStream.from_file(p, order_seed=11)
        reference = list(s.edges())
        assert sorted(reference) == sorted(g.edges())
        for _ in range(3):
            assert list(s.edges()) == reference

    def test_independent_cursors_over_same_source(self, tmp_path):
        path = k3_file(tmp_path)
        a = EdgeStream.from_file(path, order_seed=4)
        b = EdgeStream.from_file(path, order_seed=4)
        a.begin_pass()
        b.begin_pass()
        ea = [a.next_edge(), a.next_edge(), a.next_edge(), a.next_edge()]
        eb = [b.next_edge(), b.next_edge(), b.next_edge(), b.next_edge()]
        a.end_pass()
        b.end_pass()
        assert ea == eb

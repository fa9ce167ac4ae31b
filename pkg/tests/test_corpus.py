import pynauty
import pytest

from triramsey.corpus import (KNOWN_COUNTS, corpus_path, digest_file, ensure_corpus, enumerate_graphs,
                              read_corpus, small_graphs, write_corpus)
from triramsey.graph import emit_graph6


def _cert(g):
    return pynauty.certificate(pynauty.Graph(g.n, adjacency_dict={v: sorted(g.neighbors(v)) for v in range(g.n)}))


def test_enumeration_counts_match_known_sequence():
    levels = enumerate_graphs(7)
    for n, gs in levels.items():
        assert len(gs) == KNOWN_COUNTS[n]


def test_enumeration_has_no_isomorphic_duplicates():
    gs = enumerate_graphs(6)[6]
    certs = {_cert(g) for g in gs}
    assert len(certs) == len(gs)
    assert [emit_graph6(g) for g in gs] == sorted(emit_graph6(g) for g in gs)


def test_corpus_files_roundtrip(tmp_path):
    paths = ensure_corpus(5, tmp_path)
    assert [p.name for p in paths] == [f"graphs{n}.g6" for n in range(1, 6)]
    assert sum(1 for _ in read_corpus(corpus_path(5, tmp_path))) == 34
    assert len(list(small_graphs(5, 4, tmp_path))) == 11 + 34
    before = digest_file(paths[-1])
    ensure_corpus(5, tmp_path)  # already valid, not rewritten
    assert digest_file(paths[-1]) == before


def test_corrupt_corpus_is_rebuilt(tmp_path):
    p = corpus_path(4, tmp_path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_bytes(b"C?\n")
    ensure_corpus(4, tmp_path)
    assert sum(1 for _ in read_corpus(p)) == 11


def test_write_is_deterministic(tmp_path):
    gs = enumerate_graphs(5)[5]
    write_corpus(tmp_path / "a.g6", gs)
    write_corpus(tmp_path / "b.g6", list(reversed(gs))[::-1])
    assert digest_file(tmp_path / "a.g6") == digest_file(tmp_path / "b.g6")


@pytest.mark.slow
def test_cached_nine_vertex_corpus_count():
    p = ensure_corpus(9)[-1]
    with open(p, "rb") as fh:
        assert sum(1 for _ in fh) == 274668

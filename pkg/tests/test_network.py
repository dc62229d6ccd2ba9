import itertools
import random

import pytest

from slnc.errors import (
    CycleDetected,
    DuplicateEdgeId,
    EmptySet,
    ParseError,
    SecurityLevelTooLarge,
    UnknownEdge,
    UnknownSink,
    UnreachableSink,
)
from slnc.network import (
    c_min,
    edge_disjoint_paths,
    enumerate_topology_wiretap_sets,
    min_cut_to_edges,
    min_cut_to_sink,
    parse_network,
    serialize_network,
)
from conftest import FIXTURES


# -- brute-force oracles -------------------------------------------------------

def _reachable(net, removed, start):
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for e in net.out_edges(v):
            if e.id in removed or e.head in seen:
                continue
            seen.add(e.head)
            stack.append(e.head)
    return seen


def brute_force_sink_cut(net, t):
    """Smallest edge set whose removal disconnects the source from t."""
    ids = [e.id for e in net.edges]
    for size in range(len(ids) + 1):
        for combo in itertools.combinations(ids, size):
            if t not in _reachable(net, set(combo), net.source):
                return size
    return len(ids)


def brute_force_edge_set_cut(net, wiretapped):
    """Smallest edge set S protecting every member: a is protected when a is
    in S or its tail became unreachable."""
    ids = [e.id for e in net.edges]
    for size in range(len(ids) + 1):
        for combo in itertools.combinations(ids, size):
            removed = set(combo)
            seen = _reachable(net, removed, net.source)
            if all(
                a in removed or net.edge(a).tail not in seen
                for a in wiretapped
            ):
                return size
    return len(ids)


# -- parsing --------------------------------------------------------------------

def test_parse_butterfly_fixture(butterfly):
    assert len(butterfly.edges) == 9
    assert butterfly.sinks == ("t1", "t2")
    assert butterfly.source == "s"
    assert butterfly.field.q == 3


def test_parse_round_trip(butterfly):
    text = serialize_network(butterfly)
    again = parse_network(text)
    assert serialize_network(again) == text


def test_parse_allows_comments_and_blank_lines():
    net = parse_network(
        """
        # tiny network
        field 2
        source s
        sink t   # the only sink
        edge a s t
        """
    )
    assert [e.id for e in net.edges] == ["a"]


def test_parse_rejects_two_cycle():
    text = "field 2\nsource s\nsink t\nedge a s x\nedge b x y\nedge c y x\nedge d x t\n"
    with pytest.raises(CycleDetected):
        parse_network(text)


def test_parse_rejects_missing_sinks():
    with pytest.raises(ParseError):
        parse_network("field 2\nsource s\nedge a s t\n")


def test_parse_rejects_duplicate_edge_ids():
    with pytest.raises(DuplicateEdgeId):
        parse_network("field 2\nsource s\nsink t\nedge a s t\nedge a s t\n")


def test_parse_rejects_unreachable_sink():
    with pytest.raises(UnreachableSink):
        parse_network("field 2\nsource s\nsink t\nsink u\nedge a s t\n")


def test_parse_rejects_incoming_source_edge():
    with pytest.raises(ParseError):
        parse_network("field 2\nsource s\nsink t\nedge a s t\nedge b t s\n")


def test_parse_rejects_unknown_keyword_and_bad_field():
    with pytest.raises(ParseError):
        parse_network("field 2\nsource s\nsink t\nedge a s t\nnoise x\n")
    with pytest.raises(ParseError):
        parse_network("field 6\nsource s\nsink t\nedge a s t\n")


def test_parse_rejects_reserved_edge_prefix():
    with pytest.raises(ParseError):
        parse_network("field 2\nsource s\nsink t\nedge __s_1 s t\n")


# -- min cuts ---------------------------------------------------------------------

def test_min_cut_to_sink_butterfly(butterfly):
    for t in butterfly.sinks:
        assert min_cut_to_sink(butterfly, t) == 2
        assert brute_force_sink_cut(butterfly, t) == 2


def test_min_cut_to_sink_parallel_and_chain(parallel3_gf2):
    assert min_cut_to_sink(parallel3_gf2, "t") == 3
    chain = parse_network("field 2\nsource s\nsink t\nedge a s x\nedge b x t\n")
    assert min_cut_to_sink(chain, "t") == 1


def test_min_cut_unknown_sink(butterfly):
    with pytest.raises(UnknownSink):
        min_cut_to_sink(butterfly, "n1")


def test_c_min_examples(butterfly, parallel3_gf2):
    assert c_min(butterfly) == 2
    assert c_min(parallel3_gf2) == 3
    mixed = parse_network(
        "field 2\nsource s\nsink t1\nsink t2\n"
        "edge a s t1\nedge b s t1\nedge c s t1\n"
        "edge d s t2\nedge e s t2\n"
    )
    assert min_cut_to_sink(mixed, "t1") == 3
    assert min_cut_to_sink(mixed, "t2") == 2
    assert c_min(mixed) == 2


def test_min_cut_to_edges_butterfly(butterfly):
    assert min_cut_to_edges(butterfly, ["e5"]) == 1
    assert min_cut_to_edges(butterfly, ["e1", "e2"]) == 2
    # e3 and e5 admit two edge-disjoint access paths (via e1 and via e2-e4),
    # confirmed by the exhaustive cut oracle
    assert min_cut_to_edges(butterfly, ["e3", "e5"]) == 2
    for ids in (["e5"], ["e1", "e2"], ["e3", "e5"], ["e6", "e7"], ["e8", "e9"]):
        assert min_cut_to_edges(butterfly, ids) == brute_force_edge_set_cut(butterfly, ids)


def test_min_cut_to_edges_validation(butterfly):
    with pytest.raises(EmptySet):
        min_cut_to_edges(butterfly, [])
    with pytest.raises(UnknownEdge):
        min_cut_to_edges(butterfly, ["zz"])


def test_min_cut_to_edges_agrees_with_oracle_on_random_sets(butterfly):
    rng = random.Random(7)
    ids = [e.id for e in butterfly.edges]
    for _ in range(25):
        sample = rng.sample(ids, rng.randint(1, 3))
        assert min_cut_to_edges(butterfly, sample) == brute_force_edge_set_cut(
            butterfly, sample
        )


def test_min_cut_to_edges_of_sink_inputs_matches_sink_cut(butterfly):
    for t in butterfly.sinks:
        in_ids = [e.id for e in butterfly.in_edges(t)]
        assert min_cut_to_edges(butterfly, in_ids) == min_cut_to_sink(butterfly, t)


def test_min_cut_to_edges_monotone_and_bounded(butterfly):
    rng = random.Random(11)
    ids = [e.id for e in butterfly.edges]
    for _ in range(25):
        small = rng.sample(ids, rng.randint(1, 2))
        extra = rng.sample([i for i in ids if i not in small], rng.randint(1, 2))
        big = small + extra
        assert min_cut_to_edges(butterfly, small) <= min_cut_to_edges(butterfly, big)
        assert min_cut_to_edges(butterfly, big) <= len(big)


def test_edge_disjoint_paths_are_disjoint_and_deterministic(butterfly):
    first = edge_disjoint_paths(butterfly, "t1", 2)
    second = edge_disjoint_paths(butterfly, "t1", 2)
    assert first == second
    used = [eid for path in first for eid in path]
    assert len(used) == len(set(used))
    for path in first:
        assert butterfly.edge(path[0]).tail == "s"
        assert butterfly.edge(path[-1]).head == "t1"


# -- wiretap enumeration ------------------------------------------------------------

def test_enumerate_topology_butterfly_singletons(butterfly):
    coll = enumerate_topology_wiretap_sets(butterfly, 1)
    assert coll.kind == "cut"
    assert coll.sets == tuple((f"e{i}",) for i in range(1, 10))


def test_enumerate_topology_parallel_pairs(parallel3_gf2):
    coll = enumerate_topology_wiretap_sets(parallel3_gf2, 2)
    assert coll.sets == (("e1", "e2"), ("e1", "e3"), ("e2", "e3"))


def test_enumerate_topology_rejects_large_r(butterfly, parallel3_gf2):
    with pytest.raises(SecurityLevelTooLarge):
        enumerate_topology_wiretap_sets(butterfly, 2)  # r = c_min
    with pytest.raises(SecurityLevelTooLarge):
        enumerate_topology_wiretap_sets(parallel3_gf2, 0)


def test_enumeration_independent_of_declaration_order():
    base = (FIXTURES / "butterfly.net").read_text().splitlines()
    header = [ln for ln in base if not ln.startswith("edge")]
    edges = [ln for ln in base if ln.startswith("edge")]
    rng = random.Random(3)
    for _ in range(5):
        rng.shuffle(edges)
        net = parse_network("\n".join(header + edges) + "\n")
        coll = enumerate_topology_wiretap_sets(net, 1)
        assert coll.sets == tuple((f"e{i}",) for i in range(1, 10))


def test_cardinality_bound(butterfly):
    import math

    coll = enumerate_topology_wiretap_sets(butterfly, 1)
    assert len(coll) <= math.comb(len(butterfly.edges), 1)

"""Pretty-print round-trips: parse -> print -> parse is the identity on the IR."""

from __future__ import annotations

import random

from policyspace.parsers.graph_parser import parse_decision_graph
from policyspace.parsers.inferencer_parser import parse_value_inferencers
from policyspace.parsers.printer import (
    format_decision_graph,
    format_policy_space,
    format_value_inferencers,
)
from policyspace.parsers.space_parser import parse_policy_space

from genmodels import gen_graph, gen_inferencer, gen_space
from conftest import FIG_DEMO_DIR


def assert_space_roundtrip(source: str) -> None:
    first = parse_policy_space(source)
    printed = format_policy_space(first)
    second = parse_policy_space(printed)
    assert second == first
    assert second.dimensions == first.dimensions
    # printing is a fixpoint after one pass
    assert format_policy_space(second) == printed


def assert_graph_roundtrip(source: str) -> None:
    first = parse_decision_graph([source])
    printed = format_decision_graph(first)
    second = parse_decision_graph([printed])
    assert second.structure() == first.structure()
    assert sorted(second.nodes) == sorted(first.nodes)
    assert second.entry == first.entry
    assert format_decision_graph(second) == printed


def assert_inferencers_roundtrip(source: str) -> None:
    first = parse_value_inferencers(source)
    printed = format_value_inferencers(first)
    second = parse_value_inferencers(printed)
    assert second == first
    assert format_value_inferencers(second) == printed


def test_fig_demo_roundtrip():
    assert_space_roundtrip((FIG_DEMO_DIR / "space.ps").read_text())
    assert_graph_roundtrip((FIG_DEMO_DIR / "graph.dg").read_text())
    assert_inferencers_roundtrip((FIG_DEMO_DIR / "plans.vi").read_text())


def test_multi_file_graph_roundtrip_as_one_source():
    file1 = "[call: p]\n[>q< ask: {text: T?} {answers: {yes:} {no:}}]"
    file2 = "[-->p<\n  [todo: shared]\n  [end]\n--]"
    first = parse_decision_graph([file1, file2])
    printed = format_decision_graph(first)
    second = parse_decision_graph([printed])
    assert second.structure() == first.structure()


def test_fifty_random_models_roundtrip():
    rng = random.Random(20260809)
    for i in range(50):
        spec = gen_space(rng, with_remarks=True)
        assert_space_roundtrip(spec.source)
        assert_graph_roundtrip(gen_graph(rng, spec))
        if spec.atomic:
            target = rng.choice(sorted(spec.atomic))
            vi = gen_inferencer(rng, spec, target)
            if vi:
                assert_inferencers_roundtrip(vi)


def test_generated_ids_stable_across_roundtrip():
    source = "[set: A=x]\n[todo: one]\n[>named< end]\n[todo: two]"
    first = parse_decision_graph([source])
    ids_first = [n.id for n in first.top_level]
    second = parse_decision_graph([format_decision_graph(first)])
    assert [n.id for n in second.top_level] == ids_first
    assert ids_first == ["_n1", "_n2", "named", "_n3"]

"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from contextlib import contextmanager

import pytest
from fastapi.testclient import TestClient

from policyspace import analysis, engine
from policyspace.graph import export_dot, validate
from policyspace.inference import (
    COMPLY,
    ValueInferencer,
    apply_fixpoint,
    bind,
    infer_once,
    infer_value,
)
from policyspace.model import PolicyModel
from policyspace.parsers.graph_parser import parse_decision_graph
from policyspace.parsers.inferencer_parser import parse_value_inferencers
from policyspace.parsers.printer import (
    format_decision_graph,
    format_policy_space,
    format_value_inferencers,
)
from policyspace.parsers.space_parser import parse_policy_space
from policyspace.service.app import create_app
from policyspace.service.config import ServiceConfig
from policyspace.space import (
    EQUAL,
    GREATER,
    LESS,
    Location,
    PolicySpace,
    SlotDefinition,
    compare,
    compliance_space_contains,
    join,
    support_space_contains,
)

from conftest import FIG_DEMO_DIR
from genmodels import build_scale_model, gen_graph, gen_inferencer, gen_space


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE  {name}: FAIL")
        raise
    print(f"\nACCEPTANCE  {name}: PASS")


def run(model, answers):
    session = engine.start(model)
    for a in answers:
        session.answer(a)
    return session


def test_fig2_monotonicity_fixture(fig_demo):
    """[no,no,no] ends flawed (trailing set-ok has no effect); [yes,no,no] ends ok."""
    with criterion("fig2-monotonicity"):
        flawed = run(fig_demo, ["no", "no", "no"])
        assert flawed.status == engine.FINISHED
        assert flawed.location.value_of("ProcessFairness") == "flawed"

        ok = run(fig_demo, ["yes", "no", "no"])
        assert ok.status == engine.FINISHED
        assert ok.location.value_of("ProcessFairness") == "ok"

        runs = 200
        start_t = time.perf_counter()
        for _ in range(runs):
            run(fig_demo, ["no", "no", "no"])
        per_run = (time.perf_counter() - start_t) / runs
        assert per_run < 0.001, f"{per_run * 1000:.3f} ms per run exceeds 1 ms"


def test_fig2_exhaustive_oracle(fig_demo):
    """6 paths, the hand-derived 4-location outcome set, every witness replays."""
    with criterion("fig2-exhaustive-oracle"):
        result = analysis.enumerate_outcomes(fig_demo)
        assert result.total_paths == 6
        assert not result.partial
        assert len(result.outcomes) == 4

        # hand enumeration of the graph, projected onto its own dimensions
        expected = {
            frozenset({("Root/ProcessFairness", "ok")}): 1,
            frozenset({("Root/ProcessFairness", "flawed")}): 1,
            frozenset({("Root/ProcessFairness", "illegal"),
                       ("Root/Recommendations/sueFormerEmployerSoon", "true")}): 2,
            frozenset({("Root/ProcessFairness", "illegal"),
                       ("Root/Recommendations/sueFormerEmployerSoon", "true"),
                       ("Root/Properties/severanceCancellation", "true")}): 2,
        }
        got = {}
        for outcome in result.outcomes:
            described = outcome.location.describe()
            described.pop("Root/Plan")  # inferred alongside the asked dimensions
            got[frozenset(described.items())] = outcome.count
        assert got == expected

        for outcome in result.outcomes:
            session = engine.start(fig_demo)
            for node_id, answer in outcome.witness:
                assert session.current == node_id
                session.answer(answer)
            assert session.status == engine.FINISHED
            assert session.location == outcome.location


def test_fig3_inference_table(fig_demo):
    """Anchor rows reproduce None/L1/L2/L3; off-anchor cases and a brute-force
    oracle agree on all 20 locations of the two-axis space, both modes."""
    with criterion("fig3-inference-table"):
        support = fig_demo.bound_inferencers[0]
        comply_src = ValueInferencer(support.source.target, COMPLY, support.source.rows)
        comply, diags = bind(comply_src, fig_demo.space)
        assert diags == []

        def at(age, pf):
            kw = {}
            if age:
                kw["AgeGroup"] = age
            if pf:
                kw["ProcessFairness"] = pf
            return fig_demo.space.location(**kw)

        assert infer_value(support, at("under21", "ok")) == "None"
        assert infer_value(support, at("workForce", "flawed")) == "L1"
        assert infer_value(support, at("pension", "flawed")) == "L2"
        assert infer_value(support, at("pension", "illegal")) == "L3"
        assert infer_value(support, at("workForce", "ok")) == "L1"
        assert infer_value(comply, at("workForce", "ok")) == "None"
        assert infer_value(support, at("voluntaryPension", "flawed")) == "L2"

        def oracle(bound, l):
            if bound.mode == "support":
                hits = [(a.as_location().coordinates, v)
                        for a, v in zip(bound.anchors, bound.values)
                        if support_space_contains(a, l)]
                return min(hits)[1] if hits else None
            hits = [(a.as_location().coordinates, v)
                    for a, v in zip(bound.anchors, bound.values)
                    if compliance_space_contains(a, l)]
            return max(hits)[1] if hits else None

        space = fig_demo.space
        age_dim = space.resolve_dimension("AgeGroup")
        pf_dim = space.resolve_dimension("ProcessFairness")
        checked = 0
        for age_c, pf_c in itertools.product(range(5), range(4)):
            l = space.bottom().with_coordinate(age_dim, age_c).with_coordinate(pf_dim, pf_c)
            for bound in (support, comply):
                assert infer_once(bound, l) == oracle(bound, l), (
                    f"mode={bound.mode} at {l.describe()}")
            checked += 1
        assert checked == 20


def test_lattice_property_suite():
    """10,000 randomized join/compare trials with zero violations."""
    with criterion("lattice-properties"):
        rng = random.Random(0xACCE97)
        spaces = []
        for _ in range(20):
            n_dims = rng.randint(1, 6)
            slots = {"Top": SlotDefinition(
                "Top", "compound", children=tuple(f"D{i}" for i in range(n_dims)))}
            for i in range(n_dims):
                k = rng.randint(1, 4)
                slots[f"D{i}"] = SlotDefinition(
                    f"D{i}", "atomic", values=tuple(f"v{j}" for j in range(k)))
            spaces.append(PolicySpace("Top", slots))

        def random_location(space):
            return Location(space, tuple(
                rng.randint(0, d.size - 1) for d in space.dimensions))

        violations = 0
        for _ in range(10_000):
            space = rng.choice(spaces)
            a, b, c = (random_location(space) for _ in range(3))
            bottom = space.bottom()
            if join(a, a) != a:
                violations += 1
            if join(a, b) != join(b, a):
                violations += 1
            if join(join(a, b), c) != join(a, join(b, c)):
                violations += 1
            if join(a, bottom) != a:
                violations += 1
            if compare(a, join(a, b)) not in (EQUAL, LESS):
                violations += 1
            if compare(join(a, b), b) not in (EQUAL, GREATER):
                violations += 1
        assert violations == 0


def test_fixpoint_properties():
    """200 random chains over random spaces (<=8 dims, <=5 coords): terminates
    within the coordinate bound, never decreases, idempotent. Zero violations."""
    with criterion("fixpoint-properties"):
        rng = random.Random(0xF1A9)
        trials = 0
        while trials < 200:
            spec = gen_space(rng, max_dims=8, max_coords=5)
            targets = sorted(spec.atomic)
            if not targets:
                continue
            sources = []
            rng.shuffle(targets)
            for target in targets[: rng.randint(1, len(targets))]:
                src = gen_inferencer(rng, spec, target)
                if src:
                    sources.append(src)
            if not sources:
                continue
            model = PolicyModel.from_sources(spec.source, "[todo: x]", sources)
            assert model.is_valid, [str(d) for d in model.diagnostics]
            if not model.bound_inferencers:
                continue
            trials += 1
            l = Location(model.space, tuple(
                rng.randint(0, d.size - 1) for d in model.space.dimensions))
            # apply_fixpoint enforces the total-coordinate pass bound itself
            result = apply_fixpoint(model.bound_inferencers, l)
            assert compare(l, result) in (EQUAL, LESS)
            assert apply_fixpoint(model.bound_inferencers, result) == result
        assert trials == 200


def test_scale_check():
    """74 dimensions / 251 nodes: validates, exports DOT, and finishes a random
    full interview in under one second."""
    with criterion("scale-74-dims-251-nodes"):
        model = build_scale_model()
        assert len(model.space.dimensions) == 74
        assert len(model.graph.nodes) == 251
        assert model.is_valid

        start_t = time.perf_counter()
        diags = validate(model.graph, model.space)
        assert [d for d in diags if d.is_error()] == []
        dot = export_dot(model.graph)
        assert dot.startswith("digraph")
        rng = random.Random(20200523)
        session = engine.start(model)
        answered = 0
        while session.status == engine.AWAITING:
            keys = [a.key for a in session.current_node.prompt_answers]
            session.answer(rng.choice(keys))
            answered += 1
        elapsed = time.perf_counter() - start_t
        assert session.status == engine.FINISHED
        assert answered >= 70
        assert elapsed < 1.0, f"{elapsed:.3f}s exceeds the 1s budget"


def test_parser_roundtrip(fig_demo):
    """parse -> pretty-print -> parse is structurally the identity for fig-demo
    and 50 randomized models."""
    with criterion("parser-roundtrip"):
        def check(space_src, graph_src, vi_src):
            space1 = parse_policy_space(space_src)
            assert parse_policy_space(format_policy_space(space1)) == space1
            graph1 = parse_decision_graph([graph_src])
            graph2 = parse_decision_graph([format_decision_graph(graph1)])
            assert graph2.structure() == graph1.structure()
            if vi_src:
                inf1 = parse_value_inferencers(vi_src)
                assert parse_value_inferencers(format_value_inferencers(inf1)) == inf1

        check((FIG_DEMO_DIR / "space.ps").read_text(),
              (FIG_DEMO_DIR / "graph.dg").read_text(),
              (FIG_DEMO_DIR / "plans.vi").read_text())

        rng = random.Random(0x50F7)
        for i in range(50):
            spec = gen_space(rng, with_remarks=True)
            vi = None
            if spec.atomic:
                vi = gen_inferencer(rng, spec, rng.choice(sorted(spec.atomic)))
            check(spec.source, gen_graph(rng, spec), vi)


def test_service_contract(tmp_path, fig_demo):
    """API session [no,yes] returns byte-identical report JSON to the engine;
    restart replay reproduces state; private versions need their token."""
    with criterion("service-contract"):
        def config():
            return ServiceConfig(storage_dir=tmp_path / "storage",
                                 admin_token="acceptance-admin",
                                 preload_models=[str(FIG_DEMO_DIR)])

        client = TestClient(create_app(config()))
        created = client.post("/api/models/fig-demo/1.0/sessions",
                              json={"locale": "en"}).json()
        sid = created["sessionId"]
        client.post(f"/api/sessions/{sid}/answers",
                    json={"nodeId": "gp-hearing", "answer": "no"})
        done = client.post(f"/api/sessions/{sid}/answers",
                           json={"nodeId": "gp-hearing-details", "answer": "yes"})
        assert done.json()["finished"] is True
        api_report = client.get(f"/api/sessions/{sid}/report").json()

        session = run(fig_demo, ["no", "yes"])
        direct = engine.final_report(session, fig_demo.package("en"))
        canonical = json.dumps(api_report, ensure_ascii=False, sort_keys=True,
                               separators=(",", ":"))
        assert canonical == direct.to_json()

        # restart: in-flight session state reproduced from the journal
        partial = client.post("/api/models/fig-demo/1.0/sessions",
                              json={"locale": "en"}).json()
        pid = partial["sessionId"]
        client.post(f"/api/sessions/{pid}/answers",
                    json={"nodeId": "gp-hearing", "answer": "no"})
        before = client.get(f"/api/sessions/{pid}").json()
        restarted = TestClient(create_app(config()))
        assert restarted.get(f"/api/sessions/{pid}").json() == before

        # private version inaccessible without its token
        flip = restarted.put("/api/admin/models/fig-demo/1.0/visibility",
                             json={"visibility": "private"},
                             headers={"X-Admin-Token": "acceptance-admin"})
        token = flip.json()["accessToken"]
        assert restarted.get("/api/models").json()["models"] == []
        assert restarted.post("/api/models/fig-demo/1.0/sessions",
                              json={}).status_code == 403
        assert restarted.post("/api/models/fig-demo/1.0/sessions?key=wrong",
                              json={}).status_code == 403
        assert restarted.post(f"/api/models/fig-demo/1.0/sessions?key={token}",
                              json={}).status_code == 201

from __future__ import annotations

from pathlib import Path

import pytest

from policyspace.model import PolicyModel

REPO_ROOT = Path(__file__).resolve().parents[1]
FIG_DEMO_DIR = REPO_ROOT / "models" / "fig-demo"


@pytest.fixture(scope="session")
def fig_demo() -> PolicyModel:
    """The canonical demo model: two-axis space, three-question graph,
    aid-plan inferencer, English localization."""
    model = PolicyModel.load(FIG_DEMO_DIR)
    assert model.is_valid, [str(d) for d in model.diagnostics]
    return model


@pytest.fixture(scope="session")
def fig_demo_no_vi() -> PolicyModel:
    """Same space and graph, no inferencer (for tests isolating graph effects)."""
    space_src = (FIG_DEMO_DIR / "space.ps").read_text()
    graph_src = (FIG_DEMO_DIR / "graph.dg").read_text()
    model = PolicyModel.from_sources(space_src, graph_src, model_id="fig-demo-plain")
    assert model.is_valid, [str(d) for d in model.diagnostics]
    return model


def location(model: PolicyModel, **coords):
    return model.space.location(**coords)

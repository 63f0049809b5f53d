"""Record real interview-service responses as JSON fixtures for the UI
contract tests. Run from the repository root:

    python3 frontend/tests/record_fixtures.py
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from policyspace.service.app import create_app
from policyspace.service.config import ServiceConfig

HERE = Path(__file__).resolve().parent
FIXTURES = HERE / "fixtures"
REPO = HERE.parents[1]


def record() -> None:
    FIXTURES.mkdir(exist_ok=True)
    config = ServiceConfig(
        storage_dir=Path(tempfile.mkdtemp()) / "storage",
        admin_token="recording",
        preload_models=[str(REPO / "models" / "fig-demo")],
    )
    client = TestClient(create_app(config))

    def save(name: str, payload) -> None:
        (FIXTURES / name).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")

    save("models-index.json", client.get("/api/models").json())

    def run_path(answers: list[tuple[str, str]]):
        created = client.post("/api/models/fig-demo/1.0/sessions",
                              json={"locale": "en"}).json()
        steps = [created]
        sid = created["sessionId"]
        for node, answer in answers:
            steps.append(client.post(f"/api/sessions/{sid}/answers",
                                     json={"nodeId": node, "answer": answer}).json())
        return sid, steps

    _, steps = run_path([])
    save("session-create.json", steps[0])

    sid, steps = run_path([("gp-hearing", "no"), ("gp-hearing-details", "no"),
                           ("gp-complaint", "no")])
    save("path-no-no-no.json", steps)
    revised = client.post(f"/api/sessions/{sid}/revise",
                          json={"index": 0, "answer": "yes"}).json()
    save("revise-after-no-no-no.json", revised)

    _, steps = run_path([("gp-hearing", "yes"), ("gp-hearing-details", "no"),
                         ("gp-complaint", "no")])
    save("path-yes-no-no.json", steps)

    _, steps = run_path([("gp-hearing", "no"), ("gp-hearing-details", "yes")])
    save("path-no-yes.json", steps)

    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    record()

"""Record real HTTP exchanges for the webui contract tests.

Drives the decision-support API (in-process, fixed clock) through the
scenarios the vitest suite replays, and writes every request/response pair
to tests/fixtures/exchanges.json. Rerun after any API change:

    python3 scripts/record_fixtures.py
"""

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from housing_dss.api import create_app
from housing_dss.persistence import FileFormat, dump_applications, load_applications, packaged_data

FIXED_TS = "2026-01-05T09:30:00Z"
OUT_PATH = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "exchanges.json"

# The reference judgment set, in grid entry order.
JUDGMENTS = [
    ("CP", "DD", 3), ("CP", "EC", 4), ("CP", "LTP", 4), ("CP", "OP", 3),
    ("DD", "EC", 2), ("DD", "LTP", 2), ("DD", "OP", 1),
    ("EC", "LTP", 1), ("EC", "OP", 0.5), ("LTP", "OP", 0.5),
]

UNIFORM_WEIGHTS = {c: 0.2 for c in ("CP", "DD", "EC", "LTP", "OP")}
DEGENERATE_WEIGHTS = {"CP": 1.0, "DD": 0.0, "EC": 0.0, "LTP": 0.0, "OP": 0.0}

_OMIT = object()


def applications() -> list[dict]:
    cohorts = load_applications(packaged_data("applications_computer_science.csv"))
    return json.loads(dump_applications(cohorts, FileFormat.JSON))


class Recorder:
    """Plays requests against a fresh app and keeps the exchange log."""

    def __init__(self):
        self.client = TestClient(create_app(clock=lambda: FIXED_TS))
        self.exchanges: list[dict] = []

    def call(self, method: str, path: str, body=_OMIT):
        kwargs = {} if body is _OMIT else {"json": body}
        response = getattr(self.client, method.lower())(path, **kwargs)
        self.exchanges.append(
            {
                "method": method,
                "path": path,
                "body": None if body is _OMIT else body,
                "status": response.status_code,
                "response": response.json(),
            }
        )
        return response.json()

    def put_judgments(self, session_id: str, judgments=JUDGMENTS):
        for first, second, value in judgments:
            self.call(
                "PUT",
                f"/sessions/{session_id}/judgments",
                {"first": first, "second": second, "value": value},
            )

    def cohort_and_screen(self, records) -> str:
        created = self.call("POST", "/cohorts", {"applications": records})
        cohort_id = created["id"]
        self.call("GET", f"/cohorts/{cohort_id}")
        self.call("POST", f"/cohorts/{cohort_id}/screen")
        self.call("GET", f"/cohorts/{cohort_id}")
        return cohort_id


def scenario_cohort_screen(records) -> list[dict]:
    recorder = Recorder()
    recorder.cohort_and_screen(records)
    return recorder.exchanges


def scenario_elicitation() -> list[dict]:
    recorder = Recorder()
    session = recorder.call("POST", "/sessions", {})
    sid = session["id"]
    recorder.put_judgments(sid)
    # Clearing a judgment drops both cells and the consistency report.
    recorder.call("PUT", f"/sessions/{sid}/judgments",
                  {"first": "EC", "second": "OP", "value": None})
    recorder.call("PUT", f"/sessions/{sid}/judgments",
                  {"first": "EC", "second": "OP", "value": 0.5})
    return recorder.exchanges


def scenario_weights_endpoint() -> list[dict]:
    recorder = Recorder()
    session = recorder.call("POST", "/sessions", {})
    sid = session["id"]
    recorder.call("GET", f"/sessions/{sid}/weights")  # incomplete -> 409
    recorder.put_judgments(sid)
    recorder.call("GET", f"/sessions/{sid}/weights")
    return recorder.exchanges


def scenario_gating(records) -> list[dict]:
    recorder = Recorder()
    cohort_id = recorder.cohort_and_screen(records)
    session = recorder.call("POST", "/sessions", {})
    sid = session["id"]
    recorder.put_judgments(sid)
    # A stronger CP-vs-DD judgment nudges CR up but stays acceptable.
    recorder.call("PUT", f"/sessions/{sid}/judgments",
                  {"first": "CP", "second": "DD", "value": 9})
    recorder.call("PUT", f"/sessions/{sid}/judgments",
                  {"first": "CP", "second": "DD", "value": 3})
    # EC-vs-LTP at 6 pushes CR just over the 0.1 threshold.
    recorder.call("PUT", f"/sessions/{sid}/judgments",
                  {"first": "EC", "second": "LTP", "value": 6})
    recorder.call("POST", f"/cohorts/{cohort_id}/rank", {"session_id": sid})
    recorder.call("POST", f"/cohorts/{cohort_id}/rank",
                  {"session_id": sid, "force": True})
    recorder.call("PUT", f"/sessions/{sid}/judgments",
                  {"first": "EC", "second": "LTP", "value": 1})
    recorder.call("POST", f"/cohorts/{cohort_id}/rank", {"session_id": sid})
    return recorder.exchanges


def scenario_explorer(records) -> list[dict]:
    recorder = Recorder()
    cohort_id = recorder.cohort_and_screen(records)
    session = recorder.call("POST", "/sessions", {})
    sid = session["id"]
    recorder.put_judgments(sid)
    recorder.call("POST", f"/cohorts/{cohort_id}/rank", {"session_id": sid})
    recorder.call("GET", f"/cohorts/{cohort_id}/compare")
    recorder.call("POST", f"/cohorts/{cohort_id}/allocate", {"capacity": 20})
    recorder.call("POST", f"/cohorts/{cohort_id}/allocate",
                  {"capacity": 19, "basis": "average_rank"})
    recorder.call("POST", f"/cohorts/{cohort_id}/allocate",
                  {"capacity": 21, "basis": "average_rank"})
    recorder.call("POST", f"/cohorts/{cohort_id}/rank", {"weights": UNIFORM_WEIGHTS})
    recorder.call("POST", f"/cohorts/{cohort_id}/rank", {"session_id": sid})
    recorder.call("POST", f"/cohorts/{cohort_id}/rank", {"weights": DEGENERATE_WEIGHTS})
    recorder.call("POST", f"/cohorts/{cohort_id}/rank", {"session_id": sid})
    return recorder.exchanges


def scenario_errors() -> list[dict]:
    recorder = Recorder()
    recorder.call("GET", "/cohorts/c9")
    recorder.call("GET", "/sessions/s9")
    recorder.call("POST", "/sessions", {"criteria": ["CP"]})
    return recorder.exchanges


def main() -> int:
    records = applications()
    fixtures = {
        "recorded_with": "scripts/record_fixtures.py",
        "clock": FIXED_TS,
        "scenarios": {
            "cohort_screen": scenario_cohort_screen(records),
            "elicitation": scenario_elicitation(),
            "weights_endpoint": scenario_weights_endpoint(),
            "gating": scenario_gating(records),
            "explorer": scenario_explorer(records),
            "errors": scenario_errors(),
        },
    }
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    OUT_PATH.write_text(json.dumps(fixtures, indent=1) + "\n", "utf-8")
    total = sum(len(v) for v in fixtures["scenarios"].values())
    print(f"wrote {OUT_PATH} ({total} exchanges)")
    return 0


if __name__ == "__main__":
    sys.exit(main())

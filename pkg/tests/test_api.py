"""Tests for the HTTP API."""

import json

import pytest
from fastapi.testclient import TestClient

from meetscore.main import app

client = TestClient(app)

SCORE = "/api/v1/score"


def record(speaker, words, start, end, session_id="s1"):
    return {"session_id": session_id, "speaker": speaker, "start_time": start, "end_time": end, "words": words}


REFERENCE = [record("A", "good morning everyone", 0.0, 2.0), record("B", "hello there", 1.5, 3.0)]


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_info_lists_metrics():
    response = client.get("/api/v1/info")
    assert response.json()["metrics"] == ["wer", "cpwer", "orcwer", "mimower", "tcpwer"]


def test_score_records():
    hypothesis = [record("1", "good morning everyone", 0.1, 2.0), record("2", "hello", 1.5, 3.0)]
    response = client.post(f"{SCORE}/tcpwer", json={"reference": REFERENCE, "hypothesis": hypothesis})
    assert response.status_code == 200
    report = response.json()
    assert (report["errors"], report["length"], report["deletions"]) == (1, 5, 1)
    assert report["per_session"]["s1"]["assignment"]["pairs"] == [["A", "1"], ["B", "2"]]


def test_infinite_collar():
    hypothesis = [record("1", "good morning everyone hello there", 50.0, 52.0)]
    payload = {"reference": REFERENCE, "hypothesis": hypothesis, "collar": "inf", "detail": "summary"}
    report = client.post(f"{SCORE}/tcpwer", json=payload).json()
    # A matched with two insertions, B deleted
    assert report["errors"] == 4
    assert "per_session" not in report


def test_scoring_precondition_is_a_bad_request():
    hypothesis = [record("1", "a", 0.0, 2.0), record("1", "b", 1.0, 3.0)]
    response = client.post(f"{SCORE}/tcpwer", json={"reference": REFERENCE, "hypothesis": hypothesis})
    assert response.status_code == 400
    assert "overlap-within-stream" in response.json()["detail"]


def test_invalid_record_is_unprocessable():
    response = client.post(f"{SCORE}/cpwer", json={"reference": [{"session_id": "s1"}], "hypothesis": []})
    assert response.status_code == 422


def test_negative_collar_is_unprocessable():
    payload = {"reference": REFERENCE, "hypothesis": [], "collar": -1}
    assert client.post(f"{SCORE}/tcpwer", json=payload).status_code == 422


def test_unknown_metric():
    response = client.post(f"{SCORE}/bleu", json={"reference": [], "hypothesis": []})
    assert response.status_code == 422


def test_score_files():
    stm = b"s1 1 A 0.0 2.0 good morning everyone\ns1 1 B 1.5 3.0 hello there\n"
    hypothesis = json.dumps([record("1", "hello there good morning everyone", 0.0, 3.0)]).encode()
    response = client.post(
        f"{SCORE}/mimower/files",
        files={"reference": ("ref.stm", stm), "hypothesis": ("hyp.json", hypothesis)},
    )
    assert response.status_code == 200
    assert response.json()["errors"] == 0


def test_score_files_reports_the_file():
    response = client.post(
        f"{SCORE}/cpwer/files",
        files={"reference": ("ref.stm", b"s1 1 A 0.0\n"), "hypothesis": ("hyp.json", b"[]")},
    )
    assert response.status_code == 422
    assert response.json()["detail"].startswith("ref.stm:1:")


@pytest.mark.parametrize("style,timed,metric", [
    ("diarization", "false", "cpwer"),
    ("diarization", "true", "tcpwer"),
    ("css", "false", "orcwer"),
    ("sot", "false", "mimower"),
])
def test_recommend(style, timed, metric):
    response = client.get(f"{SCORE}/recommend/{style}", params={"timed": timed})
    assert response.json()["metric"] == metric

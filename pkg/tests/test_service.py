import pytest
from fastapi.testclient import TestClient

from viskop import execute, parse_program, plan_merge
from viskop.induction import template_binding
from viskop.service import ServiceState, create_app


@pytest.fixture(scope="module")
def client(borders_kb, borders_idx):
    state = ServiceState(kb=borders_kb, idx=borders_idx, binding=template_binding(demo=True))
    return TestClient(create_app(state))


def test_healthz_ready(client):
    response = client.get("/healthz")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_healthz_before_load():
    bare = TestClient(create_app(ServiceState()))
    assert bare.get("/healthz").status_code == 503
    assert bare.post("/api/run", json={"program": []}).status_code == 503


def test_run_corrected_program_with_trace(client, corrected_doc):
    response = client.post("/api/run", json={"program": corrected_doc, "trace": True})
    assert response.status_code == 200
    body = response.json()
    assert body["answer"] == "3"
    assert len(body["trace"]) == 8
    and_entry = next(e for e in body["trace"] if e["function"] == "And")
    assert sorted(and_entry["preview"]) == ["Belgium", "Luxembourg", "Switzerland"]
    assert {"index", "function", "inputs", "kind", "count", "preview", "elapsed_us"} <= set(and_entry)


def test_run_without_trace(client, corrected_doc):
    body = client.post("/api/run", json={"program": corrected_doc}).json()
    assert body == {"answer": "3"}


def test_run_validation_error(client):
    from conftest import read_fixture

    response = client.post("/api/run", json={"program": read_fixture("count_into_qfilter.json")})
    assert response.status_code == 422
    body = response.json()
    assert body["code"] == "validation_error"
    assert any("INT not acceptable" in d["message"] and d["node"] == 2 for d in body["diagnostics"])


def test_run_runtime_error_carries_node_index(client, faulty_doc):
    response = client.post("/api/run", json={"program": faulty_doc})
    assert response.status_code == 422
    body = response.json()
    assert body["code"] == "runtime_error"
    assert body["node_index"] == 4
    assert "statement is subject of" in body["message"]


def test_run_malformed_body_is_bad_request(client):
    response = client.post("/api/run", content=b"{not json", headers={"Content-Type": "application/json"})
    assert response.status_code == 400
    assert response.json()["code"] == "bad_request"
    response = client.post("/api/run", json={"trace": True})
    assert response.status_code == 400


def test_run_parse_error(client):
    response = client.post("/api/run", json={"program": [{"function": "Nope", "inputs": [], "dependencies": []}]})
    assert response.status_code == 422
    assert response.json()["code"] == "parse_error"


def test_parse_question_demo_flow(client):
    response = client.post("/api/parse", json={"question": "How many countries share borders with both Germany and France?"})
    assert response.status_code == 200
    program = response.json()["program"]
    assert len(program) == 8
    assert program[6]["function"] == "Or"
    assert program[4]["inputs"] == ["statement is subject of", "forward"]


def test_parse_empty_question(client):
    assert client.post("/api/parse", json={"question": "  "}).status_code == 400


def test_parse_unmatched_question(client):
    response = client.post("/api/parse", json={"question": "Why is the sky blue?"})
    assert response.status_code == 422
    assert response.json()["code"] == "parse_error"


def test_validate_endpoint(client, corrected_doc):
    body = client.post("/api/validate", json={"program": corrected_doc}).json()
    assert body["ok"] is True and body["diagnostics"] == []
    two_roots = [
        {"function": "Find", "inputs": ["A"], "dependencies": []},
        {"function": "FindAll", "inputs": [], "dependencies": []},
    ]
    body = client.post("/api/validate", json={"program": two_roots}).json()
    assert body["ok"] is False
    assert any("orphan" in d["message"] for d in body["diagnostics"])


def test_completion_endpoint(client):
    body = client.get("/api/completion", params={"kind": "relation", "prefix": "share"}).json()
    assert body["candidates"] == ["shares border with"]
    body = client.get("/api/completion", params={"kind": "concept", "prefix": "zzz"}).json()
    assert body["candidates"] == []
    body = client.get("/api/completion", params={"kind": "entity", "prefix": "", "limit": 1}).json()
    assert len(body["candidates"]) == 1
    assert client.get("/api/completion", params={"kind": "galaxy", "prefix": "x"}).status_code == 400


def test_meta_endpoint(client):
    body = client.get("/api/meta").json()
    assert body["stats"] == {
        "entity_count": 7,
        "concept_count": 1,
        "relation_name_count": 1,
        "attribute_key_count": 1,
    }
    assert len(body["operators"]) == 27
    relate = next(op for op in body["operators"] if op["name"] == "Relate")
    assert relate["dependencies"] == ["E*"]
    assert relate["output"] == "ENTITY_SET_WITH_FACTS"
    assert relate["args"][0]["complete"] == "relation"
    assert relate["args"][1]["choices"] == ["forward", "backward"]
    filter_concept = next(op for op in body["operators"] if op["name"] == "FilterConcept")
    assert filter_concept["output"] == "SAME_AS_INPUT"
    qfilter = next(op for op in body["operators"] if op["name"] == "QFilterStr")
    assert qfilter["dependencies"] == ["ENTITY_SET_WITH_FACTS"]


def test_cors_enabled_for_the_editor_origin(client):
    response = client.get("/api/meta", headers={"Origin": "http://localhost:5173"})
    assert response.headers.get("access-control-allow-origin") == "*"
    preflight = client.options(
        "/api/run",
        headers={
            "Origin": "http://localhost:5173",
            "Access-Control-Request-Method": "POST",
            "Access-Control-Request-Headers": "content-type",
        },
    )
    assert preflight.status_code == 200
    assert preflight.headers.get("access-control-allow-origin") == "*"


def test_facade_adds_nothing(client, borders_kb, borders_idx, corrected_doc, faulty_doc):
    for document in (corrected_doc, [{"function": "FindAll", "inputs": [], "dependencies": []}]):
        via_api = client.post("/api/run", json={"program": document}).json()["answer"]
        direct = execute(borders_kb, borders_idx, plan_merge(parse_program(document))).answer
        assert via_api == direct

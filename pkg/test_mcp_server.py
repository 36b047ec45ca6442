"""
End-to-end checks of the JSON-RPC service through the Flask test client
"""
import pytest

import routes  # noqa: F401
from app import app
from mcp_server import INVALID_PARAMS, METHOD_NOT_FOUND, SCHEMA, mcp_server


@pytest.fixture
def client():
    app.config["TESTING"] = True
    with app.test_client() as client:
        yield client


def call_method(client, method, params=None, request_id=1):
    """POST one JSON-RPC request and return the decoded response"""
    payload = {
        "jsonrpc": "2.0",
        "method": method,
        "params": params or {},
        "id": request_id,
    }
    response = client.post("/mcp", json=payload)
    assert response.status_code == 200
    return response.get_json()


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    body = response.get_json()
    assert body["status"] == "ok"
    assert body["schema"] == SCHEMA
    assert "haar.integrate" in body["methods"]


def test_measure(client):
    result = call_method(client, "haar.measure", {"group": "SU(3)"})["result"]
    assert result["success"] is True
    assert result["schema"] == SCHEMA
    assert result["N"] == 3 and result["M"] == 5
    assert result["constant"] == {"num": 16, "den": 1}


def test_integrate(client):
    response = call_method(client, "haar.integrate", {"group": "SU(2)", "expr": "a[1,1]*a[2,2]"}, request_id=7)
    assert response["id"] == 7
    result = response["result"]
    assert result["integral"] == {"re": {"num": 1, "den": 2}, "im": {"num": 0, "den": 1}}
    assert result["approximate"] == {"re": 0.5, "im": 0.0}


def test_integrate_with_words(client):
    result = call_method(
        client, "haar.integrate", {"group": "SU(3)", "words": [[2, 1, 2]], "expr": "a[1,1]*c[1,1]"}
    )["result"]
    assert result["integral"]["re"] == {"num": 1, "den": 3}


def test_reduce_and_spectrum(client):
    params = {"group": "SU(2)", "expr": "a[1,1]"}
    reduced = call_method(client, "haar.reduce", params)["result"]
    assert reduced["variables"] == ["x1", "w1", "z1"]
    assert len(reduced["reduced"]["terms"]) == 2

    spectrum = call_method(client, "haar.spectrum", params)["result"]
    assert spectrum["circle_variables"] == ["w1", "z1"]
    assert spectrum["spectrum"] == [[1, 1]]


def test_hull(client):
    inside = call_method(client, "haar.hull", {"spectrum": "[(1,0),(-1,0)]"})["result"]
    assert inside["verdict"] == "origin_inside"
    outside = call_method(client, "haar.hull", {"spectrum": [[1, 0], [0, 1]]})["result"]
    assert outside["verdict"] == "origin_outside"
    assert outside["separating_vector"] == [{"num": 1, "den": 1}, {"num": 1, "den": 1}]


def test_hull_rejects_fractional_coordinates(client):
    response = call_method(client, "haar.hull", {"spectrum": [[0.9, 0], [-0.9, 0.1]]})
    assert response["error"]["code"] == INVALID_PARAMS
    assert response["error"]["data"]["field"] == "spectrum"


def test_measure_rejects_bad_form_scale(client):
    response = call_method(client, "haar.measure", {"group": "SU(2)", "form_scale": "abc"})
    assert response["error"]["code"] == INVALID_PARAMS
    assert response["error"]["data"]["field"] == "form_scale"


def test_mathieu_and_power_sequence(client):
    report = call_method(client, "haar.mathieu", {"group": "SU(2)", "f": "a[1,1]", "g": "c[1,1]", "n_max": 4})
    assert report["result"]["n0"] == 2
    assert report["result"]["conclusion_verified"] is True

    powers = call_method(
        client, "haar.power_sequence", {"group": "SU(2)", "expr": "a[1,1]*c[1,1] - 1/2", "n_max": 2}
    )["result"]
    assert powers["n_max"] == 2
    assert powers["integrals"][1]["re"] == {"num": 1, "den": 12}


def test_numeric_methods(client):
    quad = call_method(client, "haar.quadrature", {"group": "SU(2)", "expr": "a[1,2]*c[1,2]"})["result"]
    assert quad["expression_degree"] == 2
    assert quad["estimate"]["re"] == pytest.approx(0.5, abs=1e-12)

    mc = call_method(
        client, "haar.monte_carlo", {"group": "SU(2)", "expr": "a[1,2]*c[1,2]", "samples": 2000, "seed": 5}
    )["result"]
    assert mc["samples_or_nodes"] == 2000
    assert mc["seed"] == 5


def test_verify_and_groups(client):
    verify = call_method(client, "haar.verify", {"suite": "normalization"})["result"]
    assert verify["passed"] is True
    assert verify["suites"][0]["suite"] == "normalization"

    groups = call_method(client, "haar.groups")["result"]
    assert groups["types"]["E"] == "rank in {6, 7, 8}"
    assert "all" in groups["suites"]


def test_invalid_params_carry_error_codes(client):
    response = call_method(client, "haar.integrate", {"group": "SU(2)", "expr": "a[1,1]+*"})
    assert response["error"]["code"] == INVALID_PARAMS
    assert response["error"]["data"]["code"] == "PARSE_ERROR"
    assert response["error"]["data"]["position"] == 7

    response = call_method(client, "haar.integrate", {"group": "G2", "expr": "a[1,1]"})
    assert response["error"]["data"]["code"] == "UNSUPPORTED_FACTOR"

    response = call_method(client, "haar.hull", {"spectrum": []})
    assert response["error"]["data"]["code"] == "EMPTY_SPECTRUM"

    response = call_method(client, "haar.measure", {})
    assert response["error"]["data"]["field"] == "group"


def test_unknown_method(client):
    response = call_method(client, "haar.nothing")
    assert response["error"]["code"] == METHOD_NOT_FOUND


def test_batch_and_malformed_requests(client):
    batch = [
        {"jsonrpc": "2.0", "method": "haar.groups", "id": 1},
        {"jsonrpc": "2.0", "method": "haar.measure", "params": {"group": "T^2"}, "id": 2},
    ]
    response = client.post("/mcp", json=batch)
    assert [item["id"] for item in response.get_json()] == [1, 2]

    response = client.post("/mcp", data="not json", content_type="application/json")
    assert response.status_code == 400
    assert response.get_json()["error"]["code"] == -32700

    assert mcp_server.handle_request(["not", "a", "dict"])["error"]["code"] == -32600

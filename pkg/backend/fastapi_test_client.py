#!/usr/bin/env python3
"""
Sequential smoke runner for the idexp HTTP API.
Start the server first: uvicorn backend.backend:app
Requires: pip install requests
"""

import json
import sys
from typing import Optional

import requests

BASE_URL = "http://localhost:8000"


def make_headers():
    return {"Accept": "application/json", "Content-Type": "application/json"}


def post(url: str, path: str, json_body: Optional[dict] = None, params: Optional[dict] = None) -> requests.Response:
    full = url.rstrip("/") + "/" + path.lstrip("/")
    return requests.post(full, json=json_body, params=params, headers=make_headers(), timeout=120)


def get(url: str, path: str = "") -> requests.Response:
    full = url.rstrip("/") + ("/" + path.lstrip("/") if path else "")
    return requests.get(full, headers=make_headers(), timeout=30)


def pretty_print_response(resp: requests.Response, expected: int) -> bool:
    try:
        data = resp.json()
        print(json.dumps(data, indent=2, sort_keys=True))
    except ValueError:
        print(resp.text)
    return resp.status_code == expected


def run_test(description: str, expected: int, func, *args, **kwargs) -> bool:
    print(f"\nRunning test: {description}")
    try:
        response = func(*args, **kwargs)
        passed = pretty_print_response(response, expected)
    except requests.RequestException as e:
        print(f"Test '{description}' FAILED with error: {e}")
        return False
    print(f"Test '{description}' {'PASSED' if passed else 'FAILED'}")
    return passed


def main(base_url: str = BASE_URL) -> int:
    results = [
        run_test("GET /", 200, get, base_url),
        run_test("GET /commands", 200, get, base_url, "commands"),
        run_test("GET /fixtures", 200, get, base_url, "fixtures"),
    ]

    fixture = get(base_url, "fixtures/delta-five-z")
    if fixture.status_code != 200:
        print("Could not load fixture delta-five-z.")
        return 1
    document = fixture.json()["document"]

    results.append(run_test("POST /run/poly", 200, post, base_url, "run/poly", json_body=document))
    results.append(run_test("POST /run/prepare", 200, post, base_url, "run/prepare", json_body=document))
    results.append(run_test("POST /run/delta (degree bound 16)", 200, post, base_url, "run/delta",
                            json_body=document, params={"degree_bound": 16}))

    broken = dict(document, pairs=[{"generators": ["y^2 +"], "b": "2"}])
    results.append(run_test("POST /run/poly with a broken polynomial", 400, post, base_url, "run/poly",
                            json_body=broken))
    results.append(run_test("POST /run/unknown", 404, post, base_url, "run/unknown", json_body=document))

    print(f"\n{sum(results)} of {len(results)} checks passed.")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else BASE_URL))

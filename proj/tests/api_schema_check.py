# Copyright (C) 2026 The goalcoach Authors
# SPDX-License-Identifier: Apache-2.0

"""Drives a live `goalcoach serve` and validates every response body
against api/openapi.json. Usage: api_schema_check.py GOALCOACH_BIN OPENAPI_JSON"""

import json
import socket
import subprocess
import sys
import time
import urllib.error
import urllib.request

import jsonschema
from referencing import Registry, Resource
from referencing.jsonschema import DRAFT202012


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def main():
    binary, spec_path = sys.argv[1], sys.argv[2]
    with open(spec_path) as f:
        doc = json.load(f)
    registry = Registry().with_resource("urn:api", Resource.from_contents(doc, default_specification=DRAFT202012))
    port = free_port()
    base = f"http://127.0.0.1:{port}"
    server = subprocess.Popen([binary, "--log-level", "warn", "serve", "--port", str(port)])
    failures = []

    def call(method, path, body=None):
        data = None if body is None else json.dumps(body).encode()
        req = urllib.request.Request(base + path, method=method, data=data,
                                     headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req, timeout=10) as r:
                return r.status, r.read().decode()
        except urllib.error.HTTPError as e:
            return e.code, e.read().decode()

    def check(method, path, schema, status, body=None):
        got, text = call(method, path, body)
        if got != status:
            failures.append(f"{method} {path}: status {got}, want {status}")
        validator = jsonschema.Draft202012Validator({"$ref": "urn:api#/components/schemas/" + schema},
                                                    registry=registry)
        for err in validator.iter_errors(json.loads(text)):
            failures.append(f"{method} {path}: {list(err.path)}: {err.message}")
        return json.loads(text)

    try:
        for _ in range(100):
            try:
                socket.create_connection(("127.0.0.1", port), timeout=0.1).close()
                break
            except OSError:
                time.sleep(0.05)
        check("GET", "/health", "Health", 200)
        sid = check("POST", "/sessions", "SessionCreated", 201, {"tau": 0.6})["session_id"]
        check("GET", f"/sessions/{sid}/goal?point=forward", "Error", 409)
        for text in ["I want to walk 3000 steps on Monday and Friday.",
                     "I'm sorry I didn't go to work today I have a massive migraine headache.",
                     "In the morning.", "8", "Yes."]:
            check("POST", f"/sessions/{sid}/patient-message", "TurnResult", 200, {"text": text})
        check("POST", f"/sessions/{sid}/coach-message", "CoachAck", 200, {"text": "Great."})
        check("POST", f"/sessions/{sid}/patient-message", "Error", 422, {"text": ""})
        check("GET", f"/sessions/{sid}/goal?point=forward", "Goal", 200)
        check("GET", f"/sessions/{sid}/goal", "Goal", 200)
        check("GET", f"/sessions/{sid}", "SessionSummary", 200)
        check("POST", f"/sessions/{sid}/close", "SessionSummary", 200)
        check("GET", f"/sessions/{sid}/goal?point=backward", "Goal", 200)
        check("POST", f"/sessions/{sid}/close", "Error", 409)
        check("POST", "/sessions", "Error", 400, {"tau": 1.5})
        check("GET", "/sessions/s_unknown", "Error", 404)
    finally:
        server.terminate()
        server.wait(timeout=10)
    for f in failures:
        print("FAIL", f)
    print(f"{len(failures)} schema failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

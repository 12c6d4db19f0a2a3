"""Built-in stub sidecar: ``python -m spikecast.fmstub``.

Speaks the bridge wire protocol on stdin/stdout with the deterministic stub
rule from :mod:`spikecast.bridge`, so every FM-backed command and test runs
without the real model sidecar installed.  Only protocol lines are written
to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import json
import math
import sys
from typing import IO

from .bridge import stub_forecast

MODEL_ID = "stub"


def _response(payload: dict) -> str:
    return json.dumps(payload, separators=(",", ":"))


def _error(req_id: int, message: str) -> str:
    return _response({"id": req_id, "ok": False, "error": message})


def handle_line(line: str) -> str:
    """Produce the single-line response for one request line."""
    try:
        request = json.loads(line)
    except json.JSONDecodeError:
        return _error(-1, "malformed request: not valid JSON")
    if not isinstance(request, dict):
        return _error(-1, "malformed request: not a JSON object")
    req_id = request.get("id")
    if not isinstance(req_id, int):
        return _error(-1, "malformed request: missing integer id")

    op = request.get("op")
    if op == "ping":
        return _response({"id": req_id, "ok": True, "model": MODEL_ID})
    if op != "forecast":
        return _error(req_id, f"unknown op {op!r}")

    series = request.get("series")
    horizon = request.get("horizon")
    if (
        not isinstance(series, list)
        or len(series) == 0
        or not all(isinstance(v, (int, float)) and math.isfinite(v) for v in series)
    ):
        return _error(req_id, "forecast requires a non-empty numeric series")
    if not isinstance(horizon, int) or horizon < 1:
        return _error(req_id, "forecast requires horizon >= 1")
    freq = request.get("freq", 0)
    if freq not in (0, 1):
        return _error(req_id, "freq must be 0 or 1")

    values = stub_forecast([float(v) for v in series], horizon)
    return _response({"id": req_id, "ok": True, "forecast": values})


def serve(stdin: IO[str] | None = None, stdout: IO[str] | None = None) -> None:
    """Answer requests line by line until the input closes."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    for line in stdin:
        if not line.strip():
            continue
        stdout.write(handle_line(line) + "\n")
        stdout.flush()


def main() -> int:
    print("spikecast stub bridge ready", file=sys.stderr)
    serve()
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Request loop and wire protocol for the forecasting sidecar.

Protocol rules:

* UTF-8, one JSON object per LF-terminated line, responses in request order.
* ``stdout`` carries protocol lines only; all diagnostics go to ``stderr``.
* A malformed line never kills the process: it yields
  ``{"id": -1, "ok": false, "error": ...}`` and the loop continues.
* In real mode a model-load failure is reported through ``ping``
  (``ok`` false) rather than by exiting, so clients can probe safely.

The stub rule is the mean of the trailing ``min(8, len)`` values repeated
``horizon`` times.
"""

from __future__ import annotations

import argparse
import json
import math
import socket
import sys
from typing import IO, Sequence

DEFAULT_CHECKPOINT = "google/timesfm-1.0-200m"
STUB_MODEL_ID = "stub"
STUB_WINDOW = 8


def stub_forecast(series: Sequence[float], horizon: int) -> list[float]:
    """Mean of the trailing min(8, len) values, repeated horizon times."""
    if len(series) == 0:
        raise ValueError("stub forecast requires a non-empty series")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    window = list(series[-STUB_WINDOW:])
    mean = sum(window) / len(window)
    return [mean] * horizon


def _encode(payload: dict) -> str:
    return json.dumps(payload, separators=(",", ":"))


class BridgeServer:
    """One-request-at-a-time protocol handler for stub or real mode."""

    def __init__(self, mode: str = "stub", checkpoint: str = DEFAULT_CHECKPOINT):
        if mode not in ("stub", "real"):
            raise ValueError(f"mode must be 'stub' or 'real', got {mode!r}")
        self.mode = mode
        self.checkpoint = checkpoint
        self._backend = None
        self._load_error: str | None = None
        if mode == "real":
            try:
                from .real import RealBackend

                self._backend = RealBackend(checkpoint)
            except Exception as exc:  # surfaced via ping, never fatal
                self._load_error = f"{type(exc).__name__}: {exc}"
                print(f"fm-bridge: model load failed: {self._load_error}", file=sys.stderr)

    def _error(self, req_id: int, message: str) -> str:
        return _encode({"id": req_id, "ok": False, "error": message})

    def handle_line(self, line: str) -> str:
        """One request line in, one response line out (no trailing newline)."""
        try:
            request = json.loads(line)
        except json.JSONDecodeError:
            return self._error(-1, "malformed request: not valid JSON")
        if not isinstance(request, dict):
            return self._error(-1, "malformed request: not a JSON object")
        req_id = request.get("id")
        if not isinstance(req_id, int):
            return self._error(-1, "malformed request: missing integer id")

        op = request.get("op")
        if op == "ping":
            if self.mode == "real" and self._backend is None:
                return self._error(req_id, f"model load failed: {self._load_error}")
            model = STUB_MODEL_ID if self.mode == "stub" else self.checkpoint
            return _encode({"id": req_id, "ok": True, "model": model})
        if op != "forecast":
            return self._error(req_id, f"unknown op {op!r}")

        series = request.get("series")
        horizon = request.get("horizon")
        freq = request.get("freq", 0)
        if (
            not isinstance(series, list)
            or len(series) == 0
            or not all(isinstance(v, (int, float)) and math.isfinite(v) for v in series)
        ):
            return self._error(req_id, "forecast requires a non-empty numeric series")
        if not isinstance(horizon, int) or horizon < 1:
            return self._error(req_id, "forecast requires horizon >= 1")
        if freq not in (0, 1):
            return self._error(req_id, "freq must be 0 or 1")

        values = [float(v) for v in series]
        if self.mode == "stub":
            forecast = stub_forecast(values, horizon)
        else:
            if self._backend is None:
                return self._error(req_id, f"model load failed: {self._load_error}")
            try:
                forecast = self._backend.forecast(values, horizon, freq)
            except Exception as exc:
                return self._error(req_id, f"model error: {type(exc).__name__}: {exc}")
            if len(forecast) != horizon:
                return self._error(
                    req_id,
                    f"model returned {len(forecast)} values for horizon {horizon}",
                )
        return _encode({"id": req_id, "ok": True, "forecast": forecast})

    def serve(self, stdin: IO[str] | None = None, stdout: IO[str] | None = None) -> None:
        """Answer requests until the input stream closes."""
        stdin = stdin if stdin is not None else sys.stdin
        stdout = stdout if stdout is not None else sys.stdout
        for line in stdin:
            if not line.strip():
                continue
            stdout.write(self.handle_line(line) + "\n")
            stdout.flush()

    def serve_tcp(self, host: str, port: int) -> None:
        """Same framing over TCP; one connection served at a time."""
        with socket.create_server((host, port)) as listener:
            print(f"fm-bridge: listening on {host}:{port}", file=sys.stderr)
            while True:
                conn, peer = listener.accept()
                print(f"fm-bridge: connection from {peer}", file=sys.stderr)
                with conn, conn.makefile("rw", encoding="utf-8", newline="\n") as stream:
                    self.serve(stream, stream)


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="fm-bridge",
        description="Forecasting sidecar: line-delimited JSON on stdin/stdout.",
    )
    parser.add_argument("--mode", choices=("real", "stub"), default="stub")
    parser.add_argument("--checkpoint", default=DEFAULT_CHECKPOINT)
    parser.add_argument(
        "--listen",
        metavar="HOST:PORT",
        help="serve over TCP instead of stdio (identical framing)",
    )
    args = parser.parse_args(argv)
    server = BridgeServer(mode=args.mode, checkpoint=args.checkpoint)
    if args.listen:
        host, sep, port = args.listen.rpartition(":")
        if not sep or not host:
            parser.error(f"--listen must be HOST:PORT, got {args.listen!r}")
        server.serve_tcp(host, int(port))
        return 0
    print(f"fm-bridge: ready ({args.mode} mode)", file=sys.stderr)
    server.serve()
    return 0


if __name__ == "__main__":
    sys.exit(main())

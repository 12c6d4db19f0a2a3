"""Client side of the forecasting bridge protocol, plus the reference stub rule.

The bridge is an external sidecar process (or TCP service) that answers
line-delimited JSON requests::

    {"id": 1, "op": "ping"}
    {"id": 2, "op": "forecast", "series": [...], "horizon": H, "freq": 0|1}

and replies one JSON object per line, in request order, echoing ``id``.
The client keeps exactly one request in flight per connection.
"""

from __future__ import annotations

import itertools
import json
import shlex
import socket
import subprocess
import sys
from typing import IO, Sequence

from .errors import BackendFailure

STUB_WINDOW = 8


def stub_forecast(series: Sequence[float], horizon: int) -> list[float]:
    """Deterministic stand-in forecast: mean of the trailing min(8, n) values.

    This is the reference implementation of the stub backend's rule; tests
    compare bridge responses against it bit for bit.
    """
    if len(series) == 0:
        raise ValueError("stub forecast requires a non-empty series")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    window = list(series[-STUB_WINDOW:])
    mean = sum(window) / len(window)
    return [mean] * horizon


def default_stub_command() -> str:
    """Launch command for the built-in stub sidecar."""
    return f"{shlex.quote(sys.executable)} -m spikecast.fmstub"


class BridgeClient:
    """Synchronous bridge connection over a subprocess's pipes or a TCP socket."""

    def __init__(
        self,
        reader: IO[str],
        writer: IO[str],
        proc: subprocess.Popen | None = None,
        sock: socket.socket | None = None,
    ):
        self._reader = reader
        self._writer = writer
        self._proc = proc
        self._sock = sock
        self._ids = itertools.count(1)
        self._closed = False

    @classmethod
    def spawn(cls, command: str) -> "BridgeClient":
        """Start a sidecar process and attach to its stdin/stdout."""
        argv = shlex.split(command)
        if not argv:
            raise BackendFailure("empty bridge launch command")
        try:
            # stderr is inherited (fd 2) so sidecar diagnostics stay visible
            proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=None,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise BackendFailure(f"could not launch bridge {command!r}: {exc}") from exc
        return cls(reader=proc.stdout, writer=proc.stdin, proc=proc)

    @classmethod
    def connect(cls, address: str) -> "BridgeClient":
        """Connect to a bridge listening on ``host:port``."""
        host, sep, port = address.rpartition(":")
        if not sep or not host:
            raise BackendFailure(f"bridge address must be host:port, got {address!r}")
        try:
            sock = socket.create_connection((host, int(port)), timeout=30)
        except (OSError, ValueError) as exc:
            raise BackendFailure(f"could not connect to bridge at {address}: {exc}") from exc
        stream = sock.makefile("rw", encoding="utf-8", newline="\n")
        return cls(reader=stream, writer=stream, sock=sock)

    def _call(self, payload: dict) -> dict:
        if self._closed:
            raise BackendFailure("bridge connection is closed")
        line = json.dumps(payload, separators=(",", ":"))
        try:
            self._writer.write(line + "\n")
            self._writer.flush()
            response = self._reader.readline()
        except (OSError, ValueError) as exc:
            raise BackendFailure(f"bridge I/O failed: {exc}") from exc
        if response == "":
            raise BackendFailure("bridge closed the connection")
        try:
            reply = json.loads(response)
        except json.JSONDecodeError as exc:
            raise BackendFailure(f"bridge sent malformed JSON: {response!r}") from exc
        if not isinstance(reply, dict):
            raise BackendFailure(f"bridge reply is not an object: {reply!r}")
        if reply.get("id") != payload["id"]:
            raise BackendFailure(
                f"bridge reply id {reply.get('id')!r} does not match request id "
                f"{payload['id']}"
            )
        return reply

    def ping(self) -> str:
        """Handshake; returns the backend's model identifier."""
        reply = self._call({"id": next(self._ids), "op": "ping"})
        if not reply.get("ok"):
            raise BackendFailure(f"bridge ping failed: {reply.get('error', 'unknown')}")
        return str(reply.get("model", ""))

    def forecast(
        self, series: Sequence[float], horizon: int, freq: int = 0
    ) -> list[float]:
        """Request a point forecast of length ``horizon``."""
        reply = self._call(
            {
                "id": next(self._ids),
                "op": "forecast",
                "series": [float(v) for v in series],
                "horizon": int(horizon),
                "freq": int(freq),
            }
        )
        if not reply.get("ok"):
            raise BackendFailure(
                f"bridge forecast failed: {reply.get('error', 'unknown')}"
            )
        values = reply.get("forecast")
        if not isinstance(values, list) or len(values) != horizon:
            raise BackendFailure(
                f"bridge forecast has wrong shape: expected {horizon} values, "
                f"got {values!r}"
            )
        return [float(v) for v in values]

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        try:
            self._writer.close()
        except OSError:
            pass
        if self._reader is not self._writer:
            try:
                self._reader.close()
            except OSError:
                pass
        if self._sock is not None:
            try:
                self._sock.close()
            except OSError:
                pass
        if self._proc is not None:
            try:
                self._proc.wait(timeout=10)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()

    def __enter__(self) -> "BridgeClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

import io
import json

import numpy as np
import pytest

from spikecast.bridge import (
    BridgeClient,
    default_stub_command,
    stub_forecast,
)
from spikecast.errors import BackendFailure
from spikecast.fmstub import handle_line, serve


class TestStubRule:
    def test_short_series_uses_all(self):
        assert stub_forecast([1, 2, 3], 2) == [2.0, 2.0]

    def test_long_series_uses_last_eight(self):
        series = [100.0] * 5 + [2.0] * 8
        assert stub_forecast(series, 1) == [2.0]

    def test_horizon_repeats(self):
        assert stub_forecast([4.0], 4) == [4.0] * 4

    def test_guards(self):
        with pytest.raises(ValueError):
            stub_forecast([], 1)
        with pytest.raises(ValueError):
            stub_forecast([1.0], 0)


class TestStubServerLines:
    def test_ping(self):
        reply = json.loads(handle_line('{"id":1,"op":"ping"}'))
        assert reply == {"id": 1, "ok": True, "model": "stub"}

    def test_forecast(self):
        reply = json.loads(
            handle_line('{"id":2,"op":"forecast","series":[1,2,3],"horizon":2,"freq":0}')
        )
        assert reply == {"id": 2, "ok": True, "forecast": [2.0, 2.0]}

    def test_empty_series_rejected(self):
        reply = json.loads(
            handle_line('{"id":3,"op":"forecast","series":[],"horizon":1,"freq":0}')
        )
        assert reply["id"] == 3 and reply["ok"] is False and "error" in reply

    def test_malformed_line(self):
        reply = json.loads(handle_line("this is not json"))
        assert reply["id"] == -1 and reply["ok"] is False

    def test_bad_horizon(self):
        reply = json.loads(
            handle_line('{"id":4,"op":"forecast","series":[1],"horizon":0}')
        )
        assert reply["ok"] is False

    def test_unknown_op(self):
        reply = json.loads(handle_line('{"id":5,"op":"train"}'))
        assert reply["ok"] is False

    def test_serve_keeps_order_and_survives_garbage(self):
        lines = [
            '{"id":1,"op":"ping"}',
            "garbage",
            '{"id":2,"op":"forecast","series":[2,4],"horizon":1,"freq":1}',
        ]
        stdout = io.StringIO()
        serve(io.StringIO("\n".join(lines) + "\n"), stdout)
        replies = [json.loads(line) for line in stdout.getvalue().splitlines()]
        assert [r["id"] for r in replies] == [1, -1, 2]
        assert replies[2]["forecast"] == [3.0]


class TestBridgeClient:
    def test_spawned_stub_roundtrip(self):
        with BridgeClient.spawn(default_stub_command()) as client:
            assert client.ping() == "stub"
            assert client.forecast([1, 2, 3], 2) == [2.0, 2.0]
            assert client.forecast([5.0] * 12, 3) == [5.0, 5.0, 5.0]

    def test_wire_parity_with_reference_rule(self):
        rng = np.random.default_rng(123)
        with BridgeClient.spawn(default_stub_command()) as client:
            for _ in range(100):
                n = int(rng.integers(1, 30))
                series = [float(v) for v in rng.uniform(0, 50, n)]
                horizon = int(rng.integers(1, 13))
                assert client.forecast(series, horizon) == stub_forecast(series, horizon)

    def test_forecast_error_surfaces_as_backend_failure(self):
        with BridgeClient.spawn(default_stub_command()) as client:
            with pytest.raises(BackendFailure):
                client.forecast([], 1)

    def test_bad_launch_command(self):
        with pytest.raises(BackendFailure):
            BridgeClient.spawn("/nonexistent/binary --flag")

    def test_closed_connection(self):
        client = BridgeClient.spawn(default_stub_command())
        client.close()
        with pytest.raises(BackendFailure):
            client.ping()

    def test_bad_address(self):
        with pytest.raises(BackendFailure):
            BridgeClient.connect("no-port-here")

"""fm-bridge: forecasting sidecar speaking line-delimited JSON on stdio.

Requests are one JSON object per line::

    {"id": 1, "op": "ping"}
    {"id": 2, "op": "forecast", "series": [...], "horizon": H, "freq": 0|1}

Responses echo ``id`` in request order.  ``--mode stub`` serves a
deterministic stand-in rule (mean of the trailing eight values); ``--mode
real`` serves the pre-trained TimesFM checkpoint zero-shot.
"""

from .server import BridgeServer, stub_forecast

__version__ = "0.1.0"
__all__ = ["BridgeServer", "stub_forecast"]

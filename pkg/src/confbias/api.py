"""Minimal HTTP/JSON facade for the interactive explorer.

Stateless: every handler validates its body, calls the corresponding pure
library function, and echoes the validated inputs back with the result, so
identical request bodies produce byte-identical responses (sensitivity
requests carry their own seed).  Domain errors map to 422 with the same
machine-readable codes the CLI uses for exit status 2; malformed JSON maps
to 400.

Endpoints::

    GET  /health
    POST /api/bias         {"params": {lambda, pi0, pi1, p0, p1, gamma[, alpha, beta, sigma]}}
    POST /api/curve        {"params": {...}, "parameter": name, "grid": [..]}
                           (or "start"/"stop"/"points" instead of "grid")
    POST /api/invert       {"observables": {ell, omega, pi_star0, pi_star1}, "p0": .., "p1": ..}
    POST /api/sensitivity  sensitivity config document (see confbias.sensitivity)

A built UI bundle can be served at / by passing ``ui_dir``.  The
per-request sensitivity draw cap defaults to 100000 and can be overridden
with the CONFBIAS_MAX_DRAWS environment variable.
"""

from __future__ import annotations

import json
import mimetypes
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional, Tuple

from .errors import DomainError
from .formulas import bias_curve, bias_pair, implied_observables, invert_observables
from .params import LatentParams, ObservedSummary
from .sensitivity import config_from_dict, report_summary_dict, run_sensitivity

__all__ = ["create_server", "serve", "SCHEMA_VERSION"]

SCHEMA_VERSION = "1"
DEFAULT_PORT = 8000
DEFAULT_MAX_DRAWS = 100_000


class _RequestError(Exception):
    """Malformed request body (not a domain problem): answered with 422."""

    def __init__(self, message: str, code: str = "invalid_request"):
        super().__init__(message)
        self.code = code


def _params_from_payload(payload: dict) -> LatentParams:
    if not isinstance(payload, dict):
        raise _RequestError("'params' must be an object")
    known = {"lambda", "pi0", "pi1", "p0", "p1", "alpha", "beta", "gamma", "sigma"}
    unknown = set(payload) - known
    if unknown:
        raise _RequestError(f"unknown parameter fields: {sorted(unknown)}")
    missing = {"lambda", "pi0", "pi1", "p0", "p1"} - set(payload)
    if missing:
        raise _RequestError(f"missing parameter fields: {sorted(missing)}")
    try:
        return LatentParams(
            lam=float(payload["lambda"]),
            pi0=float(payload["pi0"]),
            pi1=float(payload["pi1"]),
            p0=float(payload["p0"]),
            p1=float(payload["p1"]),
            alpha=float(payload.get("alpha", 0.0)),
            beta=float(payload.get("beta", 0.0)),
            gamma=float(payload.get("gamma", 0.0)),
            sigma=float(payload.get("sigma", 1.0)),
        )
    except DomainError:
        raise
    except (TypeError, ValueError) as exc:
        raise _RequestError(f"non-numeric parameter value: {exc}") from exc


def _params_echo(params: LatentParams) -> dict:
    return {
        "lambda": params.lam,
        "pi0": params.pi0,
        "pi1": params.pi1,
        "p0": params.p0,
        "p1": params.p1,
        "alpha": params.alpha,
        "beta": params.beta,
        "gamma": params.gamma,
        "sigma": params.sigma,
    }


def _handle_bias(payload: dict) -> Tuple[dict, dict]:
    params = _params_from_payload(payload.get("params", payload))
    pair = bias_pair(params)
    obs = implied_observables(params)
    result = {
        "bias_cm": pair.bias_cm,
        "bias_msm": pair.bias_msm,
        "observables": {
            "ell": obs.ell,
            "omega": obs.omega,
            "pi_star0": obs.pi_star0,
            "pi_star1": obs.pi_star1,
        },
    }
    return {"params": _params_echo(params)}, result


def _handle_curve(payload: dict) -> Tuple[dict, dict]:
    params = _params_from_payload(payload.get("params", {}))
    parameter = payload.get("parameter")
    if not isinstance(parameter, str):
        raise _RequestError("'parameter' must name the swept parameter")
    if "grid" in payload:
        grid_payload = payload["grid"]
        if not isinstance(grid_payload, list) or not grid_payload:
            raise _RequestError("'grid' must be a non-empty array of numbers")
        try:
            grid = [float(v) for v in grid_payload]
        except (TypeError, ValueError) as exc:
            raise _RequestError(f"non-numeric grid value: {exc}") from exc
    else:
        try:
            start = float(payload["start"])
            stop = float(payload["stop"])
            points = int(payload.get("points", 101))
        except (KeyError, TypeError, ValueError) as exc:
            raise _RequestError(
                "curve needs either 'grid' or numeric 'start'/'stop'(/'points')"
            ) from exc
        if points < 2:
            raise _RequestError("'points' must be >= 2")
        step = (stop - start) / (points - 1)
        grid = [start + i * step for i in range(points)]
    try:
        curve = bias_curve(params, parameter, grid)
    except DomainError:
        raise
    except ValueError as exc:
        raise _RequestError(str(exc)) from exc
    result = {
        "parameter": parameter,
        "points": [
            {
                "value": pt.value,
                "bias_cm": None if pt.pair is None else pt.pair.bias_cm,
                "bias_msm": None if pt.pair is None else pt.pair.bias_msm,
            }
            for pt in curve
        ],
    }
    echo = {"params": _params_echo(params), "parameter": parameter, "grid": grid}
    return echo, result


def _handle_invert(payload: dict) -> Tuple[dict, dict]:
    obs_payload = payload.get("observables")
    if not isinstance(obs_payload, dict):
        raise _RequestError("'observables' must be an object")
    try:
        obs = ObservedSummary(
            ell=float(obs_payload["ell"]),
            omega=float(obs_payload["omega"]),
            pi_star0=float(obs_payload["pi_star0"]),
            pi_star1=float(obs_payload["pi_star1"]),
        )
        p0 = float(payload["p0"])
        p1 = float(payload["p1"])
    except DomainError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise _RequestError(f"malformed invert request: {exc}") from exc
    inverted = invert_observables(obs, p0, p1)
    echo = {
        "observables": {
            "ell": obs.ell,
            "omega": obs.omega,
            "pi_star0": obs.pi_star0,
            "pi_star1": obs.pi_star1,
        },
        "p0": p0,
        "p1": p1,
    }
    return echo, {"lambda": inverted.lam, "pi0": inverted.pi0, "pi1": inverted.pi1}


def _handle_sensitivity(payload: dict, max_draws: int) -> Tuple[dict, dict]:
    try:
        config = config_from_dict(payload)
    except DomainError:
        raise
    except ValueError as exc:
        raise _RequestError(str(exc)) from exc
    if config.draws > max_draws:
        raise _RequestError(
            f"draws = {config.draws} exceeds the per-request cap of {max_draws}",
            code="draw_cap",
        )
    report = run_sensitivity(config)
    summary = report_summary_dict(report)
    echo = summary.pop("config")
    return {"config": echo}, summary


class _Handler(BaseHTTPRequestHandler):
    server_version = "confbias"
    protocol_version = "HTTP/1.1"

    # Handlers are pure; the only shared state is the read-only config on
    # the server object, so the threading server needs no locks here.

    def log_message(self, fmt, *log_args):  # noqa: D102 - silence default stderr chatter
        if getattr(self.server, "verbose", False):
            super().log_message(fmt, *log_args)

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", self.server.cors_origin)
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self) -> None:  # noqa: N802 - http.server naming
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", self.server.cors_origin)
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self) -> None:  # noqa: N802
        if self.path == "/health":
            self._send_json(200, {"status": "ok", "schema_version": SCHEMA_VERSION})
            return
        self._serve_static()

    def _serve_static(self) -> None:
        ui_dir = self.server.ui_dir
        if ui_dir is None:
            self._send_json(404, {"error": {"code": "not_found", "message": "no UI bundle configured"}})
            return
        rel = self.path.split("?", 1)[0].lstrip("/") or "index.html"
        root = Path(ui_dir).resolve()
        target = (root / rel).resolve()
        if root not in target.parents and target != root:
            self._send_json(404, {"error": {"code": "not_found", "message": "outside bundle"}})
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_json(404, {"error": {"code": "not_found", "message": self.path}})
            return
        body = target.read_bytes()
        content_type = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", self.server.cors_origin)
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self) -> None:  # noqa: N802
        route = self.path.split("?", 1)[0]
        if route not in ("/api/bias", "/api/curve", "/api/invert", "/api/sensitivity"):
            self._send_json(404, {"error": {"code": "not_found", "message": route}})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = json.loads(self.rfile.read(length).decode("utf-8"))
            if not isinstance(payload, dict):
                raise json.JSONDecodeError("body must be a JSON object", "", 0)
        except (json.JSONDecodeError, UnicodeDecodeError, ValueError) as exc:
            self._send_json(
                400, {"error": {"code": "malformed_json", "message": str(exc)}}
            )
            return
        try:
            if route == "/api/bias":
                echo, result = _handle_bias(payload)
            elif route == "/api/curve":
                echo, result = _handle_curve(payload)
            elif route == "/api/invert":
                echo, result = _handle_invert(payload)
            else:
                echo, result = _handle_sensitivity(payload, self.server.max_draws)
        except DomainError as exc:
            self._send_json(
                422, {"error": {"code": exc.code, "message": str(exc)}}
            )
            return
        except _RequestError as exc:
            self._send_json(422, {"error": {"code": exc.code, "message": str(exc)}})
            return
        response = {"schema_version": SCHEMA_VERSION, "inputs": echo, "result": result}
        self._send_json(200, response)


def create_server(
    host: str = "127.0.0.1",
    port: Optional[int] = None,
    ui_dir: Optional[str] = None,
    max_draws: Optional[int] = None,
    cors_origin: Optional[str] = None,
    verbose: bool = False,
) -> ThreadingHTTPServer:
    """Build (but do not start) the threading HTTP server.

    ``port=0`` asks the OS for an ephemeral port (useful in tests); the
    chosen port is available as ``server.server_address[1]``.
    """
    if port is None:
        port = int(os.environ.get("CONFBIAS_PORT", DEFAULT_PORT))
    if max_draws is None:
        max_draws = int(os.environ.get("CONFBIAS_MAX_DRAWS", DEFAULT_MAX_DRAWS))
    if cors_origin is None:
        cors_origin = os.environ.get("CONFBIAS_UI_ORIGIN", "*")
    server = ThreadingHTTPServer((host, port), _Handler)
    server.ui_dir = ui_dir
    server.max_draws = max_draws
    server.cors_origin = cors_origin
    server.verbose = verbose
    return server


def serve(
    host: str = "127.0.0.1",
    port: Optional[int] = None,
    ui_dir: Optional[str] = None,
    max_draws: Optional[int] = None,
) -> None:
    """Run the service until interrupted."""
    server = create_server(host=host, port=port, ui_dir=ui_dir, max_draws=max_draws, verbose=True)
    address = server.server_address
    # flush so wrappers waiting on the line (tests, process managers) see it
    print(f"confbias API listening on http://{address[0]}:{address[1]}/", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


def serve_in_thread(server: ThreadingHTTPServer) -> threading.Thread:
    """Start ``server`` on a daemon thread (test helper)."""
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread

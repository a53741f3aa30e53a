"""Minimal inference server speaking the toolkit's HTTP protocol.

POST any path with ``{"text": ...}`` and get ``{"labels": [...],
"scores": [...]}`` back.  Serves either a builtin model file or a canned
response; handy for exercising the HTTP adapter without real
infrastructure:

    python -m greybox.mockserver model.json --port 8750
"""

from __future__ import annotations

import argparse
import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .models import load_model


class InferenceHandler(BaseHTTPRequestHandler):
    """Configured via attributes on the server object."""

    def do_POST(self):  # noqa: N802 (stdlib naming)
        server = self.server
        if getattr(server, "delay_seconds", 0):
            time.sleep(server.delay_seconds)
        status = getattr(server, "force_status", 200)
        raw_body = getattr(server, "raw_body", None)
        if raw_body is not None:
            payload = raw_body
        else:
            length = int(self.headers.get("Content-Length", 0))
            body = json.loads(self.rfile.read(length).decode("utf-8"))
            text = body.get("text", "")
            canned = getattr(server, "canned", None)
            if canned is not None:
                response = canned
            else:
                dist = server.model.classify(text)
                response = {"labels": list(dist.labels),
                            "scores": list(dist.scores)}
            payload = json.dumps(response).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, format, *args):  # silence request logging
        pass


def serve_model(model, host="127.0.0.1", port=0):
    """Start a model-backed server in a daemon thread; returns the server."""
    server = ThreadingHTTPServer((host, port), InferenceHandler)
    server.model = model
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("model", help="builtin model JSON file")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8750)
    args = parser.parse_args(argv)
    server = ThreadingHTTPServer((args.host, args.port), InferenceHandler)
    server.model = load_model(args.model)
    print(f"serving {args.model} on http://{args.host}:{server.server_address[1]}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

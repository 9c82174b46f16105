#!/usr/bin/env python3
"""Record console test fixtures from the live API.

Captures a 100-tick /api/stream recording (with the server-side forward
kinematics endpoint per tick as ground truth) and the golden transcript
for the scripted grip -> dance -> xyzzy session.  Outputs land in
frontend/fixtures/ and are checked in.
"""

import json
import math
import threading
from pathlib import Path

from fastapi.testclient import TestClient

from armctl.kinematics import ArmGeometry, forward_planar
from armctl.server import create_app
from armctl.service import SessionConfig

OUT_DIR = Path(__file__).resolve().parent.parent / "frontend" / "fixtures"


def server_fk(geom: ArmGeometry, joints: list[float]) -> dict:
    theta1, theta2, theta3 = joints[0], joints[1], joints[2]
    a, b = forward_planar(geom, theta2, theta3)
    return {
        "a": a,
        "b": b,
        "x": a * math.cos(theta1),
        "y": a * math.sin(theta1),
        "z": b,
    }


def record_tick_stream(client: TestClient, geom: ArmGeometry) -> dict:
    ticks = []
    with client.websocket_connect("/api/stream") as ws:
        done = threading.Event()

        def fire():
            client.post("/api/command", json={"text": "dance"})
            done.set()

        threading.Thread(target=fire).start()
        while len(ticks) < 100:
            event = ws.receive_json()
            if event.get("active_command") == "dance":
                ticks.append(event)
        done.wait()
    return {
        "geometry": {"l1": geom.l1, "l2": geom.l2},
        "ticks": ticks,
        "server_fk": [server_fk(geom, t["joints"]) for t in ticks],
    }


def record_transcript(client: TestClient) -> list[dict]:
    session = []
    for text in ["grip", "dance", "xyzzy"]:
        outcome = client.post("/api/command", json={"text": text}).json()
        session.append({
            "text": text,
            "response": outcome["response"],
            "error_kind": outcome["error_kind"],
            "settled": outcome["settled"],
        })
    return session


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    config = SessionConfig()
    with TestClient(create_app(config)) as client:
        stream = record_tick_stream(client, config.geometry)
    with TestClient(create_app(config)) as client:
        transcript = record_transcript(client)

    (OUT_DIR / "tick_stream.json").write_text(json.dumps(stream, indent=1) + "\n")
    (OUT_DIR / "transcript_golden.json").write_text(json.dumps(transcript, indent=2) + "\n")
    print(f"wrote {OUT_DIR / 'tick_stream.json'} ({len(stream['ticks'])} ticks)")
    print(f"wrote {OUT_DIR / 'transcript_golden.json'} ({len(transcript)} exchanges)")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""End-to-end drive: full CLI pipeline in a temp dir, then a live server
with two real WebSocket clients playing one complete match.

Exits 0 only if every step works against the installed package.
"""

import asyncio
import json
import subprocess
import sys
import tempfile
import time
import urllib.request
from pathlib import Path

import websockets

PORT = 8731
BASE = f"ws://127.0.0.1:{PORT}/ws"


def run(args, **kw):
    print("+", " ".join(args))
    return subprocess.run(args, check=True, capture_output=True, text=True,
                          **kw)


async def recv_until(ws, wanted, where=None, limit=200):
    for _ in range(limit):
        msg = json.loads(await asyncio.wait_for(ws.recv(), timeout=10))
        if msg["type"] == "ping":
            await ws.send(json.dumps({"type": "pong"}))
            continue
        if msg["type"] == wanted and (where is None or where(msg)):
            return msg
    raise RuntimeError(f"never received {wanted}")


async def play_match():
    async with websockets.connect(BASE) as ws1, \
            websockets.connect(BASE) as ws2:
        await ws1.send(json.dumps({"type": "create_room"}))
        room = (await recv_until(ws1, "room_created"))["room"]
        print(f"room {room}")

        await ws1.send(json.dumps({"type": "join", "room": room, "name": "Ada"}))
        me1 = (await recv_until(ws1, "joined"))["player_id"]
        await ws2.send(json.dumps({"type": "join", "room": room, "name": "Bo"}))
        me2 = (await recv_until(ws2, "joined"))["player_id"]

        await ws1.send(json.dumps({"type": "start_match"}))
        rounds = 0
        while True:
            await recv_until(ws1, "round_start")
            await recv_until(ws2, "round_start")
            role1 = (await recv_until(ws1, "role"))["role"]
            await recv_until(ws2, "role")
            sketch_ws, sketch_id, guess_ws = \
                (ws1, me1, ws2) if role1 == "sketcher" else (ws2, me2, ws1)
            word = (await recv_until(sketch_ws, "code_word"))["word"]
            rounds += 1
            print(f"round {rounds}: code word {word!r}")

            await sketch_ws.send(json.dumps(
                {"type": "stroke", "points": [[20, 30], [120, 80], [200, 40]]}))
            conf = await recv_until(guess_ws, "nn_confidence")
            print(f"  nn confidence {conf['confidence']:.2f} "
                  f"guess={conf['word']}")

            end = None
            if conf["word"] != word:        # classifier did not just win
                await guess_ws.send(json.dumps({"type": "guess", "word": word}))
            end = await recv_until(ws1, "round_end")
            await recv_until(ws2, "round_end")
            print(f"  round_end winner={end['winner']} score={end['score']}")
            if sum(end["score"].values()) >= 3:
                break
        final = await recv_until(ws1, "match_end")
        await recv_until(ws2, "match_end")
        print(f"match_end winner={final['winner']} score={final['score']}")
        assert sum(final["score"].values()) == 3


def main():
    tmp = Path(tempfile.mkdtemp(prefix="sketchduel-e2e-"))
    corpus = tmp / "corpus.ndjson"
    index = tmp / "index.npz"
    report = tmp / "report.ndjson"
    cfg = tmp / "match.json"
    cfg.write_text(json.dumps({"rounds_to_play": 3}))

    run([sys.executable, "-m", "sketchduel.cli", "synth", "--categories",
         "line,circle,square,star,tshape", "--per-category", "80",
         "--seed", "5", "--out", str(corpus)])
    print(run([sys.executable, "-m", "sketchduel.cli", "ingest",
               str(corpus)]).stdout)
    print(run([sys.executable, "-m", "sketchduel.cli", "budgets",
               str(corpus)]).stdout)
    run([sys.executable, "-m", "sketchduel.cli", "build-index", str(corpus),
         "--k", "7", "--out", str(index)])
    print(run([sys.executable, "-m", "sketchduel.cli", "simulate",
               "--index", str(index), "--data", str(corpus),
               "--trials", "30", "--seed", "2", "--out",
               str(report)]).stdout)

    server = subprocess.Popen(
        [sys.executable, "-m", "sketchduel.cli", "serve",
         "--index", str(index), "--bind", f"127.0.0.1:{PORT}",
         "--config", str(cfg), "--seed", "12"],
        stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True)
    try:
        for _ in range(60):
            time.sleep(0.25)
            try:
                with urllib.request.urlopen(
                        f"http://127.0.0.1:{PORT}/healthz", timeout=1) as r:
                    print("healthz:", r.read().decode())
                    break
            except Exception:
                if server.poll() is not None:
                    print(server.stdout.read())
                    raise RuntimeError("server died")
        else:
            raise RuntimeError("server never came up")
        asyncio.run(play_match())
    finally:
        server.terminate()
        server.wait(timeout=10)
    print("E2E OK")


if __name__ == "__main__":
    main()

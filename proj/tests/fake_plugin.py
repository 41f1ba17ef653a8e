#!/usr/bin/env python3
# Scripted plugin peer for host-side protocol tests.
# Usage: fake_plugin.py MODE [PROTOCOL]
#   classifier      well-behaved classifier; "crash" in the text ranks Crash first
#   ocr             answers every ocr request with one fixed text region
#   typer           types every widget as a Button
#   bad-handshake   wrong protocol name
#   no-handshake    exits immediately
#   wrong-id        echoes a different id
#   garbage         answers with a non-JSON line
#   short-top       returns only two entries
#   die-after-N     serves N requests, then exits
#   slow            never answers
import json
import os
import sys
import time

TYPES = ["functional-defect", "crash", "layout-problem", "display-problem", "network-error",
         "null-screen", "performance-problem", "error-prompt", "garbled-error", "transition-problem"]


def send(obj):
    sys.stdout.write(json.dumps(obj) + "\n")
    sys.stdout.flush()


def main():
    mode = sys.argv[1] if len(sys.argv) > 1 else "classifier"
    protocol = sys.argv[2] if len(sys.argv) > 2 else {"ocr": "recode-ocr"}.get(mode, "recode-classifier")
    if mode == "no-handshake":
        return
    if mode == "bad-handshake":
        send({"protocol": "something-else", "version": 1})
    else:
        send({"protocol": protocol, "version": 1, "model": "fake"})
    served = 0
    limit = int(mode.split("-")[-1]) if mode.startswith("die-after-") else None
    for line in sys.stdin:
        if limit is not None and served >= limit:
            return
        served += 1
        try:
            req = json.loads(line)
        except ValueError:
            continue
        rid = req.get("id")
        if mode == "slow":
            time.sleep(60)
        if mode == "garbage":
            sys.stdout.write("not json\n")
            sys.stdout.flush()
            continue
        if mode == "wrong-id":
            send({"id": str(rid) + "x", "top": []})
            continue
        op = req.get("op")
        if op == "ocr":
            send({"id": rid, "texts": [{"x": 1, "y": 1, "w": 10, "h": 8, "text": "Loading"}]})
        elif op == "type_widget":
            send({"id": rid, "kind": "Button"})
        elif op == "predict":
            if "text" not in req:
                send({"id": rid, "error": "missing text"})
                continue
            first = "crash" if "crash" in req["text"].lower() else "functional-defect"
            rest = [t for t in TYPES if t != first]
            top = [{"type": first, "confidence": 0.7}, {"type": rest[0], "confidence": 0.2},
                   {"type": rest[1], "confidence": 0.1}]
            if mode == "short-top":
                top = top[:2]
            send({"id": rid, "top": top})
        else:
            send({"id": rid, "error": "unknown op"})


if __name__ == "__main__":
    try:
        main()
    except BrokenPipeError:
        # Host closed the pipe (timeouts, dead-process tests).
        sys.stderr.close()
        os._exit(0)

#!/usr/bin/env python3
"""Backend that sleeps before answering; used to exercise timeouts."""

import json
import sys
import time


def main():
    delay = float(sys.argv[1]) if len(sys.argv) > 1 else 3600.0
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        request = json.loads(line)
        time.sleep(delay)
        print(json.dumps({"id": request["id"], "energy_hartree": 0.0}), flush=True)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Deterministic stand-in evaluator speaking the JSON-lines protocol.

Reads one request object per line from stdin and answers on stdout. The
reported energy is a stable hash of the request content (atoms, link atoms,
method and basis indices), so identical requests always produce identical
energies across runs and processes.

Flags:
  --shuffle N   buffer N requests and answer them in reverse order, to
                exercise out-of-order response matching
  --sizes       include n_ao / n_eri fields in responses
"""

import argparse
import hashlib
import json
import sys


def canonical(request):
    payload = {
        "atoms": request.get("atoms", []),
        "link_atoms": request.get("link_atoms", []),
        "method_index": request.get("method_index", 1),
        "basis_index": request.get("basis_index", 1),
        "charge": request.get("charge", 0),
        "spin": request.get("spin", 0),
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def respond(request, with_sizes):
    digest = hashlib.sha256(canonical(request).encode()).digest()
    mantissa = int.from_bytes(digest[:8], "big") / 2**64
    n_atoms = len(request.get("atoms", [])) + len(request.get("link_atoms", []))
    response = {
        "id": request["id"],
        "energy_hartree": -0.5 * n_atoms - mantissa,
        "uncertainty_hartree": 1e-08,
    }
    if with_sizes:
        response["n_ao"] = 5 * n_atoms
        response["n_eri"] = (3 * n_atoms) ** 2
    return response


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--shuffle", type=int, default=0)
    parser.add_argument("--sizes", action="store_true")
    args = parser.parse_args()

    pending = []
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        request = json.loads(line)
        pending.append(respond(request, args.sizes))
        if len(pending) >= max(1, args.shuffle):
            for response in reversed(pending):
                print(json.dumps(response), flush=True)
            pending = []
    for response in reversed(pending):
        print(json.dumps(response), flush=True)


if __name__ == "__main__":
    main()

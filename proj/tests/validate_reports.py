#!/usr/bin/env python3
"""Runs each report-producing command and validates the JSON against the schema."""

import json
import pathlib
import subprocess
import sys

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)


def main():
    exe, schema_path, workdir = sys.argv[1:4]
    work = pathlib.Path(workdir)
    work.mkdir(parents=True, exist_ok=True)
    schema = json.loads(pathlib.Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)

    runs = {
        "partitions": ["partitions", "--k", "3", "--json"],
        "moment": ["moment", "--model", "toeplitz", "--order", "4", "--m", "2", "--mc-points", "20000",
                   "--seed", "1"],
        "moment_exact": ["moment", "--model", "band-slow", "--order", "6", "--m", "3", "--seed", "1"],
        "moment_band": ["moment", "--model", "band-proportional", "--order", "4", "--b", "0.5",
                        "--mc-points", "20000", "--seed", "1"],
        "verify": ["verify-trace", "--model", "hankel", "--N", "4", "--m", "2", "--k", "3", "--seed", "1"],
    }
    docs = {}
    for name, args in runs.items():
        proc = subprocess.run([exe, *args], capture_output=True, text=True, check=True)
        docs[name] = json.loads(proc.stdout)

    prefix = work / "sim"
    subprocess.run([exe, "simulate", "--model", "band-proportional", "--N", "40", "--m", "2", "--b", "0.5",
                    "--samples", "3", "--seed", "2", "--max-order", "4", "--mc-points", "20000",
                    "--out", str(prefix)], capture_output=True, text=True, check=True)
    docs["simulate"] = json.loads(pathlib.Path(f"{prefix}.report.json").read_text())

    failed = False
    for name, doc in docs.items():
        errors = list(validator.iter_errors(doc))
        for e in errors:
            print(f"{name}: {e.json_path}: {e.message}")
        failed |= bool(errors)
        print(f"{name}: {'ok' if not errors else 'INVALID'}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

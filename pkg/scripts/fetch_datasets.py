#!/usr/bin/env python3
"""Download the eight benchmark datasets from the public LIBSVM collection.

Plain-documentation helper: it needs ordinary network access and writes the
uncompressed LIBSVM text files into --dest (default: ./data).  The bench
manifest (datasets.toml) and the acceptance tests look for these file names.
"""

import argparse
import bz2
import sys
import urllib.request
from pathlib import Path

BASE = "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary"

# remote name -> local name ('' keeps the remote name); .bz2 is decompressed
FILES = {
    "splice": "",
    "splice.t": "",
    "madelon": "",
    "madelon.t": "",
    "liver-disorders": "",
    "liver-disorders.t": "",
    "ijcnn1.bz2": "ijcnn1",
    "ijcnn1.t.bz2": "ijcnn1.t",
    "a1a": "",
    "a1a.t": "",
    "a9a": "",
    "a9a.t": "",
    "leu.bz2": "leukemia",
    "leu.t.bz2": "leukemia.t",
    "gisette_scale.bz2": "gisette",
    "gisette_scale.t.bz2": "gisette.t",
}


def fetch(remote: str, dest: Path) -> bool:
    local = dest / (FILES[remote] or remote)
    if local.exists():
        print(f"{local} already present, skipping")
        return True
    url = f"{BASE}/{remote}"
    print(f"fetching {url}")
    try:
        with urllib.request.urlopen(url, timeout=120) as resp:
            payload = resp.read()
    except Exception as e:
        print(f"  failed: {e}", file=sys.stderr)
        return False
    if remote.endswith(".bz2"):
        payload = bz2.decompress(payload)
    local.write_bytes(payload)
    print(f"  wrote {local} ({len(payload)} bytes)")
    return True


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default="data", help="output directory (default: data)")
    parser.add_argument("--only", nargs="*", metavar="NAME",
                        help="dataset name prefixes to fetch (e.g. splice ijcnn1)")
    args = parser.parse_args()
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    wanted = {
        remote
        for remote in FILES
        if not args.only or any(remote.startswith(p) or (FILES[remote] or remote).startswith(p)
                                for p in args.only)
    }
    failures = [remote for remote in sorted(wanted) if not fetch(remote, dest)]
    if failures:
        print(f"{len(failures)} downloads failed: {failures}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

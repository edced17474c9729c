#!/usr/bin/env python3
"""Fetch MovieLens 100K ratings into u.data format.

Downloads the official archive, or converts the copy bundled in a RecBole
wheel (recbole/dataset_example/ml-100k/ml-100k.inter) when offline.
"""
import argparse
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

URL = "https://files.grouplens.org/datasets/movielens/ml-100k.zip"
WHEEL_MEMBER = "recbole/dataset_example/ml-100k/ml-100k.inter"


def from_archive(data):
    with zipfile.ZipFile(io.BytesIO(data)) as zf:
        return zf.read("ml-100k/u.data").decode()


def from_wheel(path):
    with zipfile.ZipFile(path) as zf:
        text = zf.read(WHEEL_MEMBER).decode()
    lines = text.splitlines()
    if lines and not lines[0].split("\t")[0].isdigit():
        lines = lines[1:]
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="/root/data/ml-100k/u.data")
    ap.add_argument("--wheel", help="RecBole wheel to convert instead of downloading")
    args = ap.parse_args()

    if args.wheel:
        text = from_wheel(args.wheel)
    else:
        with urllib.request.urlopen(URL, timeout=60) as resp:
            text = from_archive(resp.read())

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    n = sum(1 for line in text.splitlines() if line.strip())
    print(f"wrote {n} ratings to {out}")
    return 0 if n == 100000 else 1


if __name__ == "__main__":
    sys.exit(main())

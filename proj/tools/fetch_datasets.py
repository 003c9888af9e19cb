#!/usr/bin/env python3
"""Fetch the categorical UCI benchmark datasets used by the registry in data/.

The raw files are taken from two PyPI source distributions that redistribute
them (Orange 2.7.8 and river 0.23.0), so the script only needs access to a
PyPI index. Each dataset is written as a comma-separated file with a header
row and "?" for missing values.

Student Performance is not redistributed by either package. Download
student-por.csv from the UCI repository (dataset 320) and place it in data/.
"""

import argparse
import io
import os
import re
import tarfile
import urllib.parse
import urllib.request
import zipfile

INDEX = os.environ.get("PIP_INDEX_URL", "https://pypi.org/simple").rstrip("/")

ORANGE_FILES = {
    "tic-tac-toe": "tic_tac_toe.tab",
    "car": "car.tab",
    "breast-cancer": "breast-cancer.tab",
    "voting": "voting.tab",
    "balance-scale": "balance-scale.tab",
    "monks-1": "monks-1.tab",
    "monks-2": "monks-2.tab",
    "monks-3": "monks-3.tab",
    "primary-tumor": "primary-tumor.tab",
    "lymphography": "lymphography.tab",
    "zoo": "zoo.tab",
    "hayes-roth": "hayes-roth_learn.tab",
    "post-operative": "post-operative.tab",
}


def sdist_bytes(package, version):
    page_url = f"{INDEX}/{package.lower()}/"
    with urllib.request.urlopen(page_url) as r:
        page = r.read().decode()
    sdist = re.compile(rf'href="([^"]*/{package}-{re.escape(version)}\.tar\.gz)[#"]', re.I)
    url = urllib.parse.urljoin(page_url, sdist.search(page).group(1))
    with urllib.request.urlopen(url) as r:
        return r.read()


def tab_to_csv(text):
    lines = text.splitlines()
    names = [n.strip() for n in lines[0].split("\t")]
    out = [",".join(names)]
    for line in lines[3:]:
        if not line.strip():
            continue
        cells = line.split("\t")
        cells += [""] * (len(names) - len(cells))
        row = []
        for c in cells[: len(names)]:
            c = c.strip()
            if c in ("", "?", "~"):
                c = "?"
            row.append(c.replace(",", ";"))
        out.append(",".join(row))
    return "\n".join(out) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    orange = tarfile.open(fileobj=io.BytesIO(sdist_bytes("Orange", "2.7.8")))
    for name, member in ORANGE_FILES.items():
        raw = orange.extractfile(f"Orange-2.7.8/Orange/datasets/{member}").read()
        with open(os.path.join(args.out, f"{name}.csv"), "w") as f:
            f.write(tab_to_csv(raw.decode("latin-1")))
        print("wrote", name)

    river = tarfile.open(fileobj=io.BytesIO(sdist_bytes("river", "0.23.0")))
    zipped = river.extractfile("river-0.23.0/river/datasets/solar-flare.csv.zip").read()
    with zipfile.ZipFile(io.BytesIO(zipped)) as z:
        text = z.read(z.namelist()[0]).decode()
    with open(os.path.join(args.out, "solar-flare.csv"), "w") as f:
        f.write(text if text.endswith("\n") else text + "\n")
    print("wrote solar-flare")


if __name__ == "__main__":
    main()

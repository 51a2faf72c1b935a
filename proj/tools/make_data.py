#!/usr/bin/env python3
"""Writes the bundled KEEL datasets under data/.

wine.dat comes from the copy of the UCI wine data shipped with scikit-learn;
balance.dat is the balance-scale data, which is fully determined by its
attribute grid.
"""
import itertools
import pathlib
import sys


def keel(path, relation, names, rows, labels, classes, integer=False):
    with open(path, "w") as f:
        f.write(f"@relation {relation}\n")
        for i, n in enumerate(names):
            col = [r[i] for r in rows]
            kind = "integer" if integer else "real"
            f.write(f"@attribute {n} {kind} [{min(col):g}, {max(col):g}]\n")
        f.write("@attribute Class {" + ", ".join(classes) + "}\n")
        f.write("@inputs " + ", ".join(names) + "\n@outputs Class\n@data\n")
        for r, y in zip(rows, labels):
            f.write(", ".join(f"{v:g}" for v in r) + f", {y}\n")


def wine(out):
    from sklearn.datasets import load_wine

    d = load_wine()
    names = [n.replace("/", "_").replace(" ", "_") for n in d.feature_names]
    labels = [str(int(y) + 1) for y in d.target]
    keel(out / "wine.dat", "wine", names, d.data.tolist(), labels, ["1", "2", "3"])


def balance(out):
    rows, labels = [], []
    for lw, ld, rw, rd in itertools.product(range(1, 6), repeat=4):
        left, right = lw * ld, rw * rd
        rows.append([lw, ld, rw, rd])
        labels.append("L" if left > right else "R" if right > left else "B")
    keel(out / "balance.dat", "balance", ["Left-weight", "Left-distance", "Right-weight", "Right-distance"],
         rows, labels, ["L", "B", "R"], integer=True)


if __name__ == "__main__":
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent.parent / "data")
    out.mkdir(exist_ok=True)
    wine(out)
    balance(out)

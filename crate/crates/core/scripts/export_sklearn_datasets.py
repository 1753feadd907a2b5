"""Write the scikit-learn reference datasets as CSV snapshots.

Usage: python3 export_sklearn_datasets.py [OUT_DIR]

Each file has the header `f1,...,fd,label`; the label column keeps the
original class identifiers. Run once; the outputs are checked in.
"""
import sys
from pathlib import Path

from sklearn import datasets


def write(path, X, y):
    d = X.shape[1]
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(f"f{i + 1}" for i in range(d)) + ",label\n")
        for row, label in zip(X, y):
            fh.write(",".join(repr(float(v)) for v in row) + f",{int(label)}\n")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent.parent / "data")
    out.mkdir(parents=True, exist_ok=True)
    for name, loader in [
        ("wine", datasets.load_wine),
        ("breast_cancer", datasets.load_breast_cancer),
        ("digits", datasets.load_digits),
    ]:
        bunch = loader()
        write(out / f"{name}.csv", bunch.data, bunch.target)
        print(f"{name}: {bunch.data.shape}")


if __name__ == "__main__":
    main()

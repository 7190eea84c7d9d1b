#!/usr/bin/env python3
"""Materialise the Wine and MNIST inputs used by qnnbench into data/.

Wine comes from the copy bundled with scikit-learn, rewritten in the UCI
layout (class label 1..3 in column 0, 13 attributes after it).

MNIST comes from the 5000-image sample shipped inside the mlxtend wheel
(fetched with `pip download` if it is not already installed) and is written
as standard big-endian IDX files.
"""
import argparse
import gzip
import io
import pathlib
import struct
import subprocess
import sys
import tempfile
import zipfile


def write_wine(out_dir: pathlib.Path) -> None:
    import sklearn.datasets

    src = pathlib.Path(sklearn.datasets.__file__).parent / "data" / "wine_data.csv"
    rows = src.read_text().strip().splitlines()[1:]
    lines = []
    for row in rows:
        cols = row.split(",")
        label = int(cols[-1]) + 1
        lines.append(",".join([str(label)] + cols[:-1]))
    (out_dir / "wine.data").write_text("\n".join(lines) + "\n")
    print(f"wrote {out_dir / 'wine.data'} ({len(lines)} rows)")


def mnist_csv_bytes() -> bytes:
    try:
        import mlxtend.data  # noqa: F401

        path = pathlib.Path(mlxtend.data.__file__).parent / "data" / "mnist_5k.csv.gz"
        return path.read_bytes()
    except ImportError:
        pass
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.check_call(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-q", "-d", tmp, "mlxtend"]
        )
        wheel = next(pathlib.Path(tmp).glob("mlxtend-*.whl"))
        with zipfile.ZipFile(wheel) as z:
            return z.read("mlxtend/data/data/mnist_5k.csv.gz")


def write_mnist(out_dir: pathlib.Path) -> None:
    rows = gzip.decompress(mnist_csv_bytes()).decode().strip().splitlines()
    images = io.BytesIO()
    labels = io.BytesIO()
    images.write(struct.pack(">IIII", 2051, len(rows), 28, 28))
    labels.write(struct.pack(">II", 2049, len(rows)))
    for row in rows:
        vals = [int(float(v)) for v in row.split(",")]
        images.write(bytes(vals[:784]))
        labels.write(bytes([vals[784]]))
    (out_dir / "train-images-idx3-ubyte").write_bytes(images.getvalue())
    (out_dir / "train-labels-idx1-ubyte").write_bytes(labels.getvalue())
    print(f"wrote MNIST IDX pair to {out_dir} ({len(rows)} images)")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parents[1] / "data"))
    args = parser.parse_args()
    out_dir = pathlib.Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_wine(out_dir)
    write_mnist(out_dir)


if __name__ == "__main__":
    main()

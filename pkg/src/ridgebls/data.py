"""Dataset ingestion (CSV, IDX), synthetic data and the accuracy metric."""

import csv
import gzip
import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import BadMagic, CountMismatch, DimensionMismatch, ParseError, RaggedRows, TruncatedFile

__all__ = [
    "Dataset",
    "one_hot",
    "load_csv",
    "load_idx",
    "synthetic",
    "accuracy",
    "IDX_IMAGE_MAGIC",
    "IDX_LABEL_MAGIC",
]

IDX_IMAGE_MAGIC = 0x00000803
IDX_LABEL_MAGIC = 0x00000801


@dataclass(frozen=True)
class Dataset:
    x_train: np.ndarray
    y_train: np.ndarray
    x_test: np.ndarray
    y_test: np.ndarray


def one_hot(labels, n_classes=None):
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and labels.min() < 0:
        raise ValueError("class labels must be non-negative")
    if n_classes is None:
        n_classes = int(labels.max()) + 1 if labels.size else 0
    y = np.zeros((labels.shape[0], n_classes))
    y[np.arange(labels.shape[0]), labels] = 1.0
    return y


def load_csv(path, label_columns=1, class_column=False):
    """Read a rectangular numeric CSV.

    The last ``label_columns`` columns are the targets.  With ``class_column``
    the last column instead holds integer class ids ``0..c-1``, which are
    expanded to one-hot rows.

    Raises:
        ParseError: empty file, or a non-numeric cell (message names row/column).
        RaggedRows: rows with differing numbers of fields.
    """
    n_target = 1 if class_column else int(label_columns)
    if n_target < 1:
        raise ValueError("label_columns must be >= 1")
    rows = []
    width = None
    with open(path, newline="") as fh:
        for i, rec in enumerate(csv.reader(fh), start=1):
            if not rec or all(not cell.strip() for cell in rec):
                continue
            if width is None:
                width = len(rec)
            elif len(rec) != width:
                raise RaggedRows(f"{path}: row {i} has {len(rec)} fields, expected {width}")
            vals = []
            for j, cell in enumerate(rec, start=1):
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(f"{path}: row {i}, column {j}: not a number: {cell!r}") from None
                if not math.isfinite(v):
                    raise ParseError(f"{path}: row {i}, column {j}: non-finite value {cell!r}")
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    if width <= n_target:
        raise ParseError(f"{path}: {width} columns leaves no inputs beside {n_target} target column(s)")
    data = np.array(rows)
    x, t = data[:, :-n_target], data[:, -n_target:]
    if not class_column:
        return x, t
    cls = t[:, 0]
    bad = np.flatnonzero((cls != np.round(cls)) | (cls < 0))
    if bad.size:
        raise ParseError(f"{path}: row {bad[0] + 1}, column {width}: class id must be a non-negative integer")
    return x, one_hot(cls.astype(np.int64))


def _read(path):
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rb") as fh:
        return fh.read()


def _header(buf, path, magic, ndims):
    need = 4 + 4 * ndims
    if len(buf) < need:
        raise TruncatedFile(f"{path}: {len(buf)} bytes is shorter than the {need}-byte header")
    (got,) = struct.unpack(">I", buf[:4])
    if got != magic:
        raise BadMagic(f"{path}: magic 0x{got:08x}, expected 0x{magic:08x}")
    return struct.unpack(f">{ndims}I", buf[4:need]), need


def load_idx(images_path, labels_path):
    """Load an IDX image/label pair (MNIST layout).

    Returns ``X`` (count x rows*cols, bytes scaled to [0, 1]) and one-hot
    ``Y`` over 10 classes.
    """
    img = _read(images_path)
    (count, rows, cols), off = _header(img, images_path, IDX_IMAGE_MAGIC, 3)
    size = count * rows * cols
    if len(img) - off < size:
        raise TruncatedFile(f"{images_path}: expected {size} pixel bytes, found {len(img) - off}")
    x = np.frombuffer(img, dtype=np.uint8, count=size, offset=off).reshape(count, rows * cols) / 255.0

    lab = _read(labels_path)
    (n_labels,), off = _header(lab, labels_path, IDX_LABEL_MAGIC, 1)
    if n_labels != count:
        raise CountMismatch(f"{images_path} has {count} images but {labels_path} has {n_labels} labels")
    if len(lab) - off < n_labels:
        raise TruncatedFile(f"{labels_path}: expected {n_labels} label bytes, found {len(lab) - off}")
    labels = np.frombuffer(lab, dtype=np.uint8, count=n_labels, offset=off)
    bad = np.flatnonzero(labels > 9)
    if bad.size:
        raise ParseError(f"{labels_path}: label {labels[bad[0]]} at index {bad[0]} is outside 0-9")
    return x, one_hot(labels, 10)


def synthetic(n_train, q, c, noise=0.1, n_test=None, seed=0):
    """Gaussian inputs labelled by a random linear-plus-sign teacher.

    Class scores are ``X U + sign(X V) R + noise * N(0, 1)``; the label is
    the arg-max.  Returns a :class:`Dataset` with one-hot targets.
    """
    if min(n_train, q, c) < 1:
        raise ValueError("synthetic data needs n_train, q, c >= 1")
    if n_test is None:
        n_test = max(1, n_train // 4)
    rng = np.random.Generator(np.random.Philox(key=int(seed) ^ 0x5EED))
    u = rng.standard_normal((q, c))
    v = rng.standard_normal((q, 2 * c))
    r = rng.standard_normal((2 * c, c))
    x = rng.standard_normal((n_train + n_test, q))
    scores = x @ u + np.sign(x @ v) @ r + noise * rng.standard_normal((x.shape[0], c))
    y = one_hot(np.argmax(scores, axis=1), c)
    return Dataset(x[:n_train], y[:n_train], x[n_train:], y[n_train:])


def accuracy(y_hat, y):
    """Fraction of rows whose arg-max matches (ties go to the lowest index)."""
    y_hat = np.asarray(y_hat)
    y = np.asarray(y)
    if y_hat.shape != y.shape or y.ndim != 2:
        raise DimensionMismatch(f"prediction {y_hat.shape} and target {y.shape} shapes differ")
    if y.shape[0] == 0:
        raise DimensionMismatch("accuracy of an empty set is undefined")
    return float(np.mean(np.argmax(y_hat, axis=1) == np.argmax(y, axis=1)))

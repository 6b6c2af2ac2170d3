"""Binary array files and CSV traces.

Binary format (little-endian): header ``magic "LIED" | version u32 | n_y u32 |
n_z u32 | dy f64 | dz f64 | kind u8`` with kind 0 = real, 1 = complex, followed
by row-major f64 data (complex stored as interleaved re, im pairs).
"""

import struct

import numpy as np

MAGIC = b"LIED"
VERSION = 1
_HEADER = struct.Struct("<4sIIIddB")


def write_array(path, values, dy, dz):
    """Write a 2D real or complex array with its sample spacings."""
    values = np.asarray(values)
    if values.ndim != 2:
        raise ValueError("only 2D arrays are supported")
    complex_kind = np.iscomplexobj(values)
    if complex_kind:
        data = np.ascontiguousarray(values, dtype=np.complex128)
    else:
        data = np.ascontiguousarray(values, dtype=np.float64)
    header = _HEADER.pack(MAGIC, VERSION, values.shape[0], values.shape[1],
                          float(dy), float(dz), 1 if complex_kind else 0)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(data.tobytes())


def read_array(path):
    """Read a binary array file; returns (values, dy, dz)."""
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        magic, version, n_y, n_z, dy, dz, kind = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        dtype = np.complex128 if kind == 1 else np.float64
        data = np.frombuffer(fh.read(), dtype=dtype)
    if data.size != n_y * n_z:
        raise ValueError(f"{path}: truncated payload")
    return data.reshape(n_y, n_z).copy(), dy, dz


def write_csv(path, columns, comments=()):
    """Write named 1D columns as CSV; comment lines are prefixed with '#'."""
    names = list(columns)
    arrays = [np.asarray(columns[n], dtype=float) for n in names]
    length = len(arrays[0])
    if any(len(a) != length for a in arrays):
        raise ValueError("all columns must have the same length")
    with open(path, "w") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(names) + "\n")
        for i in range(length):
            fh.write(",".join(f"{a[i]:.17g}" for a in arrays) + "\n")


def read_csv(path):
    """Read a CSV written by :func:`write_csv`; returns (columns dict, comments)."""
    comments = []
    with open(path) as fh:
        line = fh.readline()
        while line.startswith("#"):
            comments.append(line[1:].strip())
            line = fh.readline()
        names = [n.strip() for n in line.strip().split(",")]
        rows = [list(map(float, ln.strip().split(","))) for ln in fh if ln.strip()]
    data = np.asarray(rows, dtype=float).reshape(len(rows), len(names))
    return {n: data[:, i] for i, n in enumerate(names)}, comments

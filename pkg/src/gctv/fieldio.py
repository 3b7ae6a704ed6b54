"""Field file formats.

Three formats, chosen by file extension:

  .csv            plain real matrix, one text row per grid row, 17-significant-
                  digit floats (exact float64 round trip)
  .f64raw / .f64 / .raw
                  two little-endian uint64 (M, N) followed by M*N little-endian
                  float64 values, row-major (exact round trip)
  .pgm            P2/P5 grayscale, maxval 255 or 65535, mapped linearly onto
                  [0, 1] (round trip exact only up to quantization)

Surfaces should use .csv or .f64raw: 8-bit quantization destroys noise levels
far below 1/255.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .fields import ScalarField

__all__ = [
    "read_field",
    "write_field",
    "read_csv",
    "write_csv",
    "read_f64raw",
    "write_f64raw",
    "read_pgm",
    "write_pgm",
]

_RAW_SUFFIXES = {".f64raw", ".f64", ".raw"}


def write_csv(path, field: ScalarField) -> None:
    np.savetxt(path, field.data, fmt="%.17g", delimiter=",")


def read_csv(path, h: float = 1.0) -> ScalarField:
    return ScalarField(np.loadtxt(path, delimiter=",", ndmin=2), h)


def write_f64raw(path, field: ScalarField) -> None:
    with open(path, "wb") as fh:
        np.asarray(field.shape, dtype="<u8").tofile(fh)
        field.data.astype("<f8").tofile(fh)


def read_f64raw(path, h: float = 1.0) -> ScalarField:
    with open(path, "rb") as fh:
        header = np.fromfile(fh, dtype="<u8", count=2)
        if header.size != 2:
            raise ValueError(f"{path}: truncated f64raw header")
        m, n = (int(x) for x in header)
        data = np.fromfile(fh, dtype="<f8", count=m * n)
    if data.size != m * n:
        raise ValueError(f"{path}: expected {m * n} values, found {data.size}")
    return ScalarField(data.reshape(m, n), h)


def write_pgm(path, field: ScalarField, maxval: int = 255, ascii_format: bool = False) -> None:
    """Quantize a [0, 1] field to P5 (default) or P2. Values are clipped."""
    if maxval not in (255, 65535):
        raise ValueError(f"maxval must be 255 or 65535, got {maxval}")
    q = np.rint(np.clip(field.data, 0.0, 1.0) * maxval).astype(np.uint32)
    m, n = field.shape
    header = f"{'P2' if ascii_format else 'P5'}\n{n} {m}\n{maxval}\n"
    if ascii_format:
        with open(path, "w") as fh:
            fh.write(header)
            for row in q:
                fh.write(" ".join(str(v) for v in row) + "\n")
    else:
        # 16-bit P5 stores the most significant byte first
        dtype = ">u2" if maxval == 65535 else "u1"
        with open(path, "wb") as fh:
            fh.write(header.encode("ascii"))
            q.astype(dtype).tofile(fh)


def _pgm_tokens(raw: bytes):
    """Header tokens, skipping '#' comments; yields (token, offset past it)."""
    i = 0
    while True:
        while i < len(raw) and raw[i : i + 1].isspace():
            i += 1
        if i < len(raw) and raw[i : i + 1] == b"#":
            while i < len(raw) and raw[i : i + 1] != b"\n":
                i += 1
            continue
        start = i
        while i < len(raw) and not raw[i : i + 1].isspace():
            i += 1
        if start == i:
            raise ValueError("truncated PGM header")
        yield raw[start:i], i


def read_pgm(path, h: float = 1.0) -> ScalarField:
    raw = Path(path).read_bytes()
    tokens = _pgm_tokens(raw)
    magic, _ = next(tokens)
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"{path}: not a PGM file (magic {magic!r})")
    (n_tok, _), (m_tok, _), (maxval_tok, end) = next(tokens), next(tokens), next(tokens)
    n, m, maxval = int(n_tok), int(m_tok), int(maxval_tok)
    if maxval < 1 or maxval > 65535:
        raise ValueError(f"{path}: invalid maxval {maxval}")
    if magic == b"P2":
        values = np.array(raw[end:].split(), dtype=np.float64)
        if values.size != m * n:
            raise ValueError(f"{path}: expected {m * n} samples, found {values.size}")
    else:
        dtype = ">u2" if maxval > 255 else "u1"
        values = np.frombuffer(raw[end + 1 :], dtype=dtype, count=m * n).astype(np.float64)
        if values.size != m * n:
            raise ValueError(f"{path}: truncated P5 payload")
    return ScalarField(values.reshape(m, n) / maxval, h)


def write_field(path, field: ScalarField, maxval: int = 255) -> None:
    """Write in the format implied by the file extension."""
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        write_csv(path, field)
    elif suffix in _RAW_SUFFIXES:
        write_f64raw(path, field)
    elif suffix == ".pgm":
        write_pgm(path, field, maxval=maxval)
    else:
        raise ValueError(f"unsupported field format {suffix!r} (use .csv, .f64raw, or .pgm)")


def read_field(path, h: float = 1.0) -> ScalarField:
    """Read in the format implied by the file extension."""
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return read_csv(path, h)
    if suffix in _RAW_SUFFIXES:
        return read_f64raw(path, h)
    if suffix == ".pgm":
        return read_pgm(path, h)
    raise ValueError(f"unsupported field format {suffix!r} (use .csv, .f64raw, or .pgm)")

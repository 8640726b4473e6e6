"""Plain-text matrix files, JSON certificates and reports.

Matrix format::

    m n
    a11 a12 ... a1n
    ...
    am1 ... amn

Entries are whitespace separated and may wrap across lines freely; values
are written with 17 significant digits so a write/read cycle is exact.
Certificates are JSON objects with keys ``"p"``, ``"w"`` and ``"D"``.
All writers go through a temporary file and an atomic rename.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .dual import DualCertificate

__all__ = [
    "MatrixFormatError",
    "MalformedHeaderError",
    "EntryCountError",
    "NonFiniteEntryError",
    "CertificateFormatError",
    "read_matrix",
    "write_matrix",
    "format_matrix",
    "parse_matrix",
    "certificate_from_dict",
    "certificate_to_dict",
    "read_certificate",
    "write_certificate",
    "dump_json",
    "atomic_write",
]


class MatrixFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MalformedHeaderError(MatrixFormatError):
    pass


class EntryCountError(MatrixFormatError):
    pass


class NonFiniteEntryError(MatrixFormatError):
    pass


class CertificateFormatError(ValueError):
    pass


def atomic_write(path, text: str) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_matrix(A) -> str:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError("matrix must be 2-dimensional")
    lines = [f"{A.shape[0]} {A.shape[1]}"]
    lines += [" ".join(f"{v:.17g}" for v in row) for row in A]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    lines = text.splitlines()
    header_idx = next((i for i, ln in enumerate(lines) if ln.strip()), None)
    if header_idx is None:
        raise MalformedHeaderError("empty file, expected 'm n' header", 1)
    parts = lines[header_idx].split()
    try:
        m, n = (int(x) for x in parts)
    except ValueError:
        raise MalformedHeaderError(f"expected 'm n', got {lines[header_idx].strip()!r}", header_idx + 1) from None
    if m < 1 or n < 1:
        raise MalformedHeaderError(f"dimensions must be positive, got {m} x {n}", header_idx + 1)

    values: list[float] = []
    last_line = header_idx + 1
    for lineno, line in enumerate(lines[header_idx + 1:], start=header_idx + 2):
        for token in line.split():
            try:
                v = float(token)
            except ValueError:
                raise NonFiniteEntryError(f"cannot parse entry {token!r}", lineno) from None
            if not math.isfinite(v):
                raise NonFiniteEntryError(f"non-finite entry {token!r}", lineno)
            values.append(v)
            if len(values) > m * n:
                raise EntryCountError(f"more than {m * n} entries for a {m} x {n} matrix", lineno)
            last_line = lineno
    if len(values) != m * n:
        raise EntryCountError(f"expected {m * n} entries, found {len(values)}", last_line)
    return np.array(values).reshape(m, n)


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def write_matrix(A, path) -> None:
    atomic_write(path, format_matrix(A))


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def certificate_to_dict(cert: DualCertificate) -> dict:
    return {"p": [float(v) for v in cert.p], "w": [float(v) for v in cert.w], "D": float(cert.D)}


def certificate_from_dict(obj) -> DualCertificate:
    if not isinstance(obj, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    for key in ("p", "w", "D"):
        if key not in obj:
            raise CertificateFormatError(f"missing key {key!r}")
    try:
        p = np.array(obj["p"], dtype=np.float64)
        w = np.array(obj["w"], dtype=np.float64)
        D = float(obj["D"])
    except (TypeError, ValueError) as exc:
        raise CertificateFormatError(f"bad certificate entry: {exc}") from None
    if p.ndim != 1 or w.ndim != 1:
        raise CertificateFormatError("p and w must be flat arrays")
    if np.any(p < 0) or abs(math.fsum(p) - 1.0) > 1e-9:
        raise CertificateFormatError(f"p is not a distribution (sum {math.fsum(p)!r})")
    total = math.fsum(p)
    if abs(total - 1.0) > 1e-12:
        p = p / total
    try:
        return DualCertificate(p, w, D)
    except ValueError as exc:
        raise CertificateFormatError(str(exc)) from None


def read_certificate(path) -> DualCertificate:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"invalid JSON: {exc}") from None
    return certificate_from_dict(obj)


def write_certificate(cert: DualCertificate, path) -> None:
    atomic_write(path, dump_json(certificate_to_dict(cert)))

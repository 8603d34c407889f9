"""Readers and writers for alist, QC exponent and nonbinary label files."""

from __future__ import annotations

import os
from pathlib import Path

from .codes import ZERO, LinearCode, NonbinaryLabeledMatrix, QcPolynomialMatrix
from .errors import DomainError, ParseError
from .field import GfField
from .gf2 import BitMatrix


def _ints(line: str, what: str) -> list[int]:
    try:
        return [int(t) for t in line.split()]
    except ValueError:
        raise ParseError(f"non-integer token in {what}: {line.strip()!r}") from None


def format_alist(H: BitMatrix) -> str:
    """MacKay alist text; index lists are 1-based and zero-padded."""
    n, r = H.ncols, H.nrows
    col_sets = [[] for _ in range(n)]
    row_sets = []
    for i in range(r):
        row = H.row_support(i)
        row_sets.append(row)
        for j in row:
            col_sets[j].append(i)
    max_col = max((len(c) for c in col_sets), default=0)
    max_row = max((len(s) for s in row_sets), default=0)

    def padded(entries, width):
        vals = [e + 1 for e in entries] + [0] * (max(width, 1) - len(entries))
        return " ".join(map(str, vals))

    lines = [f"{n} {r}", f"{max_col} {max_row}",
             " ".join(str(len(c)) for c in col_sets),
             " ".join(str(len(s)) for s in row_sets)]
    lines += [padded(c, max_col) for c in col_sets]
    lines += [padded(s, max_row) for s in row_sets]
    return "\n".join(lines) + "\n"


def parse_alist(text: str) -> BitMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 4:
        raise ParseError("alist: truncated header")
    head = _ints(lines[0], "alist header")
    if len(head) != 2:
        raise ParseError("alist: first line must be 'n r'")
    n, r = head
    if n < 1 or r < 0:
        raise ParseError(f"alist: bad dimensions {n} x {r}")
    maxes = _ints(lines[1], "alist degree line")
    if len(maxes) != 2:
        raise ParseError("alist: second line must hold the max column and row degrees")
    col_deg = _ints(lines[2], "alist column degrees")
    row_deg = _ints(lines[3], "alist row degrees") if r else []
    body = lines[4:] if r else lines[3:]
    if len(col_deg) != n or len(row_deg) != r:
        raise ParseError("alist: degree list lengths disagree with n, r")
    if len(body) != n + r:
        raise ParseError(f"alist: expected {n + r} index lines, found {len(body)}")
    cols = []
    for j, line in enumerate(body[:n]):
        idx = [v for v in _ints(line, "alist column list") if v != 0]
        if len(idx) != col_deg[j] or any(not 1 <= v <= r for v in idx):
            raise ParseError(f"alist: column {j + 1} list inconsistent with its degree")
        cols.append(idx)
    rows = []
    for i, line in enumerate(body[n:]):
        idx = [v for v in _ints(line, "alist row list") if v != 0]
        if len(idx) != row_deg[i] or any(not 1 <= v <= n for v in idx):
            raise ParseError(f"alist: row {i + 1} list inconsistent with its degree")
        if len(set(idx)) != len(idx):
            raise ParseError(f"alist: row {i + 1} repeats a column")
        rows.append(idx)
    H = BitMatrix.from_supports(([v - 1 for v in row] for row in rows), n)
    from_cols = sorted((v - 1, j) for j, c in enumerate(cols) for v in c)
    from_rows = sorted((i, v - 1) for i, row in enumerate(rows) for v in row)
    if from_cols != from_rows:
        raise ParseError("alist: column and row lists describe different matrices")
    return H


def write_alist(path: str | os.PathLike, H: BitMatrix) -> None:
    Path(path).write_text(format_alist(H))


def read_alist(path: str | os.PathLike) -> BitMatrix:
    try:
        return parse_alist(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def load_code(path: str | os.PathLike) -> LinearCode:
    return LinearCode(read_alist(path), name=Path(path).stem)


def format_qc(Q: QcPolynomialMatrix) -> str:
    lines = [f"{Q.b} {Q.c} {Q.M}"]
    lines += [" ".join(str(w) for w in row) for row in Q.entries]
    return "\n".join(lines) + "\n"


def parse_qc(text: str) -> QcPolynomialMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("qc: empty file")
    head = _ints(lines[0], "qc header")
    if len(head) != 3:
        raise ParseError("qc: header must be 'b c M'")
    b, c, M = head
    if not 0 <= b < c:
        raise ParseError(f"qc: need 0 <= b < c, got b={b} c={c}")
    rows = [_ints(ln, "qc exponent row") for ln in lines[1:]]
    if len(rows) != c - b or any(len(row) != c for row in rows):
        raise ParseError(f"qc: expected {c - b} rows of {c} exponents")
    if any(w < ZERO for row in rows for w in row):
        raise ParseError("qc: exponents must be >= 0, or -1 for a zero entry")
    try:
        return QcPolynomialMatrix(tuple(tuple(row) for row in rows), M)
    except DomainError as exc:
        raise ParseError(f"qc: {exc}") from None


def read_qc(path: str | os.PathLike) -> QcPolynomialMatrix:
    try:
        return parse_qc(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def write_qc(path: str | os.PathLike, Q: QcPolynomialMatrix) -> None:
    Path(path).write_text(format_qc(Q))


def format_labels(L: NonbinaryLabeledMatrix) -> str:
    """Header line, the base matrix as alist, then hex labels row by row."""
    out = [f"nonbinary {L.field.m} {L.field.primitive_poly:x}", format_alist(L.base).rstrip("\n"),
           "labels"]
    it = iter(L.labels)
    for i in range(L.base.nrows):
        out.append(" ".join(f"{next(it):x}" for _ in L.base.row_support(i)))
    return "\n".join(out) + "\n"


def parse_labels(text: str) -> NonbinaryLabeledMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("nonbinary"):
        raise ParseError("labels: missing 'nonbinary m poly' header")
    head = lines[0].split()
    if len(head) != 3:
        raise ParseError("labels: header must be 'nonbinary m poly_hex'")
    try:
        m, poly = int(head[1]), int(head[2], 16)
    except ValueError:
        raise ParseError("labels: bad header values") from None
    try:
        sep = lines.index("labels")
    except ValueError:
        raise ParseError("labels: missing 'labels' section") from None
    base = parse_alist("\n".join(lines[1:sep]))
    label_lines = [ln for ln in lines[sep + 1:] if ln.strip()]
    if len(label_lines) != base.nrows:
        raise ParseError("labels: need one label line per base row")
    labels = []
    for i, ln in enumerate(label_lines):
        try:
            vals = [int(t, 16) for t in ln.split()]
        except ValueError:
            raise ParseError(f"labels: bad hex on row {i + 1}") from None
        if len(vals) != len(base.row_support(i)):
            raise ParseError(f"labels: row {i + 1} label count differs from its weight")
        labels.extend(vals)
    try:
        return NonbinaryLabeledMatrix(base, tuple(labels), GfField(m, poly))
    except ValueError as exc:
        raise ParseError(f"labels: {exc}") from None


def read_labels(path: str | os.PathLike) -> NonbinaryLabeledMatrix:
    try:
        return parse_labels(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def write_labels(path: str | os.PathLike, L: NonbinaryLabeledMatrix) -> None:
    Path(path).write_text(format_labels(L))

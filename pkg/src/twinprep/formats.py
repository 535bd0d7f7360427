"""Text file formats: complex matrices and the trade-off sweep CSV.

Matrix files (`complex-matrix v1`) hold one square complex matrix:
header line, integer dimension line, then dim rows of dim
whitespace-separated ``re,im`` pairs printed with 17 significant digits
(enough for bit-identical float64 round trips).

The trade-off CSV uses shortest round-trip decimals and a fixed header;
leading ``#`` lines are comments and are skipped by the parser.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .errors import MatrixFileError

MATRIX_HEADER = "# complex-matrix v1"

TRADEOFF_HEADER = (
    "alpha,beta,F_pole,F_sim_theta0,Er_eq10,Er_numeric_aB,gap,concurrence_aB,eof_aB"
)


def dumps_matrix(m) -> str:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MatrixFileError(f"expected square matrix, got shape {a.shape}", "square")
    lines = [MATRIX_HEADER, str(a.shape[0])]
    for row in a:
        lines.append(" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"


def loads_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != MATRIX_HEADER:
        raise MatrixFileError(f"missing header {MATRIX_HEADER!r}", "header")
    try:
        dim = int(lines[1])
    except (IndexError, ValueError):
        raise MatrixFileError("second line must be the integer dimension", "dimension")
    if dim < 1:
        raise MatrixFileError(f"dimension {dim} must be positive", "dimension")
    rows = lines[2:]
    if len(rows) != dim:
        raise MatrixFileError(f"expected {dim} rows, found {len(rows)}", "row-count")
    out = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        parts = row.split()
        if len(parts) != dim:
            raise MatrixFileError(
                f"row {i} has {len(parts)} entries, expected {dim}", "column-count"
            )
        for j, part in enumerate(parts):
            try:
                re_s, im_s = part.split(",")
                out[i, j] = complex(float(re_s), float(im_s))
            except ValueError:
                raise MatrixFileError(f"bad entry {part!r} at ({i},{j})", "entry")
    return out


def write_matrix(path, m) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps_matrix(m))


def read_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        return loads_matrix(fh.read())


@dataclass(frozen=True)
class TradeoffRow:
    alpha: float
    beta: float
    F_pole: float
    F_sim_theta0: float
    Er_eq10: float
    Er_numeric_aB: float
    gap: float
    concurrence_aB: float
    eof_aB: float


def dumps_tradeoff(rows, comments=()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(TRADEOFF_HEADER)
    for row in rows:
        lines.append(",".join(repr(getattr(row, f.name)) for f in fields(TradeoffRow)))
    return "\n".join(lines) + "\n"


def loads_tradeoff(text: str) -> list[TradeoffRow]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    body = [ln for ln in lines if not ln.startswith("#")]
    if not body or body[0] != TRADEOFF_HEADER:
        raise ValueError(f"expected header {TRADEOFF_HEADER!r}")
    rows = []
    for ln in body[1:]:
        values = [float(v) for v in ln.split(",")]
        if len(values) != len(fields(TradeoffRow)):
            raise ValueError(f"row has {len(values)} columns: {ln!r}")
        rows.append(TradeoffRow(*values))
    return rows

"""Flat-file formats: matrix files, benchmark and trace CSVs, the SVG plot.

All floats are serialized with 17 significant digits, which round-trips
IEEE doubles exactly, so parse(serialize(x)) == x bit for bit.

Matrix file format: UTF-8 text. Lines whose first non-blank character is
``#`` are comments; blank lines are ignored. The first content line is the
dimension n, followed by n lines of n whitespace-separated numbers.
Asymmetry beyond 1e-9 relative to the largest entry is a parse error;
smaller asymmetry is averaged away.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import MatrixParseError
from .validation import check_square_matrix, symmetrize

__all__ = [
    "BenchRow",
    "BENCH_HEADER",
    "TRACE_HEADER",
    "format_float",
    "parse_matrix",
    "read_matrix",
    "serialize_matrix",
    "write_matrix",
    "write_bench_csv",
    "read_bench_csv",
    "write_trace_csv",
    "read_trace_csv",
    "write_bench_svg",
]

BENCH_HEADER = "n,seed,algorithm,iterations,converged,final_residual,final_J,wall_ms"
TRACE_HEADER = "iter,J,residual,step_ms"

ASYMMETRY_RTOL = 1e-9


def format_float(x):
    """Serialize a float with 17 significant digits (exact round-trip)."""
    return "%.17g" % x


@dataclass(frozen=True)
class BenchRow:
    """One benchmark measurement: a (matrix size, seed, algorithm) run."""

    n: int
    seed: int
    algorithm: str
    iterations: int
    converged: bool
    final_residual: float
    final_J: float
    wall_ms: float


# ---------------------------------------------------------------------------
# Matrix files

def _content_lines(text):
    """Yield (1-based line number, stripped text) for non-comment lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_matrix(text):
    """Parse the matrix file format from a string.

    Returns the symmetrized matrix as a float64 array.

    Raises
    ------
    MatrixParseError
        On any malformed content, naming the offending line and entry.
    """
    lines = _content_lines(text)
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise MatrixParseError("empty matrix file: no dimension line") from None
    parts = head.split()
    if len(parts) != 1:
        raise MatrixParseError(
            f"line {lineno}: expected a single integer dimension, got {head!r}"
        )
    try:
        n = int(parts[0])
    except ValueError:
        raise MatrixParseError(
            f"line {lineno}: expected an integer dimension, got {parts[0]!r}"
        ) from None
    if n < 1:
        raise MatrixParseError(f"line {lineno}: dimension must be >= 1, got {n}")

    a = np.empty((n, n))
    for i in range(n):
        try:
            lineno, line = next(lines)
        except StopIteration:
            raise MatrixParseError(
                f"unexpected end of file: got {i} of {n} matrix rows"
            ) from None
        entries = line.split()
        if len(entries) != n:
            raise MatrixParseError(
                f"line {lineno}: expected {n} entries, got {len(entries)}"
            )
        for j, token in enumerate(entries):
            try:
                value = float(token)
            except ValueError:
                raise MatrixParseError(
                    f"line {lineno}, entry {j + 1}: could not parse {token!r} "
                    "as a number"
                ) from None
            if not np.isfinite(value):
                raise MatrixParseError(
                    f"line {lineno}, entry {j + 1}: non-finite value {token!r}"
                )
            a[i, j] = value
    for lineno, line in lines:
        raise MatrixParseError(
            f"line {lineno}: trailing content after row {n}: {line!r}"
        )

    scale = float(np.abs(a).max())
    if scale > 0.0:
        gap = np.abs(a - a.T)
        worst = float(gap.max())
        if worst > ASYMMETRY_RTOL * scale:
            i, j = np.unravel_index(int(gap.argmax()), gap.shape)
            raise MatrixParseError(
                f"matrix is asymmetric beyond {ASYMMETRY_RTOL:g} relative: "
                f"entry ({i + 1}, {j + 1}) = {a[i, j]!r} vs "
                f"({j + 1}, {i + 1}) = {a[j, i]!r}"
            )
    return symmetrize(a)


def read_matrix(path):
    """Parse a matrix file from disk."""
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def serialize_matrix(m, comment=None):
    """Serialize a square matrix to the matrix file format."""
    m = check_square_matrix(m)
    lines = []
    if comment:
        lines.extend(f"# {line}" for line in comment.splitlines())
    lines.append(str(m.shape[0]))
    for row in m:
        lines.append(" ".join(format_float(x) for x in row))
    return "\n".join(lines) + "\n"


def write_matrix(path, m, comment=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_matrix(m, comment=comment))


# ---------------------------------------------------------------------------
# CSV

def _bool_str(flag):
    return "true" if flag else "false"


def _parse_bool(token, lineno):
    if token == "true":
        return True
    if token == "false":
        return False
    raise MatrixParseError(f"line {lineno}: expected true/false, got {token!r}")


def write_bench_csv(path, rows):
    """Write benchmark rows; byte-deterministic apart from wall_ms values."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(BENCH_HEADER + "\n")
        for r in rows:
            fh.write(
                f"{r.n},{r.seed},{r.algorithm},{r.iterations},"
                f"{_bool_str(r.converged)},{format_float(r.final_residual)},"
                f"{format_float(r.final_J)},{format_float(r.wall_ms)}\n"
            )


def read_bench_csv(path):
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != BENCH_HEADER:
        raise MatrixParseError(
            f"bad benchmark CSV header: {lines[0] if lines else ''!r}"
        )
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 8:
            raise MatrixParseError(f"line {lineno}: expected 8 fields, got {len(parts)}")
        try:
            rows.append(
                BenchRow(
                    n=int(parts[0]),
                    seed=int(parts[1]),
                    algorithm=parts[2],
                    iterations=int(parts[3]),
                    converged=_parse_bool(parts[4], lineno),
                    final_residual=float(parts[5]),
                    final_J=float(parts[6]),
                    wall_ms=float(parts[7]),
                )
            )
        except ValueError as exc:
            raise MatrixParseError(f"line {lineno}: {exc}") from None
    return rows


def write_trace_csv(path, trace):
    """Write one SolveTrace as iter,J,residual,step_ms rows."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(TRACE_HEADER + "\n")
        for k, j, res, ms in trace.iterates:
            fh.write(
                f"{k},{format_float(j)},{format_float(res)},{format_float(ms)}\n"
            )


def read_trace_csv(path):
    """Read a trace CSV back as a list of (iter, J, residual, step_ms)."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != TRACE_HEADER:
        raise MatrixParseError(f"bad trace CSV header: {lines[0] if lines else ''!r}")
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise MatrixParseError(f"line {lineno}: expected 4 fields, got {len(parts)}")
        try:
            out.append((int(parts[0]), float(parts[1]), float(parts[2]), float(parts[3])))
        except ValueError as exc:
            raise MatrixParseError(f"line {lineno}: {exc}") from None
    return out


# ---------------------------------------------------------------------------
# SVG plot

_PALETTE = {
    "phi": "#1f77b4",
    "jump": "#d62728",
    "gradient_ascent": "#2ca02c",
}

_W, _H = 640, 440
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 24, 40, 48


def _median(values):
    return float(np.median(np.asarray(values, dtype=float)))


def write_bench_svg(path, rows, title="median iterations vs n"):
    """Line chart of median iterations against matrix size, per algorithm.

    One polyline per algorithm present in ``rows``; x is log2(n), y is the
    median iteration count over seeds. Plain hand-built SVG, no deps.
    """
    by_alg = {}
    for r in rows:
        by_alg.setdefault(r.algorithm, {}).setdefault(r.n, []).append(r.iterations)
    if not by_alg:
        raise MatrixParseError("no rows to plot")

    dims = sorted({n for series in by_alg.values() for n in series})
    medians = {
        alg: [(n, _median(its)) for n, its in sorted(series.items())]
        for alg, series in by_alg.items()
    }
    xs = [math.log2(n) for n in dims]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    y_hi = max(m for series in medians.values() for _, m in series)
    if y_hi <= 0.0:
        y_hi = 1.0

    def sx(n):
        return _MARGIN_L + (math.log2(n) - x_lo) / (x_hi - x_lo) * (
            _W - _MARGIN_L - _MARGIN_R
        )

    def sy(y):
        return _H - _MARGIN_B - (y / y_hi) * (_H - _MARGIN_T - _MARGIN_B)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        # axes
        f'<line x1="{_MARGIN_L}" y1="{_H - _MARGIN_B}" x2="{_W - _MARGIN_R}" '
        f'y2="{_H - _MARGIN_B}" stroke="black"/>',
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" '
        f'y2="{_H - _MARGIN_B}" stroke="black"/>',
    ]
    for n in dims:
        x = sx(n)
        parts.append(
            f'<line x1="{x:.1f}" y1="{_H - _MARGIN_B}" x2="{x:.1f}" '
            f'y2="{_H - _MARGIN_B + 4}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{_H - _MARGIN_B + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{n}</text>'
        )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        y_val = frac * y_hi
        y = sy(y_val)
        parts.append(
            f'<line x1="{_MARGIN_L - 4}" y1="{y:.1f}" x2="{_MARGIN_L}" '
            f'y2="{y:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 8}" y="{y + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{y_val:.0f}</text>'
        )
    parts.append(
        f'<text x="{(_MARGIN_L + _W - _MARGIN_R) / 2:.1f}" y="{_H - 10}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">n</text>'
    )
    parts.append(
        f'<text x="16" y="{(_MARGIN_T + _H - _MARGIN_B) / 2:.1f}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {(_MARGIN_T + _H - _MARGIN_B) / 2:.1f})">'
        "median iterations</text>"
    )
    legend_y = _MARGIN_T + 6
    for alg in sorted(medians):
        color = _PALETTE.get(alg, "#7f7f7f")
        points = " ".join(f"{sx(n):.2f},{sy(m):.2f}" for n, m in medians[alg])
        parts.append(
            f'<polyline data-algorithm="{alg}" points="{points}" fill="none" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<rect x="{_W - 190}" y="{legend_y - 9}" width="14" height="3" '
            f'fill="{color}"/>'
        )
        parts.append(
            f'<text x="{_W - 172}" y="{legend_y - 3}" font-family="sans-serif" '
            f'font-size="11">{alg}</text>'
        )
        legend_y += 16
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")

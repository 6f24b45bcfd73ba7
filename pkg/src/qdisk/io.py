"""Plain-text series files.

Each file starts with a header line naming the kind and its parameters,
followed by one term per line (blank lines and ``#`` comments ignored)::

    freeseries n=2 cap=4          (1,0) [1,2]
    qseries n=2 cap=4 q=1/2       1/2 (1,1)
    defoseries n=2 cap=4 zwin=8   -3 (1,1) p=-1
"""

from __future__ import annotations

import io as _io
import re
from pathlib import Path

from .deformation import DefoSeries
from .free_series import FreeSeries
from .quantum_series import QContext, QSeries
from .scalars import format_scalar, parse_scalar

__all__ = ["KindError", "SeriesParseError", "format_series", "parse_series", "read_series"]

KINDS = {"free": "freeseries", "q": "qseries", "defo": "defoseries"}


class SeriesParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class KindError(SeriesParseError):
    pass


_HEADER_RE = re.compile(r"^(freeseries|qseries|defoseries)((?:\s+\w+=\S+)*)\s*$")
_FREE_TERM = re.compile(r"^(?P<c>.+?)\s*\[(?P<idx>[^\]]*)\]$")
_Q_TERM = re.compile(r"^(?P<c>.+?)\s*\((?P<idx>[^()]*)\)$")
_DEFO_TERM = re.compile(r"^(?P<c>.+?)\s*\((?P<idx>[^()]*)\)\s+p=(?P<p>[+-]?\d+)$")


def _ints(text: str, lineno: int) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise SeriesParseError(f"bad index list [{text}]", lineno) from None


def _header_params(text: str, lineno: int) -> dict:
    params = {}
    for item in text.split():
        key, _, val = item.partition("=")
        params[key] = val
    return params


def _need_int(params, key, lineno):
    if key not in params:
        raise SeriesParseError(f"header is missing {key}=", lineno)
    try:
        return int(params[key])
    except ValueError:
        raise SeriesParseError(f"header field {key} must be an integer", lineno) from None


def parse_series(source, kind: str | None = None):
    """Parse text (a string or a readable stream).

    Returns a FreeSeries, a (QSeries, QContext) pair, or a DefoSeries.
    ``kind`` ("free", "q", "defo") is checked against the header.
    """
    if isinstance(source, str):
        source = _io.StringIO(source)
    lines = [(i + 1, raw.split("#", 1)[0].strip()) for i, raw in enumerate(source)]
    lines = [(i, s) for i, s in lines if s]
    if not lines:
        raise SeriesParseError("empty input: no header line")
    lineno, head = lines[0]
    m = _HEADER_RE.match(head)
    if not m:
        raise SeriesParseError(f"unrecognised header {head!r}", lineno)
    found = m.group(1)
    if kind is not None and KINDS.get(kind) != found:
        raise KindError(f"expected a {KINDS.get(kind, kind)} file, found {found}", lineno)
    params = _header_params(m.group(2), lineno)
    n = _need_int(params, "n", lineno)
    cap = _need_int(params, "cap", lineno)
    if n < 1 or cap < 0:
        raise SeriesParseError("header needs n >= 1 and cap >= 0", lineno)

    terms: dict = {}
    pattern = {"freeseries": _FREE_TERM, "qseries": _Q_TERM, "defoseries": _DEFO_TERM}[found]
    zwin = _need_int(params, "zwin", lineno) if found == "defoseries" else None
    for lineno, text in lines[1:]:
        t = pattern.match(text)
        if not t:
            raise SeriesParseError(f"malformed term {text!r}", lineno)
        try:
            c = parse_scalar(t.group("c"))
        except ValueError as exc:
            raise SeriesParseError(str(exc), lineno) from None
        idx = _ints(t.group("idx"), lineno)
        if found == "freeseries":
            if any(not 1 <= a <= n for a in idx):
                raise SeriesParseError(f"letter outside 1..{n} in [{t.group('idx')}]", lineno)
            if len(idx) > cap:
                raise SeriesParseError(f"word longer than cap {cap}", lineno)
            key = idx
        else:
            if len(idx) != n or any(a < 0 for a in idx):
                raise SeriesParseError(f"multi-index must have {n} nonnegative entries", lineno)
            if sum(idx) > cap:
                raise SeriesParseError(f"degree above cap {cap}", lineno)
            key = idx
            if found == "defoseries":
                p = int(t.group("p"))
                if abs(p) > zwin:
                    raise SeriesParseError(f"z-exponent {p} outside window {zwin}", lineno)
                key = (idx, p)
        terms[key] = terms[key] + c if key in terms else c

    if found == "freeseries":
        return FreeSeries(terms, n, cap)
    if found == "defoseries":
        return DefoSeries(terms, n, cap, zwin)
    if "q" not in params:
        raise SeriesParseError("qseries header is missing q=", lines[0][0])
    try:
        ctx = QContext(n, parse_scalar(params["q"]))
    except ValueError as exc:
        raise SeriesParseError(str(exc), lines[0][0]) from None
    return QSeries(terms, n, cap), ctx


def read_series(path, kind: str | None = None):
    with Path(path).open() as fh:
        return parse_series(fh, kind)


def _idx(t) -> str:
    return ",".join(str(a) for a in t)


def format_series(series, ctx: QContext | None = None) -> str:
    """Canonical text: header, then terms in graded lexicographic order."""
    if isinstance(series, FreeSeries):
        out = [f"freeseries n={series.n} cap={series.cap}"]
        out += [f"{format_scalar(c)} [{_idx(w)}]" for w, c in series.items()]
    elif isinstance(series, QSeries):
        q = format_scalar(ctx.q) if ctx is not None else "1"
        out = [f"qseries n={series.n} cap={series.cap} q={q}"]
        out += [f"{format_scalar(c)} ({_idx(k)})" for k, c in series.items()]
    elif isinstance(series, DefoSeries):
        out = [f"defoseries n={series.n} cap={series.cap} zwin={series.zwin}"]
        out += [f"{format_scalar(c)} ({_idx(k)}) p={p}" for (k, p), c in series.items()]
    else:
        raise TypeError(f"cannot serialise {type(series).__name__}")
    return "\n".join(out) + "\n"

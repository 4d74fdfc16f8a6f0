"""Bit-exact text formats: handlebody, disk-bundle table, module files.

All formats are line-oriented, diff-friendly and hand-editable.
Canonical rendering sorts lines by kind and then by id, so
parse-then-render is byte-stable.  Parse errors carry line and column.
"""

from __future__ import annotations

import re

from .errors import FormatError, KirbyCalcError
from .forms import DecoratedModule, decorated_module
from .genus import DiskBundleTable, disk_bundle_table
from .handlebody import Handlebody2, TwoHandle, handlebody
from .intmat import IntMatrix
from .legendrian import FrontCounts
from .values import OrderedValue

HANDLEBODY_HEADER = "handlebody v1"
MODULE_HEADER = "module v1"


def _tokens(line):
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _int(text, lineno, col, what="integer"):
    try:
        return int(text)
    except ValueError:
        raise FormatError(f"expected {what}, got {text!r}", lineno, col) from None


def _field(token, name, lineno, col):
    if not token.startswith(name + "="):
        raise FormatError(f"expected {name}=<value>, got {token!r}", lineno, col)
    return token[len(name) + 1:]


# ---------------------------------------------------------------------------
# handlebody files


def render_handlebody(h: Handlebody2) -> str:
    lines = [HANDLEBODY_HEADER, f"one_handles {h.k}"]
    for idx, th in enumerate(h.two_handles):
        word = " ".join(str(x) for x in th.word)
        lines.append(f"two_handle {idx + 1} word={word} framing={th.framing}")
    for i in range(h.n):
        for j in range(i + 1, h.n):
            v = h.linking[i, j]
            if v != 0:
                lines.append(f"linking {i + 1} {j + 1} {v}")
    for idx, th in enumerate(h.two_handles):
        if th.front is not None:
            f = th.front
            lines.append(
                f"front {idx + 1} writhe={f.writhe} right={f.right_cusps} "
                f"up={f.up_cusps} down={f.down_cusps}"
            )
    return "\n".join(lines) + "\n"


def parse_handlebody(text: str) -> Handlebody2:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HANDLEBODY_HEADER:
        raise FormatError(f"missing header {HANDLEBODY_HEADER!r}", 1, 1)
    one_handles = None
    raw_handles = {}   # id -> (word, framing, lineno)
    raw_links = {}     # (i, j) normalized -> (value, lineno)
    raw_fronts = {}    # id -> FrontCounts
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        toks = _tokens(line)
        kind, col0 = toks[0]
        if kind == "one_handles":
            if len(toks) != 2:
                raise FormatError("one_handles takes one count", lineno, col0)
            if one_handles is not None:
                raise FormatError("duplicate one_handles line", lineno, col0)
            one_handles = _int(toks[1][0], lineno, toks[1][1], "count")
            if one_handles < 0:
                raise FormatError("one_handles must be non-negative",
                                  lineno, toks[1][1])
        elif kind == "two_handle":
            if len(toks) < 4:
                raise FormatError("malformed two_handle line", lineno, col0)
            hid = _int(toks[1][0], lineno, toks[1][1], "2-handle id")
            if hid in raw_handles:
                raise FormatError(f"duplicate 2-handle id {hid}", lineno,
                                  toks[1][1])
            first = _field(toks[2][0], "word", lineno, toks[2][1])
            word = []
            if first:
                word.append(_int(first, lineno, toks[2][1], "word letter"))
            i = 3
            while i < len(toks) and not toks[i][0].startswith("framing="):
                word.append(_int(toks[i][0], lineno, toks[i][1], "word letter"))
                i += 1
            if i >= len(toks):
                raise FormatError("missing framing=<int>", lineno, col0)
            framing = _int(_field(toks[i][0], "framing", lineno, toks[i][1]),
                           lineno, toks[i][1])
            if i + 1 != len(toks):
                raise FormatError("trailing tokens after framing", lineno,
                                  toks[i + 1][1])
            raw_handles[hid] = (tuple(word), framing, lineno)
        elif kind == "linking":
            if len(toks) != 4:
                raise FormatError("linking takes ids i j and a value",
                                  lineno, col0)
            i = _int(toks[1][0], lineno, toks[1][1], "2-handle id")
            j = _int(toks[2][0], lineno, toks[2][1], "2-handle id")
            v = _int(toks[3][0], lineno, toks[3][1], "linking number")
            key = (min(i, j), max(i, j))
            if key in raw_links and raw_links[key][0] != v:
                raise FormatError(
                    f"conflicting linking values for pair {key}", lineno, col0
                )
            raw_links[key] = (v, lineno)
        elif kind == "front":
            if len(toks) != 6:
                raise FormatError("malformed front line", lineno, col0)
            hid = _int(toks[1][0], lineno, toks[1][1], "2-handle id")
            if hid in raw_fronts:
                raise FormatError(f"duplicate front for 2-handle {hid}",
                                  lineno, toks[1][1])
            vals = {}
            for name, (tok, col) in zip(("writhe", "right", "up", "down"),
                                        toks[2:6]):
                vals[name] = _int(_field(tok, name, lineno, col), lineno, col)
            try:
                raw_fronts[hid] = FrontCounts(
                    writhe=vals["writhe"], right_cusps=vals["right"],
                    up_cusps=vals["up"], down_cusps=vals["down"]
                )
            except KirbyCalcError as exc:
                raise FormatError(str(exc), lineno, col0) from None
        else:
            raise FormatError(f"unknown line kind {kind!r}", lineno, col0)
    if one_handles is None:
        raise FormatError("missing one_handles line", len(lines), 1)

    ids = sorted(raw_handles)
    index_of = {hid: i for i, hid in enumerate(ids)}
    n = len(ids)
    handles = []
    for hid in ids:
        word, framing, lineno = raw_handles[hid]
        front = raw_fronts.pop(hid, None)
        handles.append(TwoHandle(word=word, framing=framing, front=front))
    if raw_fronts:
        hid = sorted(raw_fronts)[0]
        raise FormatError(f"front for unknown 2-handle {hid}", len(lines), 1)
    linking = [[handles[i].framing if i == j else 0 for j in range(n)]
               for i in range(n)]
    for (i, j), (v, lineno) in raw_links.items():
        for hid in (i, j):
            if hid not in index_of:
                raise FormatError(f"linking names unknown 2-handle {hid}",
                                  lineno, 1)
        a, b = index_of[i], index_of[j]
        if a == b:
            if v != handles[a].framing:
                raise FormatError(
                    f"diagonal linking {v} conflicts with framing "
                    f"{handles[a].framing}", lineno, 1
                )
            continue
        linking[a][b] = v
        linking[b][a] = v
    try:
        return handlebody(one_handles, handles,
                          IntMatrix.from_rows(linking, cols=n))
    except KirbyCalcError as exc:
        raise FormatError(str(exc), 1, 1) from None


# ---------------------------------------------------------------------------
# disk-bundle table files


def render_table(t: DiskBundleTable) -> str:
    lines = []
    for (g, n) in sorted(t.entries):
        lines.append(f"entry g={g} n={n} value={t.entries[(g, n)]}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> DiskBundleTable:
    entries = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        toks = _tokens(line)
        kind, col0 = toks[0]
        if kind != "entry" or len(toks) != 4:
            raise FormatError("expected: entry g=<int> n=<int> value=<v>",
                              lineno, col0)
        g = _int(_field(toks[1][0], "g", lineno, toks[1][1]), lineno,
                 toks[1][1])
        n = _int(_field(toks[2][0], "n", lineno, toks[2][1]), lineno,
                 toks[2][1])
        raw = _field(toks[3][0], "value", lineno, toks[3][1])
        try:
            val = OrderedValue.parse(raw)
        except ValueError as exc:
            raise FormatError(str(exc), lineno, toks[3][1]) from None
        if (g, n) in entries:
            raise FormatError(f"duplicate entry for g={g} n={n}", lineno, col0)
        entries[(g, n)] = val
    try:
        return disk_bundle_table(entries)
    except KirbyCalcError as exc:
        raise FormatError(str(exc), 1, 1) from None


# ---------------------------------------------------------------------------
# module files


def render_module(d: DecoratedModule) -> str:
    lines = [MODULE_HEADER]
    for i, t in enumerate(d.orders):
        lines.append(f"generator {i + 1} order={t}")
    n = d.ngens
    for i in range(n):
        for j in range(i, n):
            v = d.form[i, j]
            if v != 0:
                lines.append(f"form {i + 1} {j + 1} {v}")
    for key in sorted(d.gvalues):
        parts = ["genus"] + [str(c) for c in key] + [f"value={d.gvalues[key]}"]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_module(text: str) -> DecoratedModule:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MODULE_HEADER:
        raise FormatError(f"missing header {MODULE_HEADER!r}", 1, 1)
    orders = {}
    form_entries = {}
    gvalues = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        toks = _tokens(line)
        kind, col0 = toks[0]
        if kind == "generator":
            if len(toks) != 3:
                raise FormatError("generator takes an id and order=<int>",
                                  lineno, col0)
            gid = _int(toks[1][0], lineno, toks[1][1], "generator id")
            if gid in orders:
                raise FormatError(f"duplicate generator {gid}", lineno,
                                  toks[1][1])
            orders[gid] = _int(_field(toks[2][0], "order", lineno, toks[2][1]),
                               lineno, toks[2][1])
        elif kind == "form":
            if len(toks) != 4:
                raise FormatError("form takes ids i j and a value", lineno,
                                  col0)
            i = _int(toks[1][0], lineno, toks[1][1], "generator id")
            j = _int(toks[2][0], lineno, toks[2][1], "generator id")
            v = _int(toks[3][0], lineno, toks[3][1], "form value")
            key = (min(i, j), max(i, j))
            if key in form_entries and form_entries[key] != v:
                raise FormatError(f"conflicting form values for {key}",
                                  lineno, col0)
            form_entries[key] = v
        elif kind == "genus":
            if len(toks) < 2 or not toks[-1][0].startswith("value="):
                raise FormatError(
                    "expected: genus <coefficients> value=<v>", lineno, col0
                )
            coeffs = tuple(
                _int(tok, lineno, col, "coefficient")
                for tok, col in toks[1:-1]
            )
            raw = _field(toks[-1][0], "value", lineno, toks[-1][1])
            try:
                val = OrderedValue.parse(raw)
            except ValueError as exc:
                raise FormatError(str(exc), lineno, toks[-1][1]) from None
            gvalues.append((coeffs, val, lineno))
        else:
            raise FormatError(f"unknown line kind {kind!r}", lineno, col0)
    ids = sorted(orders)
    if ids != list(range(1, len(ids) + 1)):
        raise FormatError("generator ids must be 1..n", 1, 1)
    n = len(ids)
    form = [[0] * n for _ in range(n)]
    for (i, j), v in form_entries.items():
        if not (1 <= i <= n and 1 <= j <= n):
            raise FormatError(f"form names unknown generator in {(i, j)}", 1, 1)
        form[i - 1][j - 1] = v
        form[j - 1][i - 1] = v
    table = {}
    for coeffs, val, lineno in gvalues:
        if len(coeffs) != n:
            raise FormatError(
                f"genus line needs {n} coefficients, got {len(coeffs)}",
                lineno, 1
            )
        table[coeffs] = val
    try:
        return decorated_module(tuple(orders[i] for i in ids),
                                IntMatrix.from_rows(form, cols=n), table)
    except KirbyCalcError as exc:
        raise FormatError(str(exc), 1, 1) from None

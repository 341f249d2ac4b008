"""Primary-key declarations.

One declaration per line, ``predicate/arity: i,j,...`` with 1-based
positions; ``#`` starts a comment.  Predicates without a declaration use all
of their positions as the key.
"""

from __future__ import annotations

import re

_LINE = re.compile(r"^(-?[a-z][A-Za-z0-9_']*)\s*/\s*(\d+)\s*:\s*(\d+(?:\s*,\s*\d+)*)$")


class KeyFileError(ValueError):
    pass


def parse_keys(text: str) -> dict:
    """Parse key declarations into ``{(name, arity): frozenset(positions)}``."""
    keys = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if m is None:
            raise KeyFileError(f"line {lineno}: expected 'predicate/arity: i,j,...', got {raw!r}")
        pred = (m.group(1), int(m.group(2)))
        if pred in keys:
            raise KeyFileError(f"line {lineno}: duplicate key for {pred[0]}/{pred[1]}")
        positions = frozenset(int(x) for x in m.group(3).split(","))
        bad = sorted(i for i in positions if not 1 <= i <= pred[1])
        if bad:
            raise KeyFileError(f"line {lineno}: positions {bad} outside arity {pred[1]}")
        keys[pred] = positions
    return keys


def load_keys(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_keys(fh.read())


def key_positions(keys, pred) -> frozenset:
    """Declared key of ``pred``, or all of its positions."""
    declared = keys.get(pred) if keys else None
    if declared:
        return declared
    return frozenset(range(1, pred[1] + 1))


def format_keys(keys) -> str:
    return "".join(f"{name}/{arity}: {','.join(map(str, sorted(pos)))}\n"
                   for (name, arity), pos in sorted(keys.items()))

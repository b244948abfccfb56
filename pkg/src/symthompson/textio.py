"""Line-oriented text formats for elements, points and group references.

An element file looks like::

    group z2.grp
    map 0 -> 1 : a
    map 1 -> 0 : id

The group path is resolved relative to the element file.  A reference of the
form ``stock:<name>:<d>`` names one of the built-in groups instead, and
``image:<ref>`` the image q(H) of the referenced group.  Domain
and range trees are read off the leaf sets and validated.
"""

from __future__ import annotations

import os
import re
from pathlib import Path

from .element import CantorPoint, SymTreePair, format_element
from .errors import GroupMismatchError, InputError, ParseError
from .localgroup import DEFAULT_SIZE_LIMIT, STOCK_GROUPS, LocalGroup, load_group

_MAP_RE = re.compile(r"map\s+(\S+)\s*->\s*(\S+)\s*:\s*(\S.*?)\s*$")


class GroupCache:
    """Load each group once so that elements read from several files share it."""

    def __init__(self, size_limit: int = DEFAULT_SIZE_LIMIT):
        self.size_limit = size_limit
        self._groups: dict[str, LocalGroup] = {}

    def get(self, ref: str, base_dir: str | os.PathLike | None = None) -> LocalGroup:
        if ref.startswith("image:"):
            return self.get(ref[len("image:"):], base_dir).image()
        key = self._resolve(ref, base_dir)
        if key not in self._groups:
            self._groups[key] = self._load(key)
        return self._groups[key]

    def _resolve(self, ref: str, base_dir) -> str:
        if ref.startswith("stock:"):
            return ref
        path = Path(ref)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return str(path.resolve())

    def _load(self, key: str) -> LocalGroup:
        if key.startswith("stock:"):
            return stock_group(key)
        if not os.path.exists(key):
            raise InputError(f"group file {key} not found")
        return load_group(key, size_limit=self.size_limit)


def stock_group(ref: str) -> LocalGroup:
    """``stock:<name>:<d>`` with name one of trivial, z2, z2ker, sym3."""
    parts = ref.split(":")
    if len(parts) != 3 or parts[1] not in STOCK_GROUPS or not parts[2].isdigit():
        names = ", ".join(STOCK_GROUPS)
        raise InputError(f"bad stock group reference {ref!r} (names: {names})")
    group = STOCK_GROUPS[parts[1]](int(parts[2]))
    group.name = ref
    return group


def parse_element(text: str, group: LocalGroup | None = None, cache: GroupCache | None = None,
                  base_dir=None) -> tuple[SymTreePair, str | None]:
    """Parse element text; returns the element and its group reference.

    ``group`` is used when the text has no ``group`` line.  If both are
    present they must agree.
    """
    cache = cache or GroupCache()
    ref = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.lstrip()
        indent = len(line) - len(stripped)
        if stripped.startswith("group"):
            if ref is not None:
                raise ParseError("second group line", lineno, indent + 1)
            parts = stripped.split(None, 1)
            if len(parts) != 2 or parts[0] != "group":
                raise ParseError("expected 'group <file>'", lineno, indent + 1)
            ref = parts[1].strip()
            continue
        m = _MAP_RE.fullmatch(stripped)
        if not m:
            raise ParseError("expected 'map <leaf> -> <leaf> : <word>'", lineno, indent + 1)
        rows.append((lineno, indent, m))
    if ref is not None:
        found = cache.get(ref, base_dir)
        if group is not None and found is not group:
            raise GroupMismatchError(f"element uses group {ref}, expected {group.name}")
        group = found
    if group is None:
        raise ParseError("no group line and no group given", 1, 1)
    if not rows:
        raise ParseError("element has no map lines", 1, 1)
    mapping = {}
    d = group.arity
    for lineno, indent, m in rows:
        dom = _leaf(m.group(1), d, lineno, indent + m.start(1) + 1)
        rng = _leaf(m.group(2), d, lineno, indent + m.start(2) + 1)
        if dom in mapping:
            raise ParseError(f"leaf {m.group(1)} mapped twice", lineno, indent + m.start(1) + 1)
        try:
            lab = group.parse_word(m.group(3))
        except InputError as exc:
            raise ParseError(str(exc), lineno, indent + m.start(3) + 1) from None
        mapping[dom] = (rng, lab)
    try:
        return SymTreePair(group, mapping), ref
    except InputError as exc:
        raise ParseError(str(exc)) from None


def _leaf(tok: str, d: int, line: int, column: int) -> str:
    if tok == "e":
        return ""
    for k, ch in enumerate(tok):
        if not ch.isdigit() or int(ch) >= d:
            raise ParseError(f"bad digit {ch!r} in leaf {tok!r}", line, column + k)
    return tok


def read_element(path, group: LocalGroup | None = None,
                 cache: GroupCache | None = None) -> tuple[SymTreePair, str | None]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_element(text, group, cache, base_dir=path.parent)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def print_element(e: SymTreePair, group_ref: str | None = None) -> str:
    return format_element(e, group_ref)


def parse_point(text: str, d: int) -> CantorPoint:
    try:
        return CantorPoint.parse(text, d)
    except InputError as exc:
        raise ParseError(str(exc), 1, 1) from None

"""Finite local groups H together with a boundary permutation map q: H -> Sym(d).

H is given by generating permutations of some degree N and the value of q on
each generator.  The closure is computed breadth-first and q is extended
along every edge of the Cayley graph, so an inconsistent q is detected while
building rather than trusted.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import GroupMismatchError, InputError, ParseError, QConflictError, SizeLimitError
from .trees import check_arity

DEFAULT_SIZE_LIMIT = 20160
# full pairwise homomorphism check only below this many pairs
PAIRWISE_CHECK_LIMIT = 250_000


@dataclass(frozen=True)
class Perm:
    """A permutation of ``{0, ..., n-1}`` stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise InputError(f"{self.images} is not a permutation")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[int]]) -> "Perm":
        images = list(range(n))
        seen = set()
        for cycle in cycles:
            for x in cycle:
                if not 0 <= x < n:
                    raise InputError(f"point {x} outside 0..{n - 1}")
                if x in seen:
                    raise InputError(f"point {x} appears twice in cycle notation")
                seen.add(x)
            for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
                images[a] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        # (self * other)(i) = self(other(i))
        return Perm(tuple(self.images[i] for i in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cycle.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cycle))
        return out

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


@dataclass(frozen=True)
class Generator:
    name: str
    perm: Perm
    q: Perm


class LocalGroup:
    """A finite permutation group H with a verified homomorphism q to Sym(d).

    Elements are indexed ``0 .. order-1`` in breadth-first order from the
    identity: the queue is processed first-in first-out and each element is
    extended by the generators in the order given.  Index 0 is the identity.
    """

    def __init__(self, d: int, degree: int, generators: Sequence[Generator],
                 size_limit: int = DEFAULT_SIZE_LIMIT, name: str | None = None):
        check_arity(d)
        if degree < 1:
            raise InputError("permutation degree must be positive")
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            raise InputError("duplicate generator name")
        for g in generators:
            if g.perm.degree != degree:
                raise InputError(f"generator {g.name} has degree {g.perm.degree}, expected {degree}")
            if g.q.degree != d:
                raise InputError(f"q-image of {g.name} has degree {g.q.degree}, expected {d}")
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", g.name) or g.name == "id":
                raise InputError(f"bad generator name {g.name!r}")
        self.arity = d
        self.degree = degree
        self.generators = tuple(generators)
        self.size_limit = size_limit
        self.name = name
        self._close()
        self._verify()

    def _close(self):
        ident = Perm.identity(self.degree)
        self.perms: list[Perm] = [ident]
        self.q_images: list[Perm] = [Perm.identity(self.arity)]
        self.words: list[tuple[int, ...]] = [()]
        self._index = {ident: 0}
        self._right_gen: list[list[int]] = []
        queue = deque([0])
        while queue:
            x = queue.popleft()
            row = []
            for gi, gen in enumerate(self.generators):
                y = self.perms[x] * gen.perm
                qy = self.q_images[x] * gen.q
                j = self._index.get(y)
                if j is None:
                    j = len(self.perms)
                    if j >= self.size_limit:
                        raise SizeLimitError(f"closure exceeds {self.size_limit} elements")
                    self._index[y] = j
                    self.perms.append(y)
                    self.q_images.append(qy)
                    self.words.append(self.words[x] + (gi,))
                    queue.append(j)
                elif self.q_images[j] != qy:
                    raise QConflictError(
                        f"q is not well defined: {self.format_word(self.words[x] + (gi,))} "
                        f"equals {self.format_word(self.words[j])} in H but q gives "
                        f"{qy} and {self.q_images[j]}"
                    )
                row.append(j)
            self._right_gen.append(row)
        self.order = len(self.perms)
        self._inverse = [self._index[p.inverse()] for p in self.perms]
        digits = "".join(str(j) for j in range(self.arity))
        self.q_trans = [str.maketrans(digits, "".join(str(q(j)) for j in range(self.arity)))
                        for q in self.q_images]
        self.q_inv_trans = [self.q_trans[self._inverse[i]] for i in range(self.order)]
        self._image = None
        self._table = None
        if self.order * self.order <= PAIRWISE_CHECK_LIMIT:
            self._table = [[self._index[a * b] for b in self.perms] for a in self.perms]

    def _verify(self):
        # Consistency along every Cayley-graph edge (checked in _close) already
        # makes q a homomorphism; the pairwise pass is a belt-and-braces check.
        if self._table is None:
            return
        for a in range(self.order):
            qa = self.q_images[a]
            for b in range(self.order):
                if self.q_images[self._table[a][b]] != qa * self.q_images[b]:
                    raise QConflictError("q fails to be multiplicative")  # pragma: no cover

    # index-level arithmetic, used by the element calculus

    def mul_idx(self, a: int, b: int) -> int:
        if self._table is not None:
            return self._table[a][b]
        return self._index[self.perms[a] * self.perms[b]]

    def inv_idx(self, a: int) -> int:
        return self._inverse[a]

    def q_idx(self, a: int) -> Perm:
        return self.q_images[a]

    def index_of(self, perm: Perm) -> int:
        try:
            return self._index[perm]
        except KeyError:
            raise InputError(f"{perm} is not an element of the group") from None

    # element-level API

    def element(self, index: int) -> "LocalElement":
        if not 0 <= index < self.order:
            raise InputError(f"no element with index {index}")
        return LocalElement(self, index)

    def identity(self) -> "LocalElement":
        return LocalElement(self, 0)

    def elements(self) -> list["LocalElement"]:
        return [LocalElement(self, i) for i in range(self.order)]

    def generator(self, name: str) -> "LocalElement":
        for gi, gen in enumerate(self.generators):
            if gen.name == name:
                return LocalElement(self, self._index[gen.perm])
        raise InputError(f"unknown generator {name!r}")

    def generator_elements(self) -> list["LocalElement"]:
        return [LocalElement(self, self._index[g.perm]) for g in self.generators]

    def format_word(self, word: Sequence[int]) -> str:
        if not word:
            return "id"
        return "*".join(self.generators[g].name for g in word)

    def word_of(self, index: int) -> str:
        return self.format_word(self.words[index])

    def parse_word(self, text: str) -> int:
        text = text.strip()
        if text == "id":
            return 0
        idx = 0
        for part in text.split("*"):
            part = part.strip()
            if part == "id":
                continue
            gen = self.generator(part)
            idx = self.mul_idx(idx, gen.index)
        return idx

    def section_table(self, image: "LocalGroup") -> list[int]:
        """For each element of ``image`` (a copy of q(H)), the first index mapping to it."""
        out = [-1] * image.order
        for i, qi in enumerate(self.q_images):
            j = image.index_of(qi)
            if out[j] < 0:
                out[j] = i
        return out

    def image(self) -> "LocalGroup":
        """Cached :func:`image_group` of this group."""
        if self._image is None:
            self._image = image_group(self)
        return self._image

    def is_faithful(self) -> bool:
        return len(set(self.q_images)) == self.order

    def __repr__(self):
        label = self.name or "LocalGroup"
        return f"<{label}: d={self.arity}, N={self.degree}, order={self.order}>"


@dataclass(frozen=True, eq=False)
class LocalElement:
    group: LocalGroup
    index: int

    def __eq__(self, other):
        if not isinstance(other, LocalElement):
            return NotImplemented
        return self.group is other.group and self.index == other.index

    def __hash__(self):
        return hash((id(self.group), self.index))

    @property
    def perm(self) -> Perm:
        return self.group.perms[self.index]

    @property
    def q(self) -> Perm:
        return self.group.q_images[self.index]

    def __mul__(self, other: "LocalElement") -> "LocalElement":
        return mul(self, other)

    def inverse(self) -> "LocalElement":
        return inv(self)

    def is_identity(self) -> bool:
        return self.index == 0

    def __str__(self):
        return self.group.word_of(self.index)

    def __repr__(self):
        return f"LocalElement({self.group.word_of(self.index)})"


def _same_group(g: LocalElement, h: LocalElement) -> None:
    if g.group is not h.group:
        raise GroupMismatchError("elements belong to different local groups")


def mul(g: LocalElement, h: LocalElement) -> LocalElement:
    """The product g*h, acting as h first and then g."""
    _same_group(g, h)
    return LocalElement(g.group, g.group.mul_idx(g.index, h.index))


def inv(g: LocalElement) -> LocalElement:
    return LocalElement(g.group, g.group.inv_idx(g.index))


def identity(group: LocalGroup) -> LocalElement:
    return group.identity()


def q_image(g: LocalElement) -> Perm:
    return g.q


def build_group(d: int, degree: int, gens, size_limit: int = DEFAULT_SIZE_LIMIT,
                name: str | None = None) -> LocalGroup:
    """Build a verified local group.

    ``gens`` is a sequence of ``(name, perm, q_perm)`` triples, where the
    permutations are :class:`Perm` instances or image sequences.
    """
    generators = []
    for gname, perm, qperm in gens:
        perm = perm if isinstance(perm, Perm) else Perm(tuple(perm))
        qperm = qperm if isinstance(qperm, Perm) else Perm(tuple(qperm))
        generators.append(Generator(gname, perm, qperm))
    return LocalGroup(d, degree, generators, size_limit=size_limit, name=name)


def image_group(group: LocalGroup) -> LocalGroup:
    """q(H) as a local group acting on d points, with q the identity map."""
    gens = [Generator(g.name, g.q, g.q) for g in group.generators]
    image = LocalGroup(group.arity, group.arity, gens, size_limit=group.size_limit,
                       name=f"image({group.name or 'H'})")
    if set(image.perms) != set(group.q_images):
        raise AssertionError("image group differs from the set of q-images")  # pragma: no cover
    return image


def section(group: LocalGroup, image: LocalGroup, gbar: LocalElement) -> LocalElement:
    """The first element of ``group`` (enumeration order) whose q-image is ``gbar``."""
    if gbar.group is not image:
        raise GroupMismatchError("element is not in the given image group")
    return LocalElement(group, group.section_table(image)[gbar.index])


# stock groups used by the campaigns and tests

def trivial_group(d: int) -> LocalGroup:
    return build_group(d, 1, [], name="trivial")


def z2_group(d: int) -> LocalGroup:
    """Z/2 acting by swapping boundary components 0 and 1."""
    swap = Perm.from_cycles(d, [(0, 1)])
    return build_group(d, 2, [("a", (1, 0), swap)], name="Z2")


def z2_kernel_group(d: int) -> LocalGroup:
    """Z/2 with trivial q: every label acts trivially on the boundary."""
    return build_group(d, 2, [("a", (1, 0), Perm.identity(d))], name="Z2ker")


def sym3_group(d: int) -> LocalGroup:
    """Sym(3); q is the identity for d = 3 and the sign map for d = 2."""
    s = Perm.from_cycles(3, [(0, 1)])
    r = Perm.from_cycles(3, [(0, 1, 2)])
    if d == 3:
        qs, qr = s, r
    elif d == 2:
        qs, qr = Perm((1, 0)), Perm.identity(2)
    else:
        qs = Perm.from_cycles(d, [(0, 1)])
        qr = Perm.from_cycles(d, [(0, 1, 2)])
    return build_group(d, 3, [("s", s, qs), ("r", r, qr)], name="Sym3")


STOCK_GROUPS = {
    "trivial": trivial_group,
    "z2": z2_group,
    "z2ker": z2_kernel_group,
    "sym3": sym3_group,
}


# group definition files

_CYCLES_RE = re.compile(r"\s*(\(\s*(\d+(\s+|\s*,\s*))*\d*\s*\)\s*)+\s*$")


def parse_cycles(text: str, n: int, line: int | None = None, column: int | None = None) -> Perm:
    if not _CYCLES_RE.match(text):
        raise ParseError(f"bad cycle notation {text.strip()!r}", line, column)
    cycles = []
    for body in re.findall(r"\(([^()]*)\)", text):
        points = [int(tok) for tok in re.split(r"[\s,]+", body.strip()) if tok]
        if points:
            cycles.append(points)
    try:
        return Perm.from_cycles(n, cycles)
    except InputError as exc:
        raise ParseError(str(exc), line, column) from None


def parse_group_text(text: str, size_limit: int = DEFAULT_SIZE_LIMIT,
                     name: str | None = None) -> LocalGroup:
    """Parse the line-oriented group format.

    ::

        d 2 N 2
        gen a = (0 1) ; q = (0 1)
    """
    header = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if header is None:
            m = re.fullmatch(r"\s*d\s+(\d+)\s+N\s+(\d+)\s*", line)
            if not m:
                raise ParseError("expected header 'd <d> N <N>'", lineno, 1)
            header = (int(m.group(1)), int(m.group(2)))
            continue
        m = re.fullmatch(r"\s*gen\s+(\S+)\s*=\s*([^;]*);\s*q\s*=\s*(.*)", line)
        if not m:
            raise ParseError("expected 'gen <name> = <cycles> ; q = <cycles>'", lineno, 1)
        d, n = header
        perm = parse_cycles(m.group(2), n, lineno, m.start(2) + 1)
        qperm = parse_cycles(m.group(3), d, lineno, m.start(3) + 1)
        gens.append((m.group(1), perm, qperm))
    if header is None:
        raise ParseError("empty group definition", 1, 1)
    d, n = header
    return build_group(d, n, gens, size_limit=size_limit, name=name)


def format_group_text(group: LocalGroup) -> str:
    lines = [f"d {group.arity} N {group.degree}"]
    for g in group.generators:
        lines.append(f"gen {g.name} = {g.perm} ; q = {g.q}")
    return "\n".join(lines) + "\n"


def load_group(path, size_limit: int = DEFAULT_SIZE_LIMIT) -> LocalGroup:
    with open(path) as fh:
        return parse_group_text(fh.read(), size_limit=size_limit, name=str(path))

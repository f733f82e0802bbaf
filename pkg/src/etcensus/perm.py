"""Permutations of {0, ..., n-1}.

A permutation is stored as the tuple of images, ``p.images[i]`` being the
image of ``i``.  Products are read left to right: ``p * q`` applies ``p``
first and then ``q``, so ``(p * q)(i) == q(p(i))``.

Cycle notation in files and on screen is 1-indexed, e.g. ``(1,2)(3,4)``.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Sequence

__all__ = [
    "Permutation",
    "compose",
    "inverse",
    "identity",
    "parse_cycles",
    "format_cycles",
]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        n = len(images)
        if n == 0:
            raise ValueError("permutation degree must be positive")
        seen = [False] * n
        for x in images:
            if not 0 <= x < n or seen[x]:
                raise ValueError(f"not a bijection on 0..{n - 1}: {images}")
            seen[x] = True
        self.images = images

    @classmethod
    def _trusted(cls, images: tuple) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from 0-indexed cycles."""
        img = list(range(n))
        seen = set()
        for cyc in cycles:
            cyc = list(cyc)
            for a in cyc:
                if a in seen or not 0 <= a < n:
                    raise ValueError(f"bad cycle {cyc} for degree {n}")
                seen.add(a)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls._trusted(tuple(img))

    @classmethod
    def parse(cls, text: str, n: int) -> "Permutation":
        """Parse 1-indexed cycle notation such as ``(1,2)(3,4)``."""
        return cls._trusted(parse_cycles(text, n))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __getitem__(self, i: int) -> int:
        return self.images[i]

    def __len__(self) -> int:
        return len(self.images)

    def __iter__(self):
        return iter(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation._trusted(compose(self.images, other.images))

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = tuple(range(len(self.images)))
        base = self.images
        while k:
            if k & 1:
                result = compose(result, base)
            base = compose(base, base)
            k >>= 1
        return Permutation._trusted(result)

    def inverse(self) -> "Permutation":
        return Permutation._trusted(inverse(self.images))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point."""
        seen = [False] * len(self.images)
        out = []
        for i in range(len(self.images)):
            if seen[i] or self.images[i] == i:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Sorted cycle lengths including fixed points."""
        lens = [len(c) for c in self.cycles()]
        fixed = len(self.images) - sum(lens)
        return tuple(sorted(lens + [1] * fixed, reverse=True))

    def order(self) -> int:
        o = 1
        for c in self.cycles():
            o = o * len(c) // math.gcd(o, len(c))
        return o

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self.images) if i != x]

    def __eq__(self, other) -> bool:
        if isinstance(other, Permutation):
            return self.images == other.images
        return NotImplemented

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self.images)!r}, n={len(self.images)})"

    def __str__(self) -> str:
        return format_cycles(self.images)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple:
    """Apply ``p`` then ``q``."""
    if len(p) != len(q):
        raise ValueError(f"degree mismatch: {len(p)} != {len(q)}")
    return tuple([q[i] for i in p])


def inverse(p: Sequence[int]) -> tuple:
    r = [0] * len(p)
    for i, j in enumerate(p):
        r[j] = i
    return tuple(r)


def identity(n: int) -> tuple:
    return tuple(range(n))


def parse_cycles(text: str, n: int) -> tuple:
    text = text.strip()
    img = list(range(n))
    rest = _CYCLE_RE.sub("", text).strip()
    if rest:
        raise ValueError(f"cannot parse cycle notation {text!r}")
    seen = set()
    for body in _CYCLE_RE.findall(text):
        body = body.strip()
        if not body:
            continue
        pts = [int(tok) - 1 for tok in re.split(r"[,\s]+", body) if tok]
        for a in pts:
            if not 0 <= a < n:
                raise ValueError(f"point {a + 1} out of range for degree {n} in {text!r}")
            if a in seen:
                raise ValueError(f"point {a + 1} repeated in {text!r}")
            seen.add(a)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def format_cycles(p: Sequence[int]) -> str:
    """1-indexed disjoint-cycle notation; the identity is ``()``."""
    if not isinstance(p, Permutation):
        p = Permutation._trusted(tuple(p))
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + ",".join(str(a + 1) for a in c) + ")" for c in cyc)

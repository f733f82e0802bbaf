"""Catalogue of transitive permutation groups of small degree.

Entries are the transitive subgroups of the symmetric group of each degree,
one per conjugacy class, found from the subgroup lattice.  A prebuilt copy
for degrees up to 10 ships with the package.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from . import __version__
from .perm import Permutation, format_cycles, parse_cycles
from .permgroup import PermGroup, symmetric_group
from .subgroups import subgroups_up_to_conjugacy

__all__ = [
    "CatalogueEntry",
    "Catalogue",
    "CatalogueError",
    "DEFAULT_DEGREE_CAP",
    "LONG_DEGREE_CAP",
    "KNOWN_COUNTS",
    "build_degree",
    "build_catalogue",
    "save_catalogue",
    "load_catalogue",
    "dumps_catalogue",
    "loads_catalogue",
    "shipped_catalogue",
    "SHIPPED_PATH",
]

DEFAULT_DEGREE_CAP = 8
LONG_DEGREE_CAP = 10

# published numbers of transitive groups per degree
KNOWN_COUNTS = {1: 1, 2: 1, 3: 2, 4: 5, 5: 5, 6: 16, 7: 7, 8: 50, 9: 34, 10: 45}

SHIPPED_PATH = "data/transitive_groups.txt"

_HEADER_RE = re.compile(r"^DEGREE (\d+) INDEX (\d+) ORDER (\d+)$")


class CatalogueError(ValueError):
    pass


@dataclass
class CatalogueEntry:
    degree: int
    index: int
    order: int
    generators: list[Permutation]

    @property
    def catalogue_id(self) -> tuple[int, int]:
        return (self.degree, self.index)

    def group(self) -> PermGroup:
        return PermGroup(self.degree, self.generators, order=self.order)

    def serialized_generators(self) -> str:
        return "\n".join(format_cycles(g.images) for g in self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CatalogueEntry):
            return NotImplemented
        return (self.degree, self.index, self.order, self.generators) == (
            other.degree, other.index, other.order, other.generators)


@dataclass
class Catalogue:
    max_degree: int
    entries: dict[int, list[CatalogueEntry]]
    provenance: dict[str, str] = field(default_factory=dict)

    def degree(self, k: int) -> list[CatalogueEntry]:
        if k > self.max_degree or k < 1:
            raise KeyError(f"catalogue covers degrees 1..{self.max_degree}, not {k}")
        return self.entries.get(k, [])

    def counts(self) -> dict[int, int]:
        return {k: len(self.entries.get(k, [])) for k in range(1, self.max_degree + 1)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Catalogue):
            return NotImplemented
        return self.max_degree == other.max_degree and self.entries == other.entries


def _sort_key(order: int, gens: list[Permutation]) -> tuple:
    return (order, "\n".join(format_cycles(g.images) for g in gens))


def build_degree(k: int, *, allow_long: bool = False) -> list[CatalogueEntry]:
    """Transitive groups of degree k up to conjugacy in the symmetric group."""
    if k < 1:
        raise ValueError("degree must be positive")
    cap = LONG_DEGREE_CAP if allow_long else DEFAULT_DEGREE_CAP
    if k > cap:
        raise ValueError(f"degree {k} exceeds the cap {cap}"
                         + ("" if allow_long else "; pass the long-run flag to go up to 10"))
    if k == 1:
        return [CatalogueEntry(1, 1, 1, [])]
    S = symmetric_group(k)
    found = []
    for H in subgroups_up_to_conjugacy(S, max_order=math.factorial(k)):
        if H.is_transitive():
            gens = sorted(Permutation(g) for g in H.small_generating_set())
            found.append((_sort_key(H.order(), gens), H.order(), gens))
    found.sort(key=lambda t: t[0])
    return [CatalogueEntry(k, i + 1, order, gens) for i, (_, order, gens) in enumerate(found)]


def build_catalogue(max_degree: int, *, allow_long: bool = False,
                    degrees: Iterable[int] | None = None) -> Catalogue:
    if max_degree < 1:
        raise ValueError("max_degree must be positive")
    cap = LONG_DEGREE_CAP if allow_long else DEFAULT_DEGREE_CAP
    if max_degree > cap:
        raise ValueError(f"max_degree {max_degree} exceeds the cap {cap}"
                         + ("" if allow_long else "; pass the long-run flag to go up to 10"))
    entries = {}
    for k in (degrees if degrees is not None else range(1, max_degree + 1)):
        entries[k] = build_degree(k, allow_long=allow_long)
    prov = {"engine": f"etcensus {__version__}", "method": "subgroup lattice of the symmetric group",
            "max_degree": str(max_degree)}
    return Catalogue(max_degree, entries, prov)


def dumps_catalogue(cat: Catalogue) -> str:
    lines = ["# transitive permutation groups, one per conjugacy class in the symmetric group"]
    for key in sorted(cat.provenance):
        lines.append(f"# {key}: {cat.provenance[key]}")
    counts = " ".join(f"{k}:{v}" for k, v in sorted(cat.counts().items()))
    lines.append(f"# counts {counts}")
    lines.append("")
    for k in range(1, cat.max_degree + 1):
        for e in cat.entries.get(k, []):
            lines.append(f"DEGREE {e.degree} INDEX {e.index} ORDER {e.order}")
            if e.generators:
                lines.extend(format_cycles(g.images) for g in e.generators)
            else:
                lines.append("()")
            lines.append("")
    return "\n".join(lines)


def save_catalogue(cat: Catalogue, path) -> None:
    Path(path).write_text(dumps_catalogue(cat), encoding="utf-8")


def loads_catalogue(text: str, *, verify_orders: bool = True) -> Catalogue:
    entries: dict[int, list[CatalogueEntry]] = {}
    prov: dict[str, str] = {}
    max_degree = 0
    cur = None
    cur_line = 0
    gens: list[Permutation] = []

    def finish():
        nonlocal cur
        if cur is None:
            return
        k, i, order = cur
        name = f"entry DEGREE {k} INDEX {i} (line {cur_line})"
        G = PermGroup(k, gens)
        if verify_orders and G.order() != order:
            raise CatalogueError(f"{name}: generators give order {G.order()}, header says {order}")
        if not G.is_transitive():
            raise CatalogueError(f"{name}: group is not transitive")
        lst = entries.setdefault(k, [])
        if i != len(lst) + 1:
            raise CatalogueError(f"{name}: index out of sequence")
        lst.append(CatalogueEntry(k, i, order, list(gens)))
        cur = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body and not body.startswith("counts"):
                key, val = body.split(":", 1)
                prov[key.strip()] = val.strip()
            continue
        if not line:
            finish()
            continue
        m = _HEADER_RE.match(line)
        if m:
            finish()
            cur = (int(m.group(1)), int(m.group(2)), int(m.group(3)))
            cur_line = lineno
            gens = []
            max_degree = max(max_degree, cur[0])
            continue
        if cur is None:
            raise CatalogueError(f"line {lineno}: generator outside an entry")
        try:
            img = parse_cycles(line, cur[0])
        except ValueError as exc:
            raise CatalogueError(
                f"line {lineno}: entry DEGREE {cur[0]} INDEX {cur[1]}: {exc}") from None
        if img != tuple(range(cur[0])):
            gens.append(Permutation(img))
    finish()
    if "max_degree" in prov:
        max_degree = max(max_degree, int(prov["max_degree"]))
    return Catalogue(max_degree, entries, prov)


def load_catalogue(path, *, verify_orders: bool = True) -> Catalogue:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"catalogue file {p} not found")
    return loads_catalogue(p.read_text(encoding="utf-8"), verify_orders=verify_orders)


_SHIPPED: Catalogue | None = None


def shipped_catalogue() -> Catalogue:
    """The prebuilt catalogue bundled with the package."""
    global _SHIPPED
    if _SHIPPED is None:
        text = resources.files("etcensus").joinpath(SHIPPED_PATH).read_text(encoding="utf-8")
        _SHIPPED = loads_catalogue(text)
    return _SHIPPED

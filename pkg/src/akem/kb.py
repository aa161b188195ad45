"""Knowledge base loading and alias expansion.

The knowledge base is a UTF-8 file of tab separated ``subject predicate
object`` triples.  The object of the reserved predicate ``name`` is the
entity's canonical name; every other triple is kept, in file order, as the
entity's description.

:func:`build_alias_dictionary` widens the set of surface strings that can
reach an entity: canonical names, lowercased English names, bracket-stripped
and middle-dot split names, place names without their administrative suffix,
and nicknames mined from the description text.
"""

from __future__ import annotations

import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

from .errors import MalformedLine, MissingName

logger = logging.getLogger(__name__)

NAME_PREDICATE = "name"


@dataclass(frozen=True)
class Entity:
    id: str
    name: str
    description: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if not self.id:
            raise ValueError("entity id must be non-empty")
        if not self.name:
            raise ValueError(f"entity {self.id!r} has an empty name")

    @property
    def objects(self) -> list[str]:
        return [obj for _, obj in self.description]


class KnowledgeBase:
    """Read-only mapping of entity id to :class:`Entity`, in load order."""

    def __init__(self, entities: Iterable[Entity] = ()):
        self._entities: dict[str, Entity] = {}
        for entity in entities:
            if entity.id in self._entities:
                raise ValueError(f"duplicate entity id {entity.id!r}")
            self._entities[entity.id] = entity

    def __getitem__(self, entity_id: str) -> Entity:
        return self._entities[entity_id]

    def get(self, entity_id: str, default=None):
        return self._entities.get(entity_id, default)

    def __contains__(self, entity_id) -> bool:
        return entity_id in self._entities

    def __iter__(self) -> Iterator[Entity]:
        return iter(self._entities.values())

    def __len__(self) -> int:
        return len(self._entities)

    def __repr__(self):
        return f"KnowledgeBase({len(self)} entities)"


def parse_kb_lines(lines: Iterable[str], path=None) -> KnowledgeBase:
    names: dict[str, str] = {}
    descriptions: dict[str, list[tuple[str, str]]] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t", 2)
        if len(fields) < 3:
            raise MalformedLine(line_no, "expected 3 tab-separated fields", path=path)
        subject, predicate, obj = (f.strip() for f in fields)
        if not subject:
            raise MalformedLine(line_no, "empty subject id", path=path)
        descriptions.setdefault(subject, [])
        if predicate == NAME_PREDICATE and subject not in names and obj:
            names[subject] = obj
        else:
            descriptions[subject].append((predicate, obj))
    entities = []
    for subject, desc in descriptions.items():
        if subject not in names:
            raise MissingName(subject)
        entities.append(Entity(subject, names[subject], tuple(desc)))
    return KnowledgeBase(entities)


def load_kb(triples_path) -> KnowledgeBase:
    """Load a triple file into a :class:`KnowledgeBase`.

    Blank lines and lines starting with ``#`` are ignored.  The first
    ``name`` triple of a subject wins; later ones are kept as description.
    """
    path = Path(triples_path)
    with path.open(encoding="utf-8") as fh:
        kb = parse_kb_lines(fh, path=path)
    logger.info("loaded %d entities from %s", len(kb), path)
    return kb


# -- expansion heuristics ---------------------------------------------------

_ASCII_LETTER = re.compile(r"[A-Za-z]")
_SPACES = re.compile(r" +")


def normalize_english_name(name: str) -> str | None:
    """``"Microsoft_Word"`` -> ``"microsoft word"``; ``None`` for other names."""
    if "_" not in name or not _ASCII_LETTER.search(name):
        return None
    out = _SPACES.sub(" ", name.replace("_", " ")).strip()
    out = "".join(c.lower() if c.isascii() else c for c in out)
    return out or None


_BRACKETS = "()（）"
_TRAILING_BRACKET = re.compile(r"^(.*?)_?[(（]([^()（）]*)[)）]\s*$", re.S)
_MIDDLE_DOTS = re.compile(r"[·・•‧]")


def strip_brackets(name: str) -> list[str]:
    """Alternative names obtained by dropping a trailing bracketed qualifier.

    ``"李安_(工程师)"`` gives ``["李安", "李安工程师"]``.  Names joined with a
    middle dot additionally contribute their last segment, so
    ``"贝拉克·奥巴马"`` gives ``["奥巴马"]``.
    """
    out: list[str] = []
    base = name
    m = _TRAILING_BRACKET.match(name)
    if m:
        head = m.group(1).rstrip("_").strip()
        qualifier = m.group(2).strip()
        if head:
            base = head
            out.append(head)
            if qualifier:
                out.append(head + qualifier)
    parts = _MIDDLE_DOTS.split(base)
    if len(parts) > 1:
        out.append(parts[-1].strip())

    result = []
    for alt in out:
        if alt and alt != name and alt not in result and not any(b in alt for b in _BRACKETS):
            result.append(alt)
    return result


class PlaceKind(str, Enum):
    PROVINCE = "Province"
    CITY = "City"
    COUNTY = "County"
    DISTRICT = "District"
    TOWN = "Town"
    VILLAGE = "Village"
    OTHER = "Other"


# 乡 (township) shares the Town level with 镇, so a kind may own two suffixes.
PLACE_SUFFIXES: dict[str, PlaceKind] = {
    "省": PlaceKind.PROVINCE,
    "市": PlaceKind.CITY,
    "县": PlaceKind.COUNTY,
    "区": PlaceKind.DISTRICT,
    "镇": PlaceKind.TOWN,
    "乡": PlaceKind.TOWN,
    "村": PlaceKind.VILLAGE,
}


@dataclass(frozen=True)
class PlaceEntry:
    base: str
    full: str
    kind: PlaceKind

    @property
    def suffix(self) -> str:
        return self.full[len(self.base):]


def place_entry(name: str) -> PlaceEntry | None:
    if len(name) < 2:
        return None
    kind = PLACE_SUFFIXES.get(name[-1])
    if kind is None:
        return None
    return PlaceEntry(base=name[:-1], full=name, kind=kind)


def place_directory(kb: KnowledgeBase) -> list[PlaceEntry]:
    """Place names in the KB, keyed by their name without the admin suffix."""
    out = []
    for entity in kb:
        entry = place_entry(entity.name)
        if entry is not None:
            out.append(entry)
    return out


_NICKNAME = re.compile(r"(?:别称|别名)[：:为]?([^，。；、,;]*)")


def extract_nicknames(entity: Entity) -> list[str]:
    found: list[str] = []
    for obj in entity.objects:
        for m in _NICKNAME.finditer(obj):
            nick = m.group(1).strip()
            if nick and nick not in found:
                found.append(nick)
    return found


# -- alias dictionary -------------------------------------------------------


class Provenance(str, Enum):
    ORIGINAL = "Original"
    ENGLISH_NORMALIZED = "EnglishNormalized"
    BRACKET_STRIPPED = "BracketStripped"
    PLACE_BASE = "PlaceBase"
    NICKNAME = "Nickname"


@dataclass(frozen=True, order=True)
class AliasEntry:
    surface: str
    entity_id: str
    provenance: Provenance

    def __post_init__(self):
        if not self.surface.strip():
            raise ValueError("alias surface must be non-empty")


class AliasDictionary:
    """Multimap from surface string to entity ids.

    Immutable once built.  ``lookup`` returns ids sorted ascending.
    """

    def __init__(self, entries: Iterable[AliasEntry]):
        self._entries = frozenset(entries)
        index: dict[str, set[str]] = defaultdict(set)
        for e in self._entries:
            index[e.surface].add(e.entity_id)
        self._index = {s: tuple(sorted(ids)) for s, ids in index.items()}
        self.max_surface_len = max((len(s) for s in self._index), default=0)

    def lookup(self, surface: str) -> tuple[str, ...]:
        return self._index.get(surface, ())

    def __contains__(self, surface) -> bool:
        return surface in self._index

    def __len__(self) -> int:
        return len(self._index)

    @property
    def surfaces(self):
        return self._index.keys()

    @cached_property
    def bigram_index(self) -> dict[str, tuple[str, ...]]:
        """Character bigram -> surfaces containing it (for fuzzy lookup)."""
        from .candidates import char_bigrams

        index: dict[str, list[str]] = defaultdict(list)
        for surface in sorted(self._index):
            for gram in char_bigrams(surface):
                index[gram].append(surface)
        return {g: tuple(s) for g, s in index.items()}

    @property
    def entries(self) -> frozenset[AliasEntry]:
        return self._entries

    def sorted_entries(self) -> list[AliasEntry]:
        return sorted(self._entries, key=lambda e: (e.surface, e.entity_id, e.provenance.value))

    def __eq__(self, other):
        if not isinstance(other, AliasDictionary):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(self._entries)

    def __repr__(self):
        return f"AliasDictionary({len(self)} surfaces, {len(self._entries)} entries)"

    def dump_lines(self) -> list[str]:
        return [f"{e.surface}\t{e.entity_id}\t{e.provenance.value}" for e in self.sorted_entries()]

    def dump(self, path) -> None:
        """Write ``surface<TAB>entity_id<TAB>provenance`` rows, sorted."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in self.dump_lines():
                fh.write(line + "\n")

    @classmethod
    def from_dump(cls, path) -> "AliasDictionary":
        entries = []
        with open(path, encoding="utf-8") as fh:
            for line_no, raw in enumerate(fh, start=1):
                line = raw.rstrip("\r\n")
                if not line or line.startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 3:
                    raise MalformedLine(line_no, "expected surface, entity_id, provenance", path=path)
                try:
                    prov = Provenance(fields[2])
                except ValueError:
                    raise MalformedLine(line_no, f"unknown provenance {fields[2]!r}", path=path)
                entries.append(AliasEntry(fields[0], fields[1], prov))
        return cls(entries)


def alias_entries(entity: Entity) -> list[AliasEntry]:
    out = [AliasEntry(entity.name.strip(), entity.id, Provenance.ORIGINAL)]
    english = normalize_english_name(entity.name)
    if english:
        out.append(AliasEntry(english, entity.id, Provenance.ENGLISH_NORMALIZED))
    for alt in strip_brackets(entity.name):
        out.append(AliasEntry(alt, entity.id, Provenance.BRACKET_STRIPPED))
    place = place_entry(entity.name)
    if place is not None:
        out.append(AliasEntry(place.base, entity.id, Provenance.PLACE_BASE))
    for nick in extract_nicknames(entity):
        out.append(AliasEntry(nick, entity.id, Provenance.NICKNAME))
    return out


def build_alias_dictionary(kb: KnowledgeBase) -> AliasDictionary:
    entries = []
    for entity in kb:
        entries.extend(e for e in alias_entries(entity) if e.surface.strip())
    aliases = AliasDictionary(entries)
    logger.info("alias dictionary: %r", aliases)
    return aliases

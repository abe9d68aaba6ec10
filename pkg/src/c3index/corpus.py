"""Bibliographic corpus ingestion, validation and year-bounded snapshots.

Two input formats are understood:

* the ArnetMiner citation text format (blank-line separated records with
  ``#*`` title, ``#@`` authors, ``#t`` year, ``#c`` venue, ``#index`` id,
  ``#%`` reference and ``#!`` abstract markers);
* a canonical JSON-lines format, one ``{"id", "title", "year", "authors",
  "refs"}`` object per line.

Both parsers share one validation path, so a corpus coming out of either is
closed (every reference resolves) and every record satisfies the
:class:`PaperRecord` invariants.
"""

from __future__ import annotations

import hashlib
import io
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Union

__all__ = [
    "CorpusError",
    "PaperRecord",
    "Corpus",
    "ParseReport",
    "Snapshot",
    "normalize_author",
    "parse_aminer",
    "parse_jsonl",
    "write_jsonl",
    "snapshot",
    "corpus_hash",
]

Stream = Union[IO[bytes], IO[str], Iterable[str], Iterable[bytes]]

_WS = re.compile(r"\s+")
_AUTHOR_SEP = re.compile(r"[;,]")
JSONL_KEYS = ("id", "title", "year", "authors", "refs")


class CorpusError(ValueError):
    """Raised for unreadable input or a corpus that violates its invariants."""


def normalize_author(name: str) -> str:
    """Trim and collapse internal whitespace. No case folding."""
    return _WS.sub(" ", name).strip()


@dataclass(frozen=True)
class PaperRecord:
    id: str
    title: str
    year: int
    author_names: tuple[str, ...]
    ref_ids: tuple[str, ...] = ()


@dataclass
class ParseReport:
    records_read: int = 0
    records_rejected: int = 0
    dangling_refs_dropped: int = 0
    self_refs_dropped: int = 0
    duplicate_refs_dropped: int = 0
    duplicate_authors_collapsed: int = 0
    reject_reasons: Counter = field(default_factory=Counter)

    def reject(self, reason: str) -> None:
        self.records_rejected += 1
        self.reject_reasons[reason] += 1

    def summary(self) -> str:
        lines = [
            f"records read:                {self.records_read}",
            f"records rejected:            {self.records_rejected}",
            f"dangling refs dropped:       {self.dangling_refs_dropped}",
            f"self refs dropped:           {self.self_refs_dropped}",
            f"duplicate refs dropped:      {self.duplicate_refs_dropped}",
            f"duplicate authors collapsed: {self.duplicate_authors_collapsed}",
        ]
        for reason, n in sorted(self.reject_reasons.items()):
            lines.append(f"  rejected ({reason}): {n}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Corpus:
    """A closed set of papers, kept sorted by id.

    Construct through :meth:`from_records` (or the parsers) rather than
    directly, so that ordering and the author universe stay canonical.
    """

    papers: tuple[PaperRecord, ...] = ()
    author_universe: frozenset = frozenset()

    @classmethod
    def from_records(
        cls, records: Iterable[PaperRecord], report: ParseReport | None = None
    ) -> "Corpus":
        """Sort, and drop references to ids that are not in ``records``."""
        records = sorted(records, key=lambda r: r.id)
        ids = {r.id for r in records}
        papers = []
        dropped = 0
        for r in records:
            refs = tuple(x for x in r.ref_ids if x in ids)
            if len(refs) != len(r.ref_ids):
                dropped += len(r.ref_ids) - len(refs)
                r = PaperRecord(r.id, r.title, r.year, r.author_names, refs)
            papers.append(r)
        if report is not None:
            report.dangling_refs_dropped += dropped
        authors = frozenset(a for r in papers for a in r.author_names)
        return cls(tuple(papers), authors)

    def __len__(self) -> int:
        return len(self.papers)

    def validate(self) -> None:
        """Raise :class:`CorpusError` if any corpus invariant is violated."""
        ids = set()
        prev = None
        for r in self.papers:
            if not r.id or r.id in ids:
                raise CorpusError(f"empty or duplicate paper id {r.id!r}")
            if prev is not None and r.id < prev:
                raise CorpusError("papers are not sorted by id")
            prev = r.id
            ids.add(r.id)
            if isinstance(r.year, bool) or not isinstance(r.year, int) or r.year <= 0:
                raise CorpusError(f"paper {r.id!r}: invalid year {r.year!r}")
            if not r.author_names or any(not a for a in r.author_names):
                raise CorpusError(f"paper {r.id!r}: no valid authors")
            if len(set(r.author_names)) != len(r.author_names):
                raise CorpusError(f"paper {r.id!r}: duplicate author names")
            if len(set(r.ref_ids)) != len(r.ref_ids) or r.id in r.ref_ids:
                raise CorpusError(f"paper {r.id!r}: duplicate or self reference")
        for r in self.papers:
            for ref in r.ref_ids:
                if ref not in ids:
                    raise CorpusError(f"paper {r.id!r}: dangling reference {ref!r}")
        universe = {a for r in self.papers for a in r.author_names}
        if universe != set(self.author_universe):
            raise CorpusError("author_universe does not match paper authors")

    @property
    def years(self) -> list[int]:
        return sorted({r.year for r in self.papers})


@dataclass(frozen=True)
class Snapshot:
    year_bound: int
    corpus: Corpus


def _clean_record(
    pid, title, year, authors, refs, report: ParseReport
) -> PaperRecord | None:
    """Shared validation; returns None (and counts) on rejection."""
    if not isinstance(pid, str) or not pid.strip():
        report.reject("missing id")
        return None
    pid = pid.strip()
    if isinstance(year, bool) or not isinstance(year, int) or year <= 0:
        report.reject("missing or invalid year")
        return None
    if not isinstance(title, str):
        report.reject("invalid title")
        return None

    names: list[str] = []
    for a in authors:
        if not isinstance(a, str):
            report.reject("invalid author")
            return None
        a = normalize_author(a)
        if not a:
            continue
        if a in names:
            report.duplicate_authors_collapsed += 1
            continue
        names.append(a)
    if not names:
        report.reject("no authors")
        return None

    ref_ids: list[str] = []
    seen = set()
    for ref in refs:
        if not isinstance(ref, str):
            report.reject("invalid reference")
            return None
        ref = ref.strip()
        if not ref:
            continue
        if ref == pid:
            report.self_refs_dropped += 1
            continue
        if ref in seen:
            report.duplicate_refs_dropped += 1
            continue
        seen.add(ref)
        ref_ids.append(ref)
    return PaperRecord(pid, title, year, tuple(names), tuple(ref_ids))


def _finish(records: list[PaperRecord], report: ParseReport) -> tuple[Corpus, ParseReport]:
    unique: dict[str, PaperRecord] = {}
    for r in records:
        if r.id in unique:
            report.reject("duplicate id")
            continue
        unique[r.id] = r
    return Corpus.from_records(unique.values(), report), report


def _lines(stream: Stream) -> Iterator[str]:
    if isinstance(stream, (str, bytes)):
        raise TypeError("pass a file object or an iterable of lines, not a string")
    try:
        for line in stream:
            if isinstance(line, bytes):
                line = line.decode("utf-8")
            yield line.rstrip("\r\n")
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"unreadable stream: {exc}") from exc


def _aminer_blocks(lines: Iterator[str]) -> Iterator[list[str]]:
    block: list[str] = []
    for line in lines:
        if line.strip():
            block.append(line)
        elif block:
            yield block
            block = []
    if block:
        yield block


def parse_aminer(stream: Stream) -> tuple[Corpus, ParseReport]:
    """Parse the ArnetMiner citation text format.

    Authors on ``#@`` lines are split on both ``;`` and ``,``. Venue (``#c``)
    and abstract (``#!``) lines are read and discarded, as are unknown
    markers. A record lacking ``#index``, a positive ``#t`` year or any
    author is rejected and counted; parsing continues with the next record.
    """
    report = ParseReport()
    records = []
    for block in _aminer_blocks(_lines(stream)):
        report.records_read += 1
        pid = None
        title = ""
        year = None
        authors: list[str] = []
        refs: list[str] = []
        for line in block:
            if line.startswith("#index"):
                pid = line[6:].strip()
            elif line.startswith("#*"):
                title = line[2:].strip()
            elif line.startswith("#@"):
                authors.extend(_AUTHOR_SEP.split(line[2:]))
            elif line.startswith("#t"):
                try:
                    year = int(line[2:].strip())
                except ValueError:
                    year = None
            elif line.startswith("#%"):
                refs.append(line[2:])
        if pid is None:
            report.reject("missing id")
            continue
        rec = _clean_record(pid, title, year, authors, refs, report)
        if rec is not None:
            records.append(rec)
    return _finish(records, report)


def parse_jsonl(stream: Stream) -> tuple[Corpus, ParseReport]:
    """Parse canonical JSON-lines. Malformed lines are rejected and counted."""
    report = ParseReport()
    records = []
    for line in _lines(stream):
        if not line.strip():
            continue
        report.records_read += 1
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            report.reject("malformed json")
            continue
        if not isinstance(obj, dict):
            report.reject("malformed json")
            continue
        authors = obj.get("authors")
        refs = obj.get("refs", [])
        if not isinstance(authors, list) or not isinstance(refs, list):
            report.reject("invalid authors or refs")
            continue
        rec = _clean_record(
            obj.get("id"), obj.get("title", ""), obj.get("year"), authors, refs, report
        )
        if rec is not None:
            records.append(rec)
    return _finish(records, report)


def write_jsonl(corpus: Corpus, stream: IO[bytes] | None = None) -> bytes:
    """Serialize ``corpus`` deterministically; also write to ``stream`` if given."""
    buf = io.BytesIO()
    for r in sorted(corpus.papers, key=lambda r: r.id):
        obj = {
            "id": r.id,
            "title": r.title,
            "year": r.year,
            "authors": list(r.author_names),
            "refs": list(r.ref_ids),
        }
        buf.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")).encode("utf-8"))
        buf.write(b"\n")
    data = buf.getvalue()
    if stream is not None:
        stream.write(data)
    return data


def snapshot(corpus: Corpus, year: int) -> Snapshot:
    """Restrict ``corpus`` to papers with ``year <= T``.

    References pointing past the bound are removed, so the result is closed.
    """
    if year <= 0:
        raise ValueError("snapshot year must be positive")
    kept = [r for r in corpus.papers if r.year <= year]
    return Snapshot(year, Corpus.from_records(kept))


def corpus_hash(corpus: Corpus) -> str:
    """Short content hash of the canonical serialization."""
    return hashlib.sha256(write_jsonl(corpus)).hexdigest()[:16]

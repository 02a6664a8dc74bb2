"""Ingestion and serialization: contact events, sequences, sweep results.

All formats are line-oriented UTF-8 text with ``\\n`` endings, chosen to be
diff-friendly and stable across runs:

* contact events (input): ``timestamp u v`` per line, comma- or
  whitespace-separated, ``#`` comments allowed;
* graph sequence: header ``n L``, then per snapshot an edge-count line
  followed by that many ``u v`` lines (sorted);
* sweep results: CSV ``w,mean_mcc,pairs_evaluated,pairs_total``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, TextIO

from .evaluate import WindowSweepResult, SweepEntry
from .graphs import Graph, GraphSequence, Pair, normalize_pair


class EventParseError(ValueError):
    """A contact-event line could not be parsed; carries the line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class SequenceFormatError(ValueError):
    """A serialized sequence file is malformed or truncated."""


class BinRangeError(ValueError):
    """An event timestamp precedes the binning origin."""


@dataclass(frozen=True)
class ContactEvent:
    """One observed interaction: two node labels at an integer timestamp."""

    timestamp: int
    u_label: str
    v_label: str

    def __post_init__(self) -> None:
        if self.timestamp < 0:
            raise ValueError(f"timestamp must be nonnegative, got {self.timestamp}")
        if self.u_label == self.v_label:
            raise ValueError(f"self-contact for label {self.u_label!r}")


@dataclass(frozen=True)
class BinSpec:
    """Uniform time bins: width and the timestamp of bin 0."""

    bin_width: int
    origin: int = 0

    def __post_init__(self) -> None:
        if self.bin_width < 1:
            raise ValueError(f"bin_width must be >= 1, got {self.bin_width}")
        if self.origin < 0:
            raise ValueError(f"origin must be nonnegative, got {self.origin}")


_SPLIT = re.compile(r"[,\s]+")


def parse_events(lines: Iterable[str]) -> list[ContactEvent]:
    """Parse ``timestamp,u,v`` lines (comma- or whitespace-separated).

    Blank lines and lines starting with ``#`` are skipped.  Malformed lines
    raise :class:`EventParseError` naming the 1-based line number.
    """
    events = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = _SPLIT.split(line)
        if len(fields) != 3:
            raise EventParseError(lineno, f"expected 3 fields, got {len(fields)}: {line!r}")
        ts_text, u, v = fields
        try:
            ts = int(ts_text)
        except ValueError:
            raise EventParseError(lineno, f"bad timestamp {ts_text!r}") from None
        if ts < 0:
            raise EventParseError(lineno, f"negative timestamp {ts}")
        if u == v:
            raise EventParseError(lineno, f"self-contact for label {u!r}")
        events.append(ContactEvent(ts, u, v))
    return events


def bin_events(events: list[ContactEvent], spec: BinSpec) -> tuple[GraphSequence, dict[str, int]]:
    """Bin events into snapshots; returns the sequence and the label map.

    Node indices follow first appearance in the event list.  The sequence
    spans bins 0 through the bin of the latest event; an event at timestamp
    ``ts`` lands in bin ``(ts - origin) // bin_width`` (boundary timestamps
    belong to the later bin).  Duplicate contacts within a bin collapse.
    """
    if not events:
        raise ValueError("cannot bin an empty event list")
    labels: dict[str, int] = {}
    for ev in events:
        if ev.timestamp < spec.origin:
            raise BinRangeError(
                f"event at {ev.timestamp} precedes origin {spec.origin}"
            )
        for label in (ev.u_label, ev.v_label):
            if label not in labels:
                labels[label] = len(labels)
    length = (max(ev.timestamp for ev in events) - spec.origin) // spec.bin_width + 1
    bins: list[set[Pair]] = [set() for _ in range(length)]
    for ev in events:
        b = (ev.timestamp - spec.origin) // spec.bin_width
        bins[b].add(normalize_pair(labels[ev.u_label], labels[ev.v_label]))
    n = len(labels)
    seq = GraphSequence(tuple(Graph(n, frozenset(e)) for e in bins))
    return seq, labels


def write_sequence(seq: GraphSequence, stream: TextIO) -> None:
    """Serialize a sequence: ``n L`` header, then per-snapshot edge blocks."""
    stream.write(f"{seq.node_count} {len(seq)}\n")
    for g in seq:
        edges = sorted(g.edges)
        stream.write(f"{len(edges)}\n")
        for u, v in edges:
            stream.write(f"{u} {v}\n")


def read_sequence(stream: TextIO) -> GraphSequence:
    """Inverse of :func:`write_sequence`; raises on malformed or short input."""
    lines = iter(enumerate(stream, start=1))

    def next_line() -> tuple[int, str]:
        for lineno, raw in lines:
            text = raw.strip()
            if text:
                return lineno, text
        raise SequenceFormatError("unexpected end of file")

    lineno, header = next_line()
    parts = header.split()
    if len(parts) != 2:
        raise SequenceFormatError(f"line {lineno}: header must be 'n L', got {header!r}")
    try:
        n, length = int(parts[0]), int(parts[1])
    except ValueError:
        raise SequenceFormatError(f"line {lineno}: header must be integers") from None
    if n < 1 or length < 1:
        raise SequenceFormatError(f"line {lineno}: need n >= 1 and L >= 1")
    snapshots = []
    for _ in range(length):
        lineno, count_text = next_line()
        try:
            count = int(count_text)
        except ValueError:
            raise SequenceFormatError(
                f"line {lineno}: expected an edge count, got {count_text!r}"
            ) from None
        if count < 0:
            raise SequenceFormatError(f"line {lineno}: negative edge count")
        edges = set()
        for _ in range(count):
            lineno, edge_text = next_line()
            pieces = edge_text.split()
            if len(pieces) != 2:
                raise SequenceFormatError(f"line {lineno}: expected 'u v', got {edge_text!r}")
            try:
                u, v = int(pieces[0]), int(pieces[1])
            except ValueError:
                raise SequenceFormatError(f"line {lineno}: edge endpoints must be integers") from None
            try:
                edges.add(normalize_pair(u, v))
            except ValueError as exc:
                raise SequenceFormatError(f"line {lineno}: {exc}") from None
        try:
            snapshots.append(Graph(n, frozenset(edges)))
        except ValueError as exc:
            raise SequenceFormatError(f"snapshot ending at line {lineno}: {exc}") from None
    return GraphSequence(tuple(snapshots))


def write_label_map(labels: dict[str, int], stream: TextIO) -> None:
    """One ``label index`` line per node, ascending by index."""
    for label, index in sorted(labels.items(), key=lambda kv: kv[1]):
        stream.write(f"{label} {index}\n")


def read_label_map(stream: TextIO) -> dict[str, int]:
    labels: dict[str, int] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SequenceFormatError(f"line {lineno}: expected 'label index'")
        labels[parts[0]] = int(parts[1])
    return labels


def write_sweep_csv(result: WindowSweepResult, stream: TextIO) -> None:
    """CSV with one row per window size, ascending, mean MCC at 6 decimals."""
    stream.write("w,mean_mcc,pairs_evaluated,pairs_total\n")
    for e in sorted(result.entries, key=lambda e: e.w):
        stream.write(f"{e.w},{e.mean_mcc:.6f},{e.pairs_evaluated},{e.pairs_total}\n")


def read_sweep_csv(stream: TextIO) -> WindowSweepResult:
    """Parse :func:`write_sweep_csv` output (mean MCC at file precision)."""
    header = stream.readline().strip()
    expected = "w,mean_mcc,pairs_evaluated,pairs_total"
    if header != expected:
        raise SequenceFormatError(f"bad sweep CSV header: {header!r}")
    entries = []
    for lineno, raw in enumerate(stream, start=2):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise SequenceFormatError(f"line {lineno}: expected 4 CSV fields")
        try:
            entries.append(
                SweepEntry(int(fields[0]), float(fields[1]), int(fields[2]), int(fields[3]))
            )
        except ValueError:
            raise SequenceFormatError(f"line {lineno}: bad CSV values: {line!r}") from None
    return WindowSweepResult(tuple(entries))

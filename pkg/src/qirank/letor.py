"""LETOR 2.0 plain-text format and fold directory layout.

One record per line::

    <label> qid:<id> 1:<v1> 2:<v2> ... k:<vk> [#<free-form comment>]

Labels are integers, feature indices run 1..k consecutively, and everything
after the first ``#`` is kept verbatim as record metadata.  Lines that are
blank or start with ``#`` are skipped when reading whole files.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .data import Record

__all__ = [
    "LetorParseError",
    "parse_line",
    "parse_file",
    "record_line",
    "format_score",
    "write_scores",
    "FoldSpec",
    "discover_folds",
]


class LetorParseError(ValueError):
    """A line or file does not conform to the LETOR text format."""


def parse_line(line: str) -> Record:
    """Parse one feature line into a Record.

    Feature indices must be 1..k in ascending consecutive order.  The comment
    text after ``#`` (if any) is stripped and stored as ``meta``.
    """
    body, _, meta = line.partition("#")
    tokens = body.split()
    if len(tokens) < 2:
        raise LetorParseError(f"too few fields in line {line!r}")

    try:
        label = int(tokens[0])
    except ValueError:
        raise LetorParseError(f"non-numeric label {tokens[0]!r}") from None

    if not tokens[1].startswith("qid:"):
        raise LetorParseError(f"missing qid: token, got {tokens[1]!r}")
    query_id = tokens[1][4:]
    if not query_id:
        raise LetorParseError("empty qid")

    features: list[float] = []
    for expected, token in enumerate(tokens[2:], start=1):
        idx_text, sep, value_text = token.partition(":")
        if not sep:
            raise LetorParseError(f"malformed feature token {token!r}")
        try:
            idx = int(idx_text)
        except ValueError:
            raise LetorParseError(f"non-numeric feature index in {token!r}") from None
        if idx != expected:
            raise LetorParseError(
                f"non-ascending feature index {idx} (expected {expected})"
            )
        try:
            value = float(value_text)
        except ValueError:
            raise LetorParseError(f"non-numeric feature value in {token!r}") from None
        features.append(value)

    if not features:
        raise LetorParseError("empty feature list")

    return Record(query_id=query_id, label=label, features=tuple(features), meta=meta.strip())


def parse_file(path: str | Path) -> list[Record]:
    """Parse every non-blank, non-comment line of a file, in order.

    Parse errors are re-raised with the file path and 1-based line number.
    """
    records: list[Record] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                records.append(parse_line(stripped))
            except LetorParseError as exc:
                raise LetorParseError(f"{path}: line {lineno}: {exc}") from None
    return records


def format_score(value: float) -> str:
    """Shortest decimal string that round-trips the 64-bit float exactly."""
    return repr(float(value))


def record_line(record: Record) -> str:
    """Canonical single-line rendering of a record (inverse of parse_line)."""
    parts = [str(record.label), f"qid:{record.query_id}"]
    parts.extend(f"{i}:{format_score(v)}" for i, v in enumerate(record.features, start=1))
    line = " ".join(parts)
    if record.meta:
        line += f" #{record.meta}"
    return line


def write_scores(records: Sequence[Record], scores: Sequence[float], path: str | Path) -> None:
    """Write one score per line, in input record order.

    Output bytes are deterministic for identical inputs; files end with a
    trailing newline unless empty.
    """
    if len(scores) != len(records):
        raise ValueError(f"got {len(scores)} scores for {len(records)} records")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for value in scores:
            fh.write(format_score(value))
            fh.write("\n")


@dataclass(frozen=True)
class FoldSpec:
    """Locations of one fold's train / validation / test files.

    Validation files are located (and must exist) but are never read by the
    training or evaluation paths.
    """

    fold_id: int
    train_path: Path
    validation_path: Path
    test_path: Path

    def __post_init__(self) -> None:
        if not 1 <= self.fold_id <= 5:
            raise ValueError(f"fold_id must be 1..5, got {self.fold_id}")

    def check_readable(self) -> None:
        for path in (self.train_path, self.validation_path, self.test_path):
            if not Path(path).is_file():
                raise FileNotFoundError(f"fold {self.fold_id}: missing file {path}")


def discover_folds(root: str | Path) -> tuple[FoldSpec, ...]:
    """Resolve the conventional Fold1..Fold5 layout under a dataset root.

    Each fold directory is expected to contain train.txt, vali.txt and
    test.txt; existence is checked when a fold is opened, not here.
    """
    root = Path(root)
    return tuple(
        FoldSpec(
            fold_id=i,
            train_path=root / f"Fold{i}" / "train.txt",
            validation_path=root / f"Fold{i}" / "vali.txt",
            test_path=root / f"Fold{i}" / "test.txt",
        )
        for i in range(1, 6)
    )

"""Serialization: line-delimited prediction records and the score CSV.

Both formats start with the version comment line ``# uncq-format 1``; readers
skip any ``#`` comment line and blank lines.  Scores are rendered with 17
significant digits, which round-trips IEEE doubles exactly; +inf is rendered
as ``inf``.
"""

import json
import os
from contextlib import contextmanager
from typing import IO, Iterable, List, Sequence, Union

import numpy as np

from .core import EnsembleItem, ScoreRecord, validate_item
from .errors import KInconsistentError, ParseError, UncqError, ValidationError

FORMAT_HEADER = "# uncq-format 1"

Source = Union[str, os.PathLike, IO[str], Iterable[str]]


@contextmanager
def _lines(source: Source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            yield fh
    else:
        yield source


@contextmanager
def _sink(sink: Union[str, os.PathLike, IO[str]]):
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8") as fh:
            yield fh
    else:
        yield sink


def _record_to_item(obj: dict, lineno: int) -> EnsembleItem:
    if not isinstance(obj, dict):
        raise ParseError(f"line {lineno}: record is not an object", line=lineno)
    if "id" not in obj or not isinstance(obj["id"], str):
        raise ParseError(f"line {lineno}: missing or non-string 'id'", line=lineno)
    if "samples" not in obj or not isinstance(obj["samples"], list) or not obj["samples"]:
        raise ParseError(f"line {lineno}: missing or empty 'samples'", line=lineno)
    label = obj.get("label")
    if label is not None and not isinstance(label, int):
        raise ParseError(f"line {lineno}: 'label' must be an integer", line=lineno)
    flag = obj.get("flag")
    if flag is not None and not isinstance(flag, bool):
        raise ParseError(f"line {lineno}: 'flag' must be a boolean", line=lineno)
    known = {"id", "samples", "single", "reference", "label", "flag"}
    unknown = set(obj) - known
    if unknown:
        raise ParseError(f"line {lineno}: unknown fields {sorted(unknown)}", line=lineno)
    return EnsembleItem(
        id=obj["id"],
        samples=obj["samples"],
        single=obj.get("single"),
        reference=obj.get("reference"),
        label=label,
        flag=flag,
    )


def read_items(source: Source) -> List[EnsembleItem]:
    """Parse and validate a prediction file; errors carry the line number."""
    items: List[EnsembleItem] = []
    k = None
    with _lines(source) as lines:
        for lineno, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise ParseError(f"line {lineno}: invalid JSON ({err.msg})", line=lineno) from err
            raw_item = _record_to_item(obj, lineno)
            try:
                item = validate_item(raw_item)
            except (UncqError, ValueError, TypeError) as err:
                raise ValidationError(f"line {lineno}: {err}", line=lineno) from err
            if k is None:
                k = item.n_classes
            elif item.n_classes != k:
                raise KInconsistentError(
                    f"line {lineno}: item {item.id!r} has K={item.n_classes}, file has K={k}",
                    line=lineno,
                )
            items.append(item)
    return items


def _item_to_record(item: EnsembleItem) -> dict:
    obj = {"id": item.id, "samples": np.asarray(item.samples).tolist()}
    if item.single is not None:
        obj["single"] = item.single.probs.tolist()
    if item.reference is not None:
        obj["reference"] = item.reference.probs.tolist()
    if item.label is not None:
        obj["label"] = item.label
    if item.flag is not None:
        obj["flag"] = item.flag
    return obj


def write_items(items: Iterable[EnsembleItem], sink: Union[str, os.PathLike, IO[str]]) -> None:
    """Write a prediction file (header comment plus one JSON record per line)."""
    with _sink(sink) as fh:
        fh.write(FORMAT_HEADER + "\n")
        for item in items:
            fh.write(json.dumps(_item_to_record(item), separators=(",", ":")) + "\n")


def _render_score(value: float) -> str:
    return f"{value:.17g}"


def write_scores(records: Sequence[ScoreRecord], sink: Union[str, os.PathLike, IO[str]]) -> None:
    """Write the score CSV: header comment, ``id,score``, one row per record."""
    with _sink(sink) as fh:
        fh.write(FORMAT_HEADER + "\n")
        fh.write("id,score\n")
        for rec in records:
            fh.write(f"{rec.id},{_render_score(rec.value)}\n")


def read_scores(source: Source) -> List[ScoreRecord]:
    """Read a score CSV back; bit-exact for finite doubles."""
    records: List[ScoreRecord] = []
    with _lines(source) as lines:
        for lineno, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line == "id,score":
                continue
            head, sep, tail = line.rpartition(",")
            if not sep:
                raise ParseError(f"line {lineno}: expected 'id,score'", line=lineno)
            try:
                value = float(tail)
            except ValueError as err:
                raise ParseError(f"line {lineno}: bad score {tail!r}", line=lineno) from err
            try:
                records.append(ScoreRecord(id=head, value=value))
            except ValueError as err:
                raise ValidationError(f"line {lineno}: {err}", line=lineno) from err
    return records

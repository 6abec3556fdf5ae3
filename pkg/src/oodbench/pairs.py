"""Verification pair list parsing.

Two on-disk formats: a plain CSV with header ``id_a,id_b,same`` and the
public LFW pairs text convention (3-token lines are same-identity,
4-token lines are cross-identity, image ids become
``name/name_XXXX`` with a 4-digit index).
"""

import csv
import io
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError


@dataclass(frozen=True)
class PairRecord:
    id_a: str
    id_b: str
    same: bool


def _lfw_id(name: str, index: str, lineno: int) -> str:
    try:
        num = int(index)
    except ValueError as exc:
        raise ParseError(f"line {lineno}: non-integer image index {index!r}") from exc
    return f"{name}/{name}_{num:04d}"


def parse_pairs_text(text: str, format: str = "csv") -> list[PairRecord]:
    if format == "csv":
        reader = csv.reader(io.StringIO(text))
        rows = list(reader)
        if not rows or rows[0] != ["id_a", "id_b", "same"]:
            raise ParseError('line 1: expected header "id_a,id_b,same"')
        records = []
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            if len(row) != 3 or row[2] not in ("0", "1"):
                raise ParseError(f"line {lineno}: expected id_a,id_b,0|1")
            if not row[0] or not row[1]:
                raise ParseError(f"line {lineno}: empty image id")
            records.append(PairRecord(row[0], row[1], row[2] == "1"))
        return records
    if format in ("lfw", "lfw_pairs"):
        records = []
        lines = text.splitlines()
        for lineno, line in enumerate(lines, start=1):
            tokens = line.split()
            if not tokens:
                continue
            if lineno == 1 and len(tokens) <= 2 and all(t.isdigit() for t in tokens):
                continue  # fold/count header
            if len(tokens) == 3:
                a = _lfw_id(tokens[0], tokens[1], lineno)
                b = _lfw_id(tokens[0], tokens[2], lineno)
                records.append(PairRecord(a, b, True))
            elif len(tokens) == 4:
                a = _lfw_id(tokens[0], tokens[1], lineno)
                b = _lfw_id(tokens[2], tokens[3], lineno)
                records.append(PairRecord(a, b, False))
            else:
                raise ParseError(f"line {lineno}: expected 3 or 4 tokens, got {len(tokens)}")
        return records
    raise ParseError(f"unknown pairs format {format!r}")


def parse_pairs(path, format: str = "csv") -> list[PairRecord]:
    return parse_pairs_text(Path(path).read_text(encoding="utf-8"), format)


def pairs_to_csv(records: list[PairRecord]) -> str:
    lines = ["id_a,id_b,same"]
    lines += [f"{r.id_a},{r.id_b},{1 if r.same else 0}" for r in records]
    return "\n".join(lines) + "\n"

from __future__ import annotations

from pathlib import Path

from caipart.core.errors import GraphFormatError
from caipart.core.partition import BiAcyclicPartition, CaiPartition

_CAI_TAGS = ("A", "I")
_TWO_ACYCLIC_TAGS = ("A1", "A2")


def parse_partition(text: str) -> CaiPartition | BiAcyclicPartition:
    """``A ...``/``I ...`` lines give a CAI-partition, ``A1 ...``/``A2 ...`` a 2-acyclic one."""
    sides: dict[str, list[int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        tag, *items = body
        if tag not in _CAI_TAGS + _TWO_ACYCLIC_TAGS:
            raise GraphFormatError(f"unknown partition side {tag!r}", line=number)
        if tag in sides:
            raise GraphFormatError(f"side {tag} listed twice", line=number)
        try:
            sides[tag] = [int(item) for item in items]
        except ValueError as exc:
            raise GraphFormatError(f"non-integer vertex id in side {tag}", line=number) from exc

    tags = set(sides)
    if tags <= set(_CAI_TAGS) and tags:
        return CaiPartition.of(sides.get("A", ()), sides.get("I", ()))
    if tags <= set(_TWO_ACYCLIC_TAGS) and tags:
        return BiAcyclicPartition.of(sides.get("A1", ()), sides.get("A2", ()))
    raise GraphFormatError("expected either A/I or A1/A2 lines", line=1)


def serialize_partition(p: CaiPartition | BiAcyclicPartition) -> str:
    if isinstance(p, CaiPartition):
        rows = (("A", p.a), ("I", p.i))
    else:
        rows = (("A1", p.a1), ("A2", p.a2))
    return "".join(" ".join([tag, *map(str, sorted(side))]) + "\n" for tag, side in rows)


def read_partition_file(path: Path) -> CaiPartition | BiAcyclicPartition:
    return parse_partition(path.read_text(encoding="ascii"))


def write_partition_file(path: Path, p: CaiPartition | BiAcyclicPartition) -> None:
    path.write_text(serialize_partition(p), encoding="ascii", newline="\n")

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from probability_table import Context, CountRecord, Inequality, InvalidArgumentError


def _target_bits(text: str, size: int) -> Tuple[int, ...]:
    if len(text) != size or any(ch not in "01" for ch in text):
        raise InvalidArgumentError(
            f"Target '{text}' must be {size} characters of 0/1"
        )
    return tuple(int(ch) for ch in text)


def _count(value: Any) -> int:
    if isinstance(value, bool):
        raise InvalidArgumentError(f"Count must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.strip().isdigit():
        return int(value)
    raise InvalidArgumentError(f"Count must be an integer, got {value!r}")


def records_from_json(data: Dict[str, Any]) -> Tuple[Inequality, List[CountRecord]]:
    inequality = Inequality.parse(data["inequality"])
    records = []
    for entry in data["contexts"]:
        measurements = tuple(int(m) for m in entry["measurements"])
        context = Context(
            measurements=measurements,
            target=_target_bits(entry["target"], len(measurements)),
        )
        outcomes = entry["outcomes"]
        records.append(
            CountRecord(
                context=context,
                basis_outcomes=tuple(outcomes),
                counts=tuple(_count(v) for v in outcomes.values()),
            )
        )
    return inequality, records


def records_to_json(
    inequality: Inequality,
    records: List[CountRecord],
    meta: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    return {
        "inequality": inequality.value,
        "contexts": [
            {
                "measurements": list(record.context.measurements),
                "target": record.context.target_string,
                "outcomes": record.as_dict(),
            }
            for record in records
        ],
        "meta": dict(meta or {}),
    }


__all__ = ["records_from_json", "records_to_json"]

"""Serialization of exact results to JSON and CSV.

Rationals are written as "p/q" strings (plain "p" when integral) next to a
float convenience value.
"""
import csv
import io
import json
import logging
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_field(value: Optional[Fraction]) -> Optional[Dict[str, Any]]:
    """{"exact": "p/q", "approx": float} or None."""
    if value is None:
        return None
    return {"exact": format_rational(value), "approx": float(value)}


def to_jsonable(value: Any) -> Any:
    """Recursively convert Fractions, enums, tuples and dataclasses into JSON types."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, Enum):
        return value.value
    if is_dataclass(value) and not isinstance(value, type):
        if hasattr(value, 'to_dict'):
            return value.to_dict()
        return to_jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    return value


def dumps_json(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n"


def dumps_csv(rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None) -> str:
    """CSV with a fixed column order (first row's keys unless given)."""
    if not rows:
        return ""
    if columns is None:
        columns = list(rows[0].keys())
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row.get(k)) for k in columns})
    return buffer.getvalue()


def _csv_cell(value: Any) -> Any:
    value = to_jsonable(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return value


def write_output(text: str, path: Optional[str]) -> None:
    """Write to path (creating parent directories) or to stdout when path is None."""
    if path is None:
        print(text, end="")
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text)
    logger.info(f"Results written to {target}")

import csv
import io
from fractions import Fraction
from typing import Any, Iterable, Sequence

from ..config import settings


def fmt(value: Any) -> str:
    """Render a number with the configured significant digits; None becomes an empty field"""
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, complex):
        return f"{value.real:.{settings.SIGNIFICANT_DIGITS}g}{value.imag:+.{settings.SIGNIFICANT_DIGITS}g}j"
    if isinstance(value, float):
        return f"{value:.{settings.SIGNIFICANT_DIGITS}g}"
    return str(value)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buffer.getvalue()

"""Small builders shared by the tests"""

from typing import Optional, Sequence

from kisinlab.field import FieldParams
from kisinlab.matrix import SeriesMatrix
from kisinlab.phi_module import PhiModule
from kisinlab.series import USeries, parse_series


def series(text: str, field: FieldParams) -> USeries:
    return parse_series(text, field)


def mat(field: FieldParams, rows: Sequence[Sequence[str]]) -> SeriesMatrix:
    """Matrix from rows of series literals"""
    cols = len(rows[0]) if rows else 0
    return SeriesMatrix.from_rows(field, [[parse_series(x, field) for x in row] for row in rows], cols=cols)


def module(field: FieldParams, rows: Sequence[Sequence[str]], r: Optional[int] = 1, e: int = 1) -> PhiModule:
    return PhiModule(field, e, r, mat(field, rows))


def vec(field: FieldParams, *entries: str):
    return tuple(parse_series(x, field) for x in entries)

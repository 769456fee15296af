import datetime
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import pandas as pd
from logzero import logger

from ..errors import RowError, SchemaError
from .names import (
    DIARY_COLUMNS,
    FALSE_TOKENS,
    FIRST_ACTIVITY_COLUMN,
    TRUE_TOKENS,
)


@dataclass(frozen=True)
class TripRecord(object):
    person_id: str
    day: datetime.date
    depart_minute: int
    raw_activity: str
    distance_miles: Optional[float] = None
    travel_minutes: Optional[float] = None
    is_representative: bool = True
    survey_complete: bool = True
    first_activity: Optional[str] = None


class ParsedDiary(NamedTuple):
    records: List[TripRecord]
    row_errors: List[RowError]


class DiaryReader(object):
    r"""Reads the travel-diary CSV. Bad rows are collected as RowError unless ``strict``."""

    def __init__(self, strict=False):
        self.strict = strict

    def read(self, stream):
        try:
            frame = pd.read_csv(
                stream, dtype=str, keep_default_na=False, skipinitialspace=True
            )
        except pd.errors.EmptyDataError:
            raise SchemaError("diary has no header", column=DIARY_COLUMNS[0])
        for column in DIARY_COLUMNS:
            if column not in frame.columns:
                raise SchemaError("missing required column {!r}".format(column), column=column)
        has_first_activity = FIRST_ACTIVITY_COLUMN in frame.columns

        records, row_errors = [], []
        # header is line 1
        for line, row in enumerate(frame.to_dict("records"), start=2):
            try:
                records.append(self._parse_row(row, has_first_activity))
            except (ValueError, TypeError, AttributeError) as exception:
                error = RowError("line {}: {}".format(line, exception), line=line)
                if self.strict:
                    raise error from exception
                row_errors.append(error)

        if row_errors:
            logger.warning("%d diary rows rejected, first: %s", len(row_errors), row_errors[0])
        return ParsedDiary(records, row_errors)

    def _parse_row(self, row, has_first_activity):
        person_id = row["person_id"].strip()
        if not person_id:
            raise ValueError("empty person_id")

        depart_minute = int(row["depart_minute"])
        if not 0 <= depart_minute <= 1439:
            raise ValueError("depart_minute {} outside [0, 1439]".format(depart_minute))

        activity = row["activity"].strip()
        if not activity:
            raise ValueError("empty activity")

        first_activity = None
        if has_first_activity:
            first_activity = row[FIRST_ACTIVITY_COLUMN].strip() or None

        return TripRecord(
            person_id=person_id,
            day=datetime.date.fromisoformat(row["day"].strip()),
            depart_minute=depart_minute,
            raw_activity=activity,
            distance_miles=_optional_float(row["distance_miles"], "distance_miles"),
            travel_minutes=_optional_float(row["travel_minutes"], "travel_minutes"),
            is_representative=_parse_bool(row["is_representative"]),
            survey_complete=_parse_bool(row["survey_complete"]),
            first_activity=first_activity,
        )


def _optional_float(text, name):
    text = text.strip()
    if not text:
        return None
    value = float(text)
    if not math.isfinite(value) or value < 0:
        raise ValueError("{} must be a finite value >= 0, got {}".format(name, text))
    return value


def _parse_bool(text):
    token = text.strip().lower()
    if token in TRUE_TOKENS:
        return True
    if token in FALSE_TOKENS:
        return False
    raise ValueError("not a boolean: {!r}".format(text))


def parse_diary_file(stream, strict=False):
    return DiaryReader(strict=strict).read(stream)


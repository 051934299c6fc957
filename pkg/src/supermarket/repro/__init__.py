"""Published reference tables and their recomputation."""

from supermarket.repro.reference import (
    REFERENCE_TABLES,
    RESPONSE_TIME_LAWS,
    RESPONSE_TIME_N,
    RESPONSE_TIME_REL_TOL,
    RESPONSE_TIME_TABLE,
    RESPONSE_TIMES,
    ReferenceTable,
    Scenario,
)
from supermarket.repro.report import (
    ReproCell,
    ReproReport,
    ResponseTimeCell,
    ResponseTimeReport,
    printed_unit,
    published_response_time,
    reproduce,
    reproduce_response_times,
    response_time_keys,
)


__all__ = [
    'REFERENCE_TABLES',
    'RESPONSE_TIMES',
    'RESPONSE_TIME_LAWS',
    'RESPONSE_TIME_N',
    'RESPONSE_TIME_REL_TOL',
    'RESPONSE_TIME_TABLE',
    'ReferenceTable',
    'ReproCell',
    'ReproReport',
    'ResponseTimeCell',
    'ResponseTimeReport',
    'Scenario',
    'printed_unit',
    'published_response_time',
    'reproduce',
    'reproduce_response_times',
    'response_time_keys',
]

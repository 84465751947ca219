from .ical import (
    PRODID,
    VEvent,
    build_calendar,
    export_ical,
    external_conflicts,
    import_ical_time_off,
    occurrences,
    parse_ical,
)
from .opening_hours import annual_open_hours
from .reports import (
    GROUP_DIMENSIONS,
    ReportQuery,
    ReportRow,
    base_records,
    export_csv,
    money,
    run_report,
    timeoff_assignment_overlaps,
)

__all__ = [
    "GROUP_DIMENSIONS", "PRODID", "ReportQuery", "ReportRow", "VEvent",
    "annual_open_hours", "base_records", "build_calendar", "export_csv",
    "export_ical", "external_conflicts", "import_ical_time_off", "money",
    "occurrences", "parse_ical", "run_report", "timeoff_assignment_overlaps",
]

from vnslab.config import parse_window
from vnslab.diagnostics import decay_fit, read_series
from vnslab.errors import UsageError


def fit(series: str, column: str = "E0", window: str | None = None) -> dict:
    columns = read_series(series)
    if "t" not in columns:
        raise UsageError(f"{series}: no 't' column")
    if column not in columns:
        raise UsageError(f"{series}: no column {column!r}; available: {', '.join(columns)}")
    try:
        bounds = parse_window(window) if window else None
    except ValueError as e:
        raise UsageError(str(e)) from e
    result = decay_fit(columns["t"], columns[column], bounds)
    return {"series": str(series), "column": column, **result.as_dict()}


definition = {
    "type": "function",
    "function": {
        "name": "fit",
        "description": "Least-squares power-law fit of one column of a series CSV against t.",
        "parameters": {
            "type": "object",
            "properties": {
                "series": {"type": "string", "description": "Path to series.csv"},
                "column": {"type": "string", "description": "Column to fit", "default": "E0"},
                "window": {"type": "string", "description": "Time window a:b"},
            },
            "required": ["series"],
        },
    },
}

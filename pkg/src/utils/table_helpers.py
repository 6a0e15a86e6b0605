"""
table_helpers.py

Utility functions for tabular artifacts, including:
- rendering a DataFrame as a string for log output
- writing text and CSV files atomically (temp file + rename)
"""


# Stdlib imports
import os
import tempfile
from pathlib import Path
from typing import Union

# Third-party imports
import pandas as pd

# Internal imports
import src.harmonic.formats as fmt


def get_table_as_str(df: pd.DataFrame, title: str, max_rows: int = 20) -> str:
    """
    Render a DataFrame as a formatted string for debugging purposes.

    Args:
        df (pd.DataFrame): table to render.
        title (str): heading printed above the rows.
        max_rows (int): rows shown before truncation.

    Returns:
        str: formatted string containing the (possibly truncated) table.
    """
    result_string = f"Table: {title} ({len(df)} rows)\n"
    result_string += df.to_string(max_rows=max_rows, index=False)
    return result_string + "\n"


def write_text_atomic(text: str, path: Union[str, Path]) -> Path:
    """
    Write text to path in one step: write a sibling temp file, then rename.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def csv_text(df: pd.DataFrame) -> str:
    """CSV with header row, '.' decimals and 17 significant digits."""
    return df.to_csv(index=False, float_format=fmt.FLOAT_PERCENT, lineterminator="\n")


def write_csv_atomic(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    return write_text_atomic(csv_text(df), path)

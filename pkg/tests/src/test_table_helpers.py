# Stdlib imports
import logging

# Third-party imports
import pandas as pd

# Internal imports
from src.utils.table_helpers import csv_text, get_table_as_str, write_csv_atomic, write_text_atomic


def test_csv_keeps_full_precision():
    """Floats are written with 17 significant digits"""
    logging.info("==== test_csv_keeps_full_precision =====")

    df = pd.DataFrame({"rho": [1.0, 1 / 3], "passed": [True, False]})
    text = csv_text(df)
    assert text.splitlines()[0] == "rho,passed"
    assert text.splitlines()[2] == "0.33333333333333331,False"
    assert float(text.splitlines()[2].split(",")[0]) == 1 / 3


def test_atomic_writes(tmp_path):
    logging.info("==== test_atomic_writes =====")

    path = write_text_atomic("hello\n", tmp_path / "nested" / "out.txt")
    assert path.read_text(encoding="utf-8") == "hello\n"
    assert [p.name for p in path.parent.iterdir()] == ["out.txt"]

    df = pd.DataFrame({"a": [1.5]})
    csv_path = write_csv_atomic(df, tmp_path / "table.csv")
    assert pd.read_csv(csv_path)["a"].iloc[0] == 1.5


def test_table_as_str():
    logging.info("==== test_table_as_str =====")

    df = pd.DataFrame({"n": range(30)})
    text = get_table_as_str(df, "scan", max_rows=10)
    assert text.startswith("Table: scan (30 rows)\n")
    assert "..." in text

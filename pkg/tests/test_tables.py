import csv
import io
import json
from pathlib import Path

from capcolor.tables import table1, table1_csv, table1_json, table2_audit, table2_csv, table3_rows, table3_csv

import oracles

DATA = Path(__file__).parent / "data"


def test_error_table_golden():
    assert table1_csv(table1(3)) == (DATA / "table1_d3.csv").read_text()


def test_error_table_json_mirrors_csv():
    rows = json.loads(table1_json(table1(3)))
    golden = list(csv.DictReader(io.StringIO((DATA / "table1_d3.csv").read_text())))
    assert len(rows) == len(golden) == 52
    for r, g in zip(rows, golden):
        assert r["origin"] == g["origin"] and r["error"] == g["error"]
        assert str(r["u"]) == g["u"]
        assert "(" + ",".join(map(str, r["v"])) + ")" == g["v"]


def test_error_table_pairs_are_distinguishable_or_equivalent():
    # rows with equal syndromes must hold errors that agree in weight parity
    by = {}
    for r in table1(3):
        by.setdefault((r.u, r.v, r.w), set()).add(r.error.count("Z") % 2)
    assert all(len(p) == 1 for p in by.values())


def test_signature_audit_csv():
    text = table2_csv(table2_audit(3))
    assert text.splitlines()[0] == "fault_type,faults_checked,status"
    assert all(line.endswith(",ok") for line in text.splitlines()[1:])


def test_qubit_counts_match_closed_forms():
    rows = table3_rows(11)
    assert [r["d"] for r in rows] == [3, 5, 7, 9, 11]
    for r in rows:
        want = oracles.qubit_count_closed_forms(r["d"])
        for fam, (a, b, c) in want.items():
            assert (r[f"{fam}_data"], r[f"{fam}_shared"], r[f"{fam}_dedicated"]) == (a, b, c)


def test_qubit_counts_frozen_d3_row():
    r = table3_rows(3)[0]
    assert list(r.values()) == [3, 7, 9, 13, 15, 17, 23, 15, 17, 23, 15, 16, 19, 15, 16, 19]
    assert table3_csv(table3_rows(5)).count("\n") == 3

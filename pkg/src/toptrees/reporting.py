"""Report records with stable serialized schemas (JSON and CSV).

CompressReport JSON keys are fixed: input, algo, alpha, stats, trace, dag,
wall_time_s -- with stats/dag/trace entries restricted to their documented
sub-keys.  The comparison CSV header is likewise fixed.  Parse-back helpers
reject unknown or missing keys so schema drift shows up in tests.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .builder import IterationTrace
from .dag import DagStats
from .tree import TreeStats

__all__ = ["CompressReport", "ComparisonRow", "validate_report_json",
           "write_comparison_csv", "read_comparison_csv", "CSV_HEADER",
           "REPORT_KEYS", "STATS_KEYS", "TRACE_KEYS", "DAG_KEYS"]

REPORT_KEYS = ("input", "algo", "alpha", "stats", "trace", "dag", "wall_time_s")
STATS_KEYS = ("n", "edges", "sigma", "depth", "info_bound")
TRACE_KEYS = ("t", "m", "p", "q", "applied", "clusters_after")
DAG_KEYS = ("dag_nodes", "dag_edges", "toptree_nodes", "ratio_info", "ratio_hsr")

CSV_HEADER = ("k", "sigma", "m", "N", "dag_original", "dag_modified",
              "ratio", "hsr_ratio_original", "info_ratio_modified")


def _check_keys(d: dict, keys: tuple, what: str) -> None:
    if set(d) != set(keys):
        raise ValueError(f"{what}: expected keys {sorted(keys)}, got {sorted(d)}")


@dataclass
class CompressReport:
    input: str
    algo: str
    alpha: str
    stats: TreeStats
    trace: list[IterationTrace]
    dag: DagStats
    wall_time_s: float

    def to_json_dict(self) -> dict:
        return {
            "input": self.input,
            "algo": self.algo,
            "alpha": self.alpha,
            "stats": self.stats.to_json_dict(),
            "trace": [row.to_json_dict() for row in self.trace],
            "dag": self.dag.to_json_dict(),
            "wall_time_s": self.wall_time_s,
        }

def validate_report_json(d: dict) -> dict:
    """Check a loaded report against the documented schema and return it."""
    _check_keys(d, REPORT_KEYS, "report")
    _check_keys(d["stats"], STATS_KEYS, "report.stats")
    _check_keys(d["dag"], DAG_KEYS, "report.dag")
    for row in d["trace"]:
        _check_keys(row, TRACE_KEYS, "report.trace row")
    return d


@dataclass(frozen=True)
class ComparisonRow:
    k: int
    sigma: int
    m: int
    N: int
    dag_original: int
    dag_modified: int
    ratio: float
    hsr_ratio_original: float
    info_ratio_modified: float

    def to_csv_row(self) -> list[str]:
        return [str(self.k), str(self.sigma), str(self.m), str(self.N),
                str(self.dag_original), str(self.dag_modified),
                repr(self.ratio), repr(self.hsr_ratio_original),
                repr(self.info_ratio_modified)]

    @classmethod
    def from_csv_row(cls, row: list[str]) -> "ComparisonRow":
        if len(row) != len(CSV_HEADER):
            raise ValueError(f"expected {len(CSV_HEADER)} columns, got {len(row)}")
        return cls(k=int(row[0]), sigma=int(row[1]), m=int(row[2]),
                   N=int(row[3]), dag_original=int(row[4]),
                   dag_modified=int(row[5]), ratio=float(row[6]),
                   hsr_ratio_original=float(row[7]),
                   info_ratio_modified=float(row[8]))


def write_comparison_csv(path, rows: list[ComparisonRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.to_csv_row())


def read_comparison_csv(path) -> list[ComparisonRow]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(CSV_HEADER):
            raise ValueError(f"unexpected CSV header {header}")
        return [ComparisonRow.from_csv_row(row) for row in reader]

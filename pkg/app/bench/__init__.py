"""Benchmark harness: incremental insertion (T2) against full reclustering (T1)."""

from .agreement import partition_labels, rand_index
from .generators import AdditionStream, blob_dataset, near_core_additions, uniform_dataset
from .harness import format_report, run_trial, summarize, sweep, write_report_csv

__all__ = [
    "AdditionStream",
    "blob_dataset",
    "format_report",
    "near_core_additions",
    "partition_labels",
    "rand_index",
    "run_trial",
    "summarize",
    "sweep",
    "uniform_dataset",
    "write_report_csv",
]

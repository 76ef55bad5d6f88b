from .records import CSV_HEADER, DecayFit, SweepRecord, count_inversions, fit_decay, read_csv, records_to_csv, write_csv
from .sweeps import PairInfo, companion_pair, run_independence, run_moments, spectrum_histogram

__all__ = [
    "CSV_HEADER",
    "DecayFit",
    "SweepRecord",
    "PairInfo",
    "companion_pair",
    "count_inversions",
    "fit_decay",
    "read_csv",
    "records_to_csv",
    "write_csv",
    "run_independence",
    "run_moments",
    "spectrum_histogram",
]

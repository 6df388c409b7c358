"""Benchmark problems: synthetic dataset generators, tabular ingestion, splits."""

from ..data import Dataset, DatasetSplits, Provenance, load_csv
from .catalog import CATALOG, ProblemEntry, get_problem
from .ranges import RangeSpec, SamplingPlan, VarRange, sample_plan, split_id_ood
from .synthetic import (
    CHI2PDF_GROUND_TRUTH,
    FHST_GROUND_TRUTH,
    NDO_GROUND_TRUTH,
    EcbgConstants,
    HhmConstants,
    ecbg_ground_truth,
    gen_chi2pdf,
    gen_ecbg,
    gen_fhst,
    gen_hhm,
    gen_ndo,
    gen_nnn,
    hhm_ground_truth,
    nnn_ground_truth,
)
from .tabular import TabularSchema, load_tabular

__all__ = [
    "CATALOG", "CHI2PDF_GROUND_TRUTH", "Dataset", "DatasetSplits", "EcbgConstants",
    "FHST_GROUND_TRUTH", "HhmConstants", "NDO_GROUND_TRUTH", "ProblemEntry",
    "Provenance", "RangeSpec", "SamplingPlan", "TabularSchema", "VarRange",
    "ecbg_ground_truth", "gen_chi2pdf", "gen_ecbg", "gen_fhst", "gen_hhm", "gen_ndo",
    "gen_nnn", "get_problem", "hhm_ground_truth", "load_csv", "load_tabular",
    "nnn_ground_truth", "sample_plan", "split_id_ood",
]

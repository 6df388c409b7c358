"""Catalog of the ten benchmark problems: schemas, counts, and engine defaults."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..data import DatasetSplits
from ..errors import CatalogError
from ..problem import ProblemSpec
from .synthetic import gen_chi2pdf, gen_ecbg, gen_fhst, gen_hhm, gen_ndo, gen_nnn
from .tabular import TabularSchema


@dataclass(frozen=True)
class ProblemEntry:
    name: str
    var_names: tuple[str, ...]
    output_name: str
    description: str
    domain_tag: str
    default_agents: int       # population size K
    default_iterations: int   # iteration budget M
    generate: Callable[..., DatasetSplits] | None = None  # synthetic problems only
    schema: TabularSchema | None = None                   # tabular problems only

    @property
    def synthetic(self) -> bool:
        return self.generate is not None

    def problem_spec(self) -> ProblemSpec:
        return ProblemSpec(name=self.name, var_names=self.var_names,
                           output_name=self.output_name, description=self.description,
                           domain_tag=self.domain_tag)


def _synthetic(name, var_names, output_name, description, domain_tag, agents, iterations,
               generate) -> ProblemEntry:
    return ProblemEntry(name, tuple(var_names), output_name, description, domain_tag,
                        agents, iterations, generate=generate)


def _tabular(name, var_names, output_name, description, domain_tag, agents, iterations,
             expected_rows) -> ProblemEntry:
    schema = TabularSchema(tuple(var_names), output_name, expected_rows)
    return ProblemEntry(name, tuple(var_names), output_name, description, domain_tag,
                        agents, iterations, schema=schema)


CATALOG: dict[str, ProblemEntry] = {
    e.name: e
    for e in (
        _synthetic(
            "chi2pdf", ("x", "k"), "p",
            "Probability density of the chi-squared distribution at point x with "
            "k degrees of freedom.",
            "statistics", 50, 100, gen_chi2pdf),
        _synthetic(
            "ndo", ("t", "x", "v"), "a",
            "Acceleration of a driven, nonlinearly damped oscillator given time, "
            "position, and velocity.",
            "physics", 50, 100, gen_ndo),
        _synthetic(
            "nnn", ("x1", "x2"), "y",
            "Output of an unknown smooth two-input model (a small sigmoid network) "
            "observed at sampled inputs.",
            "machine learning", 50, 200, gen_nnn),
        _tabular(
            "msb", ("strain", "temp"), "stress",
            "Mechanical stress of an aluminium alloy as a function of strain and "
            "temperature; experimental records.",
            "materials science", 50, 100, None),
        _synthetic(
            "fhst", ("phi", "N", "chi"), "dG",
            "Gibbs free energy of mixing per lattice site for a polymer solution, "
            "given volume fraction, chain length, and interaction parameter.",
            "polymer science", 100, 50, gen_fhst),
        _tabular(
            "bdc", ("cycle", "voltage", "current", "temperature", "voltage_load",
                    "current_load"), "capacity",
            "Discharge capacity of an 18650 lithium-ion cell from six measured "
            "cycling parameters.",
            "materials science", 50, 100, {"train": 334, "test_id": 83}),
        _tabular(
            "sfl", ("c", "si", "mn", "p", "s", "ni", "cr", "cu", "mo", "temper"),
            "fatigue",
            "Fatigue limit of steel alloys from nine element weight percentages and "
            "the tempering temperature.",
            "materials science", 50, 100, {"train": 350, "test_id": 87}),
        _tabular(
            "nomc", ("pressure", "temperature", "flow_rate", "h2_feed",
                     "reactor_length", "reactor_diameter"), "c2_yield",
            "C2 conversion yield of a non-oxidative methane conversion reactor from "
            "six engineering parameters.",
            "organic chemistry", 50, 200, {"train": 200, "test_id": 51}),
        _synthetic(
            "ecbg", ("B", "S", "T", "pH"), "dBdt",
            "Growth rate of an E. coli population given density, substrate "
            "concentration, temperature, and pH.",
            "mathematical biology", 50, 200, gen_ecbg),
        _synthetic(
            "hhm", ("V", "m", "n", "h", "Iext"), "dVdt",
            "Rate of membrane potential change from voltage, three gating "
            "probabilities, and external current.",
            "mathematical biology", 50, 100, gen_hhm),
    )
}


def get_problem(name: str) -> ProblemEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise CatalogError(
            f"unknown problem {name!r}; valid names: {', '.join(sorted(CATALOG))}"
        ) from None

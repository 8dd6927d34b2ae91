"""Log characteristic cycles, ``Gamma_{dlog f}`` and stratified intersection counts."""

from .charts import LogChart, Stratum, base_chart, chart_by_id, chart_list, strata
from .counting import CountReport, euler_char, intersect_count
from .cycles import CycleComponent, LagCycle, conormal_cycle, is_conic, raw_cycle, transport_ideal, zero_section
from .sections import LogFunction, LogSection, gamma_dlogf
from .sharp import SharpFamily, sharp_family

__all__ = [
    "LogChart", "Stratum", "base_chart", "chart_by_id", "chart_list", "strata",
    "CountReport", "euler_char", "intersect_count",
    "CycleComponent", "LagCycle", "conormal_cycle", "is_conic", "raw_cycle", "transport_ideal",
    "zero_section", "LogFunction", "LogSection", "gamma_dlogf", "SharpFamily", "sharp_family",
]

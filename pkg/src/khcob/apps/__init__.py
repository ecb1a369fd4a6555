"""Application drivers built on the cobordism machinery."""

from .ribbon import RibbonReport, ribbon_compare
from .seifert import SeifertResult, seifert_movie, seifert_result, seifert_table

__all__ = ["RibbonReport", "SeifertResult", "ribbon_compare", "seifert_movie",
           "seifert_result", "seifert_table"]

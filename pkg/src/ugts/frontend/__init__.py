from .dot import render_dot
from .parser import ParseError, SpecFile, format_graph, format_spec, parse_spec
from .report import Report

__all__ = ["ParseError", "Report", "SpecFile", "format_graph", "format_spec", "parse_spec", "render_dot"]

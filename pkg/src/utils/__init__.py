"""Utility functions and helper modules."""

from .utils import dump_json, elements_of, format_rational, load_json, mask_of, parse_rational, parse_rational_list, write_json
__all__ = ["dump_json", "elements_of", "format_rational", "load_json", "mask_of", "parse_rational", "parse_rational_list", "write_json"]

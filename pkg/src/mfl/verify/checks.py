"""Importing this module registers every check, in suite order."""

from __future__ import annotations

from . import check_rep, check_series, check_functor, check_closed, check_expr, scenario  # noqa: F401

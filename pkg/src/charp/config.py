"""Budget configuration.

Budgets keep every scenario desk-scale.  Profiles: "fast" (default) and
"full" (enables the p=5 stretch runs).  Overrides come from the environment
variable CHARP_BUDGET_PROFILE and optionally from a config file (TOML or
flat ``key = value`` lines) passed to :func:`load_config`.
"""

import os

_FAST = {
    "profile": "fast",
    # highest cosimplicial level materialised by derived_power
    "max_level": 8,
    # largest finite group handled by the dense bar complex
    "max_group_order": 2000,
    # largest (basis count) x (basis count) dense system we will solve
    "max_cells": 40_000_000,
    # roots.enumerate: cap on the number of summands
    "max_terms": 8,
    # roots.find_quadratic_field: search bound for the integer d
    "field_search_bound": 2000,
    # include primes {2,3} only; "full" adds the p=5 stretch scenarios
    "stretch_p5": False,
}

_FULL = dict(_FAST, profile="full", stretch_p5=True, max_cells=120_000_000)

_INT_KEYS = ("max_level", "max_group_order", "max_cells", "max_terms",
             "field_search_bound")


class Budget(dict):
    __getattr__ = dict.__getitem__


def _parse_flat(text):
    out = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line or "=" not in line:
            continue
        key, _, val = line.partition("=")
        out[key.strip()] = val.strip().strip('"').strip("'")
    return out


def load_config(path=None, profile=None):
    """Resolve the active budget: defaults <- profile <- config file."""
    prof = profile or os.environ.get("CHARP_BUDGET_PROFILE", "fast")
    if prof not in ("fast", "full"):
        raise ValueError(f"unknown budget profile {prof!r}")
    cfg = Budget(_FULL if prof == "full" else _FAST)
    if path:
        with open(path, "rb") as fh:
            raw = fh.read()
        data = None
        try:
            import tomli
            data = tomli.loads(raw.decode())
        except Exception:
            data = _parse_flat(raw.decode())
        for key, val in data.items():
            if key in _INT_KEYS:
                cfg[key] = int(val)
            elif key == "stretch_p5":
                cfg[key] = str(val).lower() in ("1", "true", "yes")
    return cfg


DEFAULT = load_config()


class BudgetExceeded(Exception):
    """Raised when a computation would overrun the configured budget."""

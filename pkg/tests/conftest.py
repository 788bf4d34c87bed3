from __future__ import annotations

import pytest

from mfl import make_cycle_rep, make_standard_rep


def base_reps(n: int) -> list:
    """std:n and cyc(n, c, lam) for c in {1, n}, lam in {1, -1, i}."""
    out = [make_standard_rep(n)]
    for c in (1, n):
        for lam in (1, -1, 1j):
            out.append(make_cycle_rep(n, c, lam))
    return out


@pytest.fixture(autouse=True)
def _default_strip_bound(monkeypatch):
    monkeypatch.delenv("MFL_MAX_STRIP_ITERS", raising=False)
    monkeypatch.delenv("MFL_KERNEL", raising=False)

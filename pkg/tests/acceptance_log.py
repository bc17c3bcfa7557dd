"""Shared record of acceptance outcomes, printed by the conftest summary hook."""

import time
from contextlib import contextmanager

LOG = {}


@contextmanager
def criterion(n, title, budget):
    LOG[n] = (title, False, 0.0, budget)
    start = time.perf_counter()
    yield
    secs = time.perf_counter() - start
    LOG[n] = (title, secs < budget, secs, budget)
    assert secs < budget, f"criterion {n} took {secs:.1f} s (limit {budget} s)"

"""Shared test configuration.

The default ``decimal`` context has 28-digit precision, which silently
truncates test-side arithmetic on 40-plus-digit values (differences,
oracle comparisons).  Raise it far beyond anything the suite compares so
that assertion arithmetic never rounds below the quantities under test.
Package code is unaffected: it always computes under an explicit local
context.
"""

from __future__ import annotations

import decimal

import pytest

from qlambert import RealContext, make_context

decimal.setcontext(decimal.Context(prec=300))


@pytest.fixture(scope="session")
def ctx30() -> RealContext:
    return make_context(30)


@pytest.fixture(scope="session")
def ctx40() -> RealContext:
    return make_context(40)


@pytest.fixture(scope="session")
def ctx50() -> RealContext:
    return make_context(50)

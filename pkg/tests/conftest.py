"""Shared fixtures: one cached GroupTable per spec string for the whole run."""

from __future__ import annotations

import pytest

from ecov.groups import GroupTable, build_group


@pytest.fixture(scope="session")
def grp():
    """Session-cached group builder; lattices piggyback on the table cache."""
    cache: dict[str, GroupTable] = {}

    def make(spec: str) -> GroupTable:
        if spec not in cache:
            cache[spec] = build_group(spec)
        return cache[spec]

    return make

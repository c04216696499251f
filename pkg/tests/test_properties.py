"""The randomized property suites, one test per property."""

import pytest

from _props import PROPERTIES


@pytest.mark.parametrize("name", sorted(PROPERTIES))
def test_property(name):
    count, bad = PROPERTIES[name]()
    assert count >= 10_000
    assert bad == 0

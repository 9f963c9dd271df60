import doctest

import pytest

import iobound
import iobound.tracing


@pytest.mark.parametrize("module", [iobound, iobound.tracing], ids=lambda m: m.__name__)
def test_doctests(module):
    result = doctest.testmod(module)
    assert result.attempted > 0
    assert result.failed == 0

import pytest

from curvepic import acceptance


@pytest.mark.parametrize("name", list(acceptance.SUITES))
def test_acceptance_criterion(name, capsys):
    result = acceptance.run_suite(name)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()

import pytest

from doubleforms.errors import ConfigError
from doubleforms.suites import SUITES, SuiteConfig, properties, run_suite


@pytest.mark.parametrize("suite", SUITES)
def test_suite_passes(suite):
    results = run_suite(suite, SuiteConfig(seed=42, samples=200))
    assert results and all(r.passed for r in results), [r for r in results if not r.passed]


def test_zero_tolerance_fails():
    results = run_suite("algebra", SuiteConfig(seed=1, tol=0.0))
    assert not all(r.passed for r in results)


def test_registry_and_errors():
    assert len(properties("all")) == sum(len(properties(s)) for s in SUITES)
    with pytest.raises(ConfigError):
        run_suite("everything")
    with pytest.raises(ConfigError):
        run_suite("algebra", SuiteConfig(tol=-1.0))


def test_seeded_runs_repeat():
    a = run_suite("decomposition", SuiteConfig(seed=3))
    b = run_suite("decomposition", SuiteConfig(seed=3))
    assert a == b

import pytest
from hypothesis import settings

from hilbcount import NumberField, c2_model, s3_model

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def Q():
    return NumberField.rationals()


@pytest.fixture(scope="session")
def Qi():
    return NumberField([1, 0, 1])


@pytest.fixture(scope="session")
def Qs2():
    return NumberField([-2, 0, 1])


@pytest.fixture(scope="session")
def C2():
    return c2_model()


@pytest.fixture(scope="session")
def S3():
    return s3_model()


def pytest_terminal_summary(terminalreporter):
    import sys

    for mod in list(sys.modules.values()):
        results = getattr(mod, "ACCEPTANCE_RESULTS", None)
        if isinstance(results, dict) and results:
            terminalreporter.section("acceptance criteria")
            for n in sorted(results):
                terminalreporter.write_line(results[n])
            break

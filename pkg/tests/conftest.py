import pytest

from cophub import Engine, EngineConfig
from cophub.fixtures import Fig3Handles, build_fig3
from cophub.seed_io import tutoring_seed_doc


class FakeClock:
    """Deterministic clock: every reading advances by one second, so event
    ordering in tests is strict and reproducible."""

    def __init__(self, start: float = 1_000_000.0, step: float = 1.0):
        self.now = start
        self.step = step

    def __call__(self) -> float:
        value = self.now
        self.now += self.step
        return value

    def advance(self, seconds: float) -> None:
        self.now += seconds


@pytest.fixture
def clock() -> FakeClock:
    return FakeClock()


@pytest.fixture
def engine(clock) -> Engine:
    return Engine(clock=clock)


@pytest.fixture
def seeded(clock) -> Engine:
    e = Engine(clock=clock)
    e.load_seed(tutoring_seed_doc())
    return e


@pytest.fixture
def fig3(clock) -> tuple[Engine, Fig3Handles]:
    e = Engine(clock=clock)
    return e, build_fig3(e)


@pytest.fixture
def roots_allowed(clock) -> Engine:
    return Engine(config=EngineConfig(allow_member_roots=True), clock=clock)


def label_ids(engine: Engine) -> dict[str, str]:
    return {s.label: s.id for s in engine.taxonomy.active_subjects()}

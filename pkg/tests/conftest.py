import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Load (or compile) the numba kernels once so timed tests measure search, not JIT."""
    from tessella import Lattice, Tile, TileSystem, solve_periodic
    from tessella.solver import box_obstruction

    sq = Tile.of([(0, 0), (1, 0), (0, 1), (1, 1)])
    solve_periodic(sq, Lattice.scaled(2, 2))
    solve_periodic(TileSystem.single(sq, 2), Lattice.scaled(2, 2))
    box_obstruction(Tile.of([0, 2, 3]), 2)


ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    """record(n, ok, detail) files one summary line for criterion n."""

    def _record(n: int, ok: bool, detail: str) -> None:
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE[n] = line
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])

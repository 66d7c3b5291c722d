"""Shared test support.

Two things live here: the acceptance-criteria registry (every acceptance
test records a PASS/FAIL verdict that is printed as a one-line-per-criterion
block after the run) and the session-scoped benchmark cells that several
acceptance criteria read from. Each cell is executed at most once per
session, on first use.
"""

from __future__ import annotations

import pytest

from randpursuit import Objective
from randpursuit.harness import ExperimentSpec, run_experiment

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def acceptance():
    """Recorder: acceptance(num, name, ok, detail)."""

    def record(num: int, name: str, ok: bool, detail: str = "") -> None:
        _ACCEPTANCE[num] = (name, bool(ok), detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        name, ok, detail = _ACCEPTANCE[num]
        line = f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


def _run_cell(tmp_path_factory, tag: str, spec: ExperimentSpec) -> dict:
    out = tmp_path_factory.mktemp(tag)
    stats, paths = run_experiment(spec, out)
    return {"stats": {s.algorithm: s for s in stats},
            "spec": spec, "dir": out, "paths": paths}


@pytest.fixture(scope="session")
def cell_fexp_l4(tmp_path_factory):
    """Exponential spectrum, n=20, L=1e4, all schemes, 51 replicates."""
    spec = ExperimentSpec(
        objective=Objective("fexp", 20, 1e4),
        algorithms=("rp", "rp-exact", "sarp", "sarp-exact", "cma11",
                    "epcma-1", "epcma-2", "epcma-4", "epcma-n"),
        runs=51)
    return _run_cell(tmp_path_factory, "cell_fexp_l4", spec)


@pytest.fixture(scope="session")
def cell_fexp_l6(tmp_path_factory):
    """Exponential spectrum, n=20, L=1e6: the hard-conditioning pairing."""
    spec = ExperimentSpec(
        objective=Objective("fexp", 20, 1e6),
        algorithms=("rp", "sarp"),
        runs=51)
    return _run_cell(tmp_path_factory, "cell_fexp_l6", spec)


@pytest.fixture(scope="session")
def cell_fexp_n40(tmp_path_factory):
    """Exponential spectrum at doubled dimension, for the scaling check."""
    spec = ExperimentSpec(
        objective=Objective("fexp", 40, 1e4),
        algorithms=("sarp", "cma11"),
        runs=51)
    return _run_cell(tmp_path_factory, "cell_fexp_n40", spec)


@pytest.fixture(scope="session")
def cell_flin(tmp_path_factory):
    spec = ExperimentSpec(
        objective=Objective("flin", 20, 1e4),
        algorithms=("sarp", "epcma-1"),
        runs=51)
    return _run_cell(tmp_path_factory, "cell_flin", spec)


@pytest.fixture(scope="session")
def cell_ftwo(tmp_path_factory):
    spec = ExperimentSpec(
        objective=Objective("ftwo", 20, 1e4),
        algorithms=("sarp", "epcma-1"),
        runs=51)
    return _run_cell(tmp_path_factory, "cell_ftwo", spec)


@pytest.fixture(scope="session")
def cell_rosen(tmp_path_factory):
    """Non-convex objective, n=20, derived curvature bounds, 11 replicates."""
    spec = ExperimentSpec(
        objective=Objective("frosen", 20),
        algorithms=("rp", "sarp", "sarp-exact", "cma11"),
        runs=11)
    return _run_cell(tmp_path_factory, "cell_rosen", spec)


@pytest.fixture(scope="session")
def cell_rosen_verbatim(tmp_path_factory):
    """Same cell, accelerated scheme only, with the literal drift term."""
    spec = ExperimentSpec(
        objective=Objective("frosen", 20),
        algorithms=("sarp",),
        runs=11,
        drift_mode="verbatim")
    return _run_cell(tmp_path_factory, "cell_rosen_verbatim", spec)

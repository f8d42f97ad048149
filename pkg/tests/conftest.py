from __future__ import annotations

import glob
import os

import pytest

from nctptp.parser import parse_file

CORPUS_DIR = os.path.join(os.path.dirname(__file__), "corpus")


def corpus_path(name: str) -> str:
    return os.path.join(CORPUS_DIR, name)


def corpus_files() -> list[str]:
    return sorted(glob.glob(os.path.join(CORPUS_DIR, "*.p")))


@pytest.fixture(scope="session")
def committee_units():
    """Shared committee problem units (declarations, equality axioms,
    hypotheses) without any logic specification."""
    full = parse_file(corpus_path("committee_tim.p"))
    return [u for u in full if not u.is_logic()]


def committee_problem(spec_file: str, shared) -> list:
    return parse_file(corpus_path(spec_file)) + list(shared)

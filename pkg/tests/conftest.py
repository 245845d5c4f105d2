from pathlib import Path

import pytest

from finicheck.sema import resolve
from finicheck.syntax import parse_source

CORPUS = Path(__file__).resolve().parents[1] / "src" / "finicheck" / "corpus"


def corpus_text(name: str) -> str:
    return (CORPUS / name).read_text(encoding="utf-8")


def load(name: str, **consts):
    """Parse and resolve a corpus file with the given constants."""
    return resolve(parse_source(corpus_text(name)), consts)


def typed_source(source: str, **consts):
    return resolve(parse_source(source), consts)


@pytest.fixture(scope="session")
def gcd20():
    return load("gcd.spec", N=20)

"""Shipped example documents."""
from pathlib import Path

from ..textformat import parse

DIR = Path(__file__).parent


def path(name: str) -> Path:
    return DIR / f"{name}.tlms"


def load(name: str):
    return parse(path(name).read_text(encoding="utf-8"))

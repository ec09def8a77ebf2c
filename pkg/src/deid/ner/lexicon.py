"""Lexicon files: one term per line, grouped by what they name."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class Lexicons:
    first_names: tuple[str, ...]
    last_names: tuple[str, ...]
    hospitals: tuple[str, ...]
    cities: tuple[str, ...]
    streets: tuple[str, ...]
    organizations: tuple[str, ...]

    def name_terms(self) -> set[str]:
        return {t.lower() for t in self.first_names} | {t.lower() for t in self.last_names}

    def all_phrases(self) -> list[str]:
        out: list[str] = []
        for group in (self.first_names, self.last_names, self.hospitals,
                      self.cities, self.streets, self.organizations):
            out.extend(group)
        return out


def _read_terms(text: str) -> tuple[str, ...]:
    return tuple(line.strip() for line in text.splitlines() if line.strip())


def load_lexicons(directory: Path | None = None) -> Lexicons:
    """Load from a directory of .txt files, defaulting to the shipped set."""
    names = ("first_names", "last_names", "hospitals", "cities", "streets", "organizations")
    groups = {}
    for name in names:
        if directory is not None:
            text = (directory / f"{name}.txt").read_text()
        else:
            text = resources.files("deid.ner").joinpath(f"data/{name}.txt").read_text()
        groups[name] = _read_terms(text)
    return Lexicons(**groups)


_DEFAULT: Lexicons | None = None


def default_lexicons() -> Lexicons:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_lexicons()
    return _DEFAULT

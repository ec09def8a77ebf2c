"""Recipes: ordered tag-pattern to action-code tables.

Patterns are "gggg,eeee" with hex digits or the wildcard x (e.g. "0010,xxxx").
The first matching entry wins; unmatched private tags take the private
action and everything else falls back to the default action.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..dicomio import Tag
from .actions import ActionCode

_PATTERN_RE = re.compile(r"^[0-9a-fx]{4},[0-9a-fx]{4}$")


@dataclass(frozen=True)
class RecipeEntry:
    pattern: str
    action: ActionCode
    dummy: str | None = None

    def __post_init__(self):
        pat = self.pattern.lower()
        if not _PATTERN_RE.match(pat):
            raise ValueError(f"bad tag pattern {self.pattern!r}")
        object.__setattr__(self, "pattern", pat)

    def matches(self, tag: Tag) -> bool:
        text = f"{tag.group:04x},{tag.element:04x}"
        return all(p == "x" or p == c for p, c in zip(self.pattern, text))


@dataclass(frozen=True)
class Recipe:
    entries: tuple[RecipeEntry, ...]
    default_action: ActionCode = ActionCode.X
    private_tag_action: ActionCode = ActionCode.X
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def resolve(self, tag: Tag) -> RecipeEntry | None:
        """First matching entry, or None when a fallback action applies."""
        key = (tag.group, tag.element)
        if key in self._cache:
            return self._cache[key]
        found = None
        for entry in self.entries:
            if entry.matches(tag):
                found = entry
                break
        self._cache[key] = found
        return found

    def action_for(self, tag: Tag) -> ActionCode:
        entry = self.resolve(tag)
        if entry is not None:
            return entry.action
        if tag.is_private:
            return self.private_tag_action
        return self.default_action


def load_recipe(path: Path | str) -> Recipe:
    return _recipe_from_dict(json.loads(Path(path).read_text()))


def save_recipe(recipe: Recipe, path: Path | str) -> None:
    doc = {
        "default_action": recipe.default_action.value,
        "private_tag_action": recipe.private_tag_action.value,
        "entries": [
            {"pattern": e.pattern, "action": e.action.value,
             **({"dummy": e.dummy} if e.dummy is not None else {})}
            for e in recipe.entries
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _recipe_from_dict(doc: dict) -> Recipe:
    entries = tuple(
        RecipeEntry(e["pattern"], ActionCode(e["action"]), e.get("dummy"))
        for e in doc.get("entries", ())
    )
    return Recipe(
        entries=entries,
        default_action=ActionCode(doc.get("default_action", "X")),
        private_tag_action=ActionCode(doc.get("private_tag_action", "X")),
    )


_DEFAULT: Recipe | None = None


def default_recipe() -> Recipe:
    """The shipped baseline recipe."""
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files("deid.metadeid").joinpath("data/default_recipe.json").read_text()
        _DEFAULT = _recipe_from_dict(json.loads(text))
    return _DEFAULT

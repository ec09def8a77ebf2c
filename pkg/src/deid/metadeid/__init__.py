"""Recipe-driven metadata de-identification."""

from .actions import ActionCode, UnknownVRForDummy, dummy_for
from .dates import DateShiftPolicy, shift_da_value
from .engine import DeidContext, apply_recipe, ensemble_detect
from .fuzzy import PhiLexicon, REDACTION_MARK, fuzzy_scrub, levenshtein, lexicon_from_terms
from .recipe import Recipe, RecipeEntry, default_recipe, load_recipe, save_recipe
from .uids import UidMap

__all__ = [
    "ActionCode",
    "DateShiftPolicy",
    "DeidContext",
    "PhiLexicon",
    "REDACTION_MARK",
    "Recipe",
    "RecipeEntry",
    "UidMap",
    "UnknownVRForDummy",
    "apply_recipe",
    "default_recipe",
    "dummy_for",
    "ensemble_detect",
    "fuzzy_scrub",
    "levenshtein",
    "lexicon_from_terms",
    "load_recipe",
    "save_recipe",
    "shift_da_value",
]

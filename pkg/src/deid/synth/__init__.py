"""Synthetic burned-text image corpus, augmentations and noise injection."""

from .augment import AUGMENT_OPS, augment
from .burn import EmptyText, OutOfBounds, burn_text
from .corpus import (
    Burn,
    BURN_INTENSITY,
    CorpusSpec,
    NON_PHI_TEXTS,
    SynthImage,
    generate_corpus,
    generate_image,
    load_sidecar,
    sidecar_record,
    to_dataset,
    write_corpus,
)
from .glyphs import SUPPORTED_CHARS, UnsupportedGlyph, render_text
from .noise import CLEAN_SNR, NoiseSpec, SNR_LADDER, add_salt_pepper, measured_snr_db
from .phantoms import CONTENT_MAX, MODALITIES, phantom

__all__ = [
    "AUGMENT_OPS",
    "BURN_INTENSITY",
    "Burn",
    "CLEAN_SNR",
    "CONTENT_MAX",
    "CorpusSpec",
    "EmptyText",
    "MODALITIES",
    "NON_PHI_TEXTS",
    "NoiseSpec",
    "OutOfBounds",
    "SNR_LADDER",
    "SUPPORTED_CHARS",
    "SynthImage",
    "UnsupportedGlyph",
    "add_salt_pepper",
    "augment",
    "burn_text",
    "generate_corpus",
    "generate_image",
    "load_sidecar",
    "measured_snr_db",
    "phantom",
    "render_text",
    "sidecar_record",
    "to_dataset",
    "write_corpus",
]

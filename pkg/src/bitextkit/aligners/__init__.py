from .bleu import BleuAlignParams, align_bleu
from .bullets import BulletAlignment, align_bullets
from .length import BEADS, BilingualLexicon, LengthAlignParams, align_length, gale_church_cost

__all__ = [
    "BEADS",
    "BilingualLexicon",
    "BleuAlignParams",
    "BulletAlignment",
    "LengthAlignParams",
    "align_bleu",
    "align_bullets",
    "align_length",
    "gale_church_cost",
]

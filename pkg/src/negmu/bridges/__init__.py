"""Bridges from λμ and from the single-identifier-class calculus."""
from .lmu import ContextSwitch, LmuJudgement, embed_lmu, lmu_typing, parse_lmu, to_lmu
from .nlm import TranslationError, parse_nlm, translate, translate_context, typecheck_nlm, ul

__all__ = [
    "ContextSwitch", "LmuJudgement", "embed_lmu", "lmu_typing", "parse_lmu", "to_lmu",
    "TranslationError", "parse_nlm", "translate", "translate_context", "typecheck_nlm", "ul",
]

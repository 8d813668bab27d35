from .compose import ImageMacro, MacroLayout, compose_macro, macro_png_bytes
from .card import render_card_metadata

__all__ = [
    "MacroLayout",
    "ImageMacro",
    "compose_macro",
    "macro_png_bytes",
    "render_card_metadata",
]

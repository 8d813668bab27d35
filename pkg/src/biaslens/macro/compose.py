"""Image-macro (collage) rendering.

Selected images go into a fixed grid: each is center-cropped square, scaled
to the cell size, and placed row-major with gutters; a caption band sits at
the bottom. Rendering is pure, uses one bundled font at a fixed size, and is
bitwise reproducible for identical inputs.
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, ImageDraw, ImageFont

from ..errors import CaptionTooLongError, EmptySelectionError, LayoutError

CAPTION_LIMIT = 280
FILL_GRAY = (203, 203, 203)
BAND_COLOR = (24, 24, 24)
CAPTION_COLOR = (240, 240, 240)
FONT_SIZE = 18


@dataclass(frozen=True)
class MacroLayout:
    rows: int
    cols: int
    cell: int = 320
    gutter: int = 8
    label_mode: str = "none"  # none | per-source-label
    caption_band_height: int = 60

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be >= 1")
        if self.cell < 1 or self.gutter < 0 or self.caption_band_height < 0:
            raise ValueError("bad cell/gutter/band dimensions")

    @property
    def capacity(self) -> int:
        return self.rows * self.cols

    @property
    def raster_width(self) -> int:
        return self.cols * self.cell + (self.cols + 1) * self.gutter

    @property
    def raster_height(self) -> int:
        return self.rows * self.cell + (self.rows + 1) * self.gutter + self.caption_band_height


@dataclass(frozen=True, eq=False)
class ImageMacro:
    macro_id: str
    story_id: str
    image_ids: tuple
    caption: str
    raster: np.ndarray = field(repr=False)
    created_by: str = "activist"
    created_at: str = ""
    layout: MacroLayout = field(default_factory=lambda: MacroLayout(1, 1))


def _font() -> ImageFont.FreeTypeFont:
    # Pillow's own embedded face: no system font dependency.
    return ImageFont.load_default(size=FONT_SIZE)


def _center_crop_square(img: Image.Image) -> Image.Image:
    w, h = img.size
    side = min(w, h)
    left = (w - side) // 2
    top = (h - side) // 2
    return img.crop((left, top, left + side, top + side))


def _truncate_caption(draw: ImageDraw.ImageDraw, caption: str, max_width: int, font) -> str:
    if draw.textlength(caption, font=font) <= max_width:
        return caption
    ellipsis = "…"
    kept = caption
    while kept and draw.textlength(kept + ellipsis, font=font) > max_width:
        kept = kept[:-1]
    return kept + ellipsis


def compose_macro(
    images: list,
    layout: MacroLayout,
    caption: str,
    story_id: str = "",
    created_by: str = "activist",
    created_at: str = "",
) -> ImageMacro:
    """Render the selection into a collage raster plus caption band.

    ``images`` are decoded ArticleImages in the activist's chosen order.
    """
    if not images:
        raise EmptySelectionError("no images selected")
    if len(images) > layout.capacity:
        raise LayoutError(
            f"{len(images)} images exceed {layout.rows}x{layout.cols} grid"
        )
    if len(caption) > CAPTION_LIMIT:
        raise CaptionTooLongError(f"caption is {len(caption)} chars (limit {CAPTION_LIMIT})")

    canvas = Image.new("RGB", (layout.raster_width, layout.raster_height), FILL_GRAY)
    for index, article_image in enumerate(images):
        row, col = divmod(index, layout.cols)
        tile = Image.fromarray(article_image.raster)
        tile = _center_crop_square(tile).resize((layout.cell, layout.cell), Image.LANCZOS)
        x = layout.gutter + col * (layout.cell + layout.gutter)
        y = layout.gutter + row * (layout.cell + layout.gutter)
        canvas.paste(tile, (x, y))

    band_top = layout.raster_height - layout.caption_band_height
    draw = ImageDraw.Draw(canvas)
    draw.rectangle(
        (0, band_top, layout.raster_width, layout.raster_height), fill=BAND_COLOR
    )
    if caption and layout.caption_band_height >= FONT_SIZE:
        font = _font()
        text = _truncate_caption(draw, caption, layout.raster_width - 2 * layout.gutter, font)
        draw.text(
            (layout.gutter, band_top + (layout.caption_band_height - FONT_SIZE) // 2),
            text,
            fill=CAPTION_COLOR,
            font=font,
        )

    raster = np.asarray(canvas)
    macro_id = derive_macro_id(story_id, [img.image_id for img in images], layout, caption)
    return ImageMacro(
        macro_id=macro_id,
        story_id=story_id,
        image_ids=tuple(img.image_id for img in images),
        caption=caption,
        raster=raster,
        created_by=created_by,
        created_at=created_at,
        layout=layout,
    )


def derive_macro_id(story_id: str, image_ids, layout: MacroLayout, caption: str) -> str:
    """Content-derived id: identical selections yield identical macros."""
    key = "|".join(
        [
            story_id,
            ",".join(image_ids),
            f"{layout.rows}x{layout.cols}x{layout.cell}x{layout.gutter}x{layout.caption_band_height}",
            caption,
        ]
    )
    return "m" + hashlib.sha256(key.encode()).hexdigest()[:12]


def macro_png_bytes(macro: ImageMacro) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(macro.raster).save(buf, format="PNG")
    return buf.getvalue()

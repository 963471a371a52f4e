"""Red/cyan channel-mask compositing of stereo render targets over a frame."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .imaging import Frame
from .renderer import RenderTarget


@dataclass(frozen=True)
class AnaglyphConfig:
    enabled: bool = True
    separation: float = 0.06  # meters, forwarded to eye_offset
    left_mask: tuple[bool, bool, bool] = (True, False, False)
    right_mask: tuple[bool, bool, bool] = (False, True, True)

    def __post_init__(self):
        if any(l and r for l, r in zip(self.left_mask, self.right_mask)):
            raise InvalidInputError("left and right masks must be channel-disjoint")
        if self.separation < 0:
            raise InvalidInputError("separation must be >= 0")


def composite(frame: Frame, left: RenderTarget, right: RenderTarget,
              cfg: AnaglyphConfig = AnaglyphConfig()) -> Frame:
    """Merge per-eye renders into the frame with per-channel masks.

    Enabled: each channel comes from the eye whose mask claims it, wherever
    that eye's coverage is set; the camera frame shows through everywhere
    else. Disabled: ``left`` is treated as a center-eye render and
    over-composited on all channels.
    """
    for t in (left, right):
        if t.height != frame.height or t.width != frame.width:
            raise InvalidInputError("render target dimensions must match the frame")
    out = frame.pixels.copy()
    if not cfg.enabled:
        out[left.coverage] = left.color[left.coverage]
        return Frame(out)
    for c in range(3):
        if cfg.left_mask[c]:
            sel = left.coverage
            out[sel, c] = left.color[sel, c]
        elif cfg.right_mask[c]:
            sel = right.coverage
            out[sel, c] = right.color[sel, c]
    return Frame(out)

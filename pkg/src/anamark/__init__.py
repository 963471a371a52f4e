"""Marker-based anaglyph AR engine.

Detects binary-grid fiducial markers in camera frames, estimates their 3D
pose, renders bound objects from left/right eye positions with a software
rasterizer, and composites them over the frame with red/cyan channel masks.
"""

__version__ = "0.1.0"

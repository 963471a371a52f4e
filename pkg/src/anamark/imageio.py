"""Raster file I/O: PNG (via Pillow), binary PPM (P6), and PGM (P5)."""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from .errors import InvalidInputError
from .imaging import BinaryImage, Frame, GrayImage


def load_frame(path: str) -> Frame:
    p = str(path)
    if p.lower().endswith((".ppm", ".pnm")):
        return Frame(read_ppm(p))
    with Image.open(p) as im:
        return Frame(np.asarray(im.convert("RGB")))


def save_frame(frame: Frame, path: str) -> None:
    p = str(path)
    if p.lower().endswith((".ppm", ".pnm")):
        write_ppm(frame.pixels, p)
    else:
        Image.fromarray(frame.pixels).save(p, format="PNG")


def frame_from_png_bytes(data: bytes) -> Frame:
    try:
        with Image.open(io.BytesIO(data)) as im:
            return Frame(np.asarray(im.convert("RGB")))
    except Exception as exc:
        raise InvalidInputError(f"cannot decode image: {exc}") from exc


def frame_to_png_bytes(frame: Frame) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(frame.pixels).save(buf, format="PNG")
    return buf.getvalue()


def read_ppm(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    magic, fields, pos = _read_header(data, b"P6", 3)
    w, h, maxval = fields
    if maxval != 255:
        raise InvalidInputError(f"unsupported PPM maxval {maxval}")
    pixels = np.frombuffer(data, dtype=np.uint8, count=w * h * 3, offset=pos)
    return pixels.reshape(h, w, 3).copy()


def write_ppm(pixels: np.ndarray, path: str) -> None:
    h, w = pixels.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode())
        fh.write(np.ascontiguousarray(pixels, dtype=np.uint8).tobytes())


def write_pgm(values: np.ndarray, path: str) -> None:
    h, w = values.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode())
        fh.write(np.ascontiguousarray(values, dtype=np.uint8).tobytes())


def read_pgm(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    magic, fields, pos = _read_header(data, b"P5", 3)
    w, h, maxval = fields
    if maxval != 255:
        raise InvalidInputError(f"unsupported PGM maxval {maxval}")
    values = np.frombuffer(data, dtype=np.uint8, count=w * h, offset=pos)
    return values.reshape(h, w).copy()


def save_binary_pgm(bin_img: BinaryImage, path: str) -> None:
    """Debug dump of a BinaryImage: dark/foreground bits as 255, rest 0."""
    write_pgm(np.where(bin_img.bits, 255, 0).astype(np.uint8), path)


def save_gray(gray: GrayImage, path: str) -> None:
    p = str(path)
    if p.lower().endswith(".pgm"):
        write_pgm(gray.values, p)
    else:
        Image.fromarray(gray.values, mode="L").save(p, format="PNG")


def _read_header(data: bytes, magic: bytes, nfields: int):
    if not data.startswith(magic):
        raise InvalidInputError(f"not a {magic.decode()} file")
    fields = []
    pos = len(magic)
    while len(fields) < nfields:
        # skip whitespace and comment lines
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise InvalidInputError("truncated netpbm header")
        fields.append(int(data[start:pos]))
    pos += 1  # single whitespace after maxval
    return magic, fields, pos

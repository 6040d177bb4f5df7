"""Binary PPM frame sequences and their pure-quaternion tensor view.

A color video is a directory of binary PPM (P6, maxval 255) files named
frame_0001.ppm, frame_0002.ppm, ... with identical dimensions. Pixels map to
pure quaternions 0 + (R/255) i + (G/255) j + (B/255) k; saving clamps to
[0, 1], scales by 255 and rounds half away from zero, so any tensor whose
values sit on the 8-bit grid survives a save/load round trip byte for byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .qtensor import QTensor3

_FRAME_RE = re.compile(r"^frame_(\d+)\.ppm$")


@dataclass(frozen=True)
class FrameSequence:
    """Stack of RGB frames, shape (n_frames, height, width, 3), uint8."""

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels)
        if p.ndim != 4 or p.shape[3] != 3 or p.dtype != np.uint8:
            raise DataError("frame stack must be (n, h, w, 3) uint8")
        object.__setattr__(self, "pixels", p)

    @property
    def n_frames(self) -> int:
        return self.pixels.shape[0]

    def tensor(self) -> QTensor3:
        """Pure-quaternion view scaled to [0, 1]; scalar plane is zero."""
        scaled = self.pixels.astype(float) / 255.0
        rgb = np.moveaxis(scaled, 0, 2)  # (h, w, n, 3)
        zero = np.zeros(rgb.shape[:3])
        return QTensor3(zero, rgb[..., 0], rgb[..., 1], rgb[..., 2])

    @classmethod
    def from_tensor(cls, t: QTensor3) -> "FrameSequence":
        """Quantize the x/y/z planes to 8-bit RGB frames.

        Values are clamped to [0, 1] first; rounding is half away from zero.
        The scalar plane is dropped (it is zero for pure encodings).
        """
        rgb = np.stack([t.x, t.y, t.z], axis=-1)  # (h, w, n, 3)
        rgb = np.clip(rgb, 0.0, 1.0)
        quant = np.floor(rgb * 255.0 + 0.5).astype(np.uint8)
        return cls(np.moveaxis(quant, 2, 0))


def _read_ppm(path: Path) -> np.ndarray:
    raw = path.read_bytes()
    if raw[:2] != b"P6":
        raise DataError(f"{path.name}: not a binary PPM (P6) file")
    pos = 2
    fields = []
    while len(fields) < 3:
        if pos >= len(raw):
            raise DataError(f"{path.name}: truncated header")
        c = raw[pos : pos + 1]
        if c == b"#":
            nl = raw.find(b"\n", pos)
            if nl < 0:
                raise DataError(f"{path.name}: unterminated comment")
            pos = nl + 1
        elif c.isspace():
            pos += 1
        else:
            end = pos
            while end < len(raw) and not raw[end : end + 1].isspace():
                end += 1
            token = raw[pos:end]
            if not token.isdigit():
                raise DataError(f"{path.name}: bad header token {token!r}")
            fields.append(int(token))
            pos = end
    pos += 1  # single whitespace byte after maxval
    width, height, maxval = fields
    if maxval != 255:
        raise DataError(f"{path.name}: maxval {maxval} unsupported (need 255)")
    need = width * height * 3
    body = raw[pos : pos + need]
    if len(body) != need:
        raise DataError(
            f"{path.name}: expected {need} pixel bytes, found {len(body)}"
        )
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width, 3)


def _write_ppm(frame: np.ndarray, path: Path) -> None:
    height, width, _ = frame.shape
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    path.write_bytes(header + np.ascontiguousarray(frame).tobytes())


def load_frames(directory) -> FrameSequence:
    """Load a directory of frame_%04d.ppm files, 1-indexed and contiguous."""
    directory = Path(directory)
    if not directory.is_dir():
        raise DataError(f"{directory}: not a directory")
    indexed = {}
    for p in directory.iterdir():
        m = _FRAME_RE.match(p.name)
        if m:
            indexed[int(m.group(1))] = p
    if not indexed:
        raise DataError(f"{directory}: no frame_*.ppm files found")
    n = len(indexed)
    if sorted(indexed) != list(range(1, n + 1)):
        raise DataError(
            f"{directory}: frame indices must be 1..{n} without gaps"
        )
    frames = []
    for i in range(1, n + 1):
        frame = _read_ppm(indexed[i])
        if frames and frame.shape != frames[0].shape:
            raise DataError(
                f"{indexed[i].name}: dimensions {frame.shape[:2]} differ "
                f"from first frame {frames[0].shape[:2]}"
            )
        frames.append(frame)
    return FrameSequence(np.stack(frames))


def save_frames(seq, directory) -> None:
    """Write frames (a FrameSequence or QTensor3) as frame_%04d.ppm files."""
    if isinstance(seq, QTensor3):
        seq = FrameSequence.from_tensor(seq)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for i in range(seq.n_frames):
        _write_ppm(seq.pixels[i], directory / f"frame_{i + 1:04d}.ppm")

"""1-bit control matrices ("codebooks") for a rows x cols RIS board.

Bit ``1`` drives phase 0 and bit ``0`` drives phase pi. Cells are laid out
row-major: cell ``i`` sits at row ``i // cols``, column ``i % cols``. The text
format is one grid row per line with bits separated by single spaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, UnsupportedSchemeError
from .types import PhaseConfig, QuantizationScheme


@dataclass(frozen=True, eq=False)
class CodebookGrid:
    rows: int
    cols: int
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.shape != (self.rows, self.cols):
            raise GeometryError(f"bit matrix has shape {bits.shape}, expected {(self.rows, self.cols)}")
        if not np.isin(bits, (0, 1)).all():
            raise GeometryError("codebook entries must be 0 or 1")
        bits = bits.astype(np.int8)
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    def __eq__(self, other):
        return isinstance(other, CodebookGrid) and np.array_equal(self.bits, other.bits)

    @classmethod
    def from_config(cls, cfg: PhaseConfig, rows: int, cols: int) -> "CodebookGrid":
        if cfg.scheme.bits != 1:
            raise UnsupportedSchemeError(f"codebook export needs a 1-bit scheme, got B={cfg.scheme.bits}")
        if rows < 1 or cols < 1 or rows * cols != len(cfg):
            raise GeometryError(f"a {rows}x{cols} grid cannot hold {len(cfg)} cells")
        # level 0 (phase 0) -> bit 1, level 1 (phase pi) -> bit 0
        return cls(rows, cols, (1 - cfg.indices).reshape(rows, cols))

    def to_config(self) -> PhaseConfig:
        return PhaseConfig((1 - self.bits).ravel().astype(np.int64), QuantizationScheme(1))

    def to_text(self) -> str:
        return "".join(" ".join(str(int(b)) for b in row) + "\n" for row in self.bits)

    @classmethod
    def from_text(cls, text: str) -> "CodebookGrid":
        rows = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            toks = line.split()
            if any(t not in ("0", "1") for t in toks):
                raise GeometryError(f"line {lineno}: codebook entries must be '0' or '1'")
            rows.append([int(t) for t in toks])
        if not rows:
            raise GeometryError("empty codebook")
        if len({len(r) for r in rows}) != 1:
            raise GeometryError("codebook rows have different lengths")
        return cls(len(rows), len(rows[0]), np.array(rows))


def write_codebook(cfg: PhaseConfig, rows: int, cols: int, path) -> CodebookGrid:
    grid = CodebookGrid.from_config(cfg, rows, cols)
    with open(path, "w") as fh:
        fh.write(grid.to_text())
    return grid


def read_codebook(path) -> PhaseConfig:
    with open(path) as fh:
        return CodebookGrid.from_text(fh.read()).to_config()

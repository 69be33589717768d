"""
Density matrix JSON import/export
Payload: {"n": 4, "N": 2, "matrix": [[[re, im], ...], ...]}
"""

from pathlib import Path
from typing import List, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from utils.common import save_json_file, setup_logging
from utils.error_handler import ParseError, error_handler_decorator
from .fermion_states import DensityMatrix

logger = setup_logging(__name__)


class DensityMatrixPayload(BaseModel):
    """Wire format of a product-basis density matrix"""
    n: int = Field(ge=2)
    N: int = Field(ge=2)
    matrix: List[List[List[float]]]

    @field_validator('matrix')
    @classmethod
    def entries_are_pairs(cls, rows: List[List[List[float]]]) -> List[List[List[float]]]:
        for row in rows:
            for entry in row:
                if len(entry) != 2:
                    raise ValueError(f"matrix entries must be [re, im] pairs, got {entry}")
        return rows

    def to_array(self) -> np.ndarray:
        widths = {len(row) for row in self.matrix}
        if len(widths) > 1:
            raise ParseError("matrix rows have different lengths", row_lengths=sorted(widths))
        arr = np.asarray(self.matrix, dtype=float)
        if arr.ndim != 3:
            raise ParseError("matrix must be a non-empty array of rows")
        return arr[..., 0] + 1j * arr[..., 1]


def to_payload(rho: DensityMatrix) -> DensityMatrixPayload:
    m = rho.matrix
    rows = [[[float(z.real), float(z.imag)] for z in row] for row in m]
    return DensityMatrixPayload(n=rho.n, N=rho.N, matrix=rows)


def parse_density_matrix(text: str) -> DensityMatrix:
    """
    Parse and validate a JSON document

    Raises:
        ParseError: malformed JSON or payload schema
        InputValidationError subclasses: the matrix violates a DensityMatrix invariant
    """
    try:
        payload = DensityMatrixPayload.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0] if e.errors() else {}
        raise ParseError(f"invalid density matrix payload: {first.get('msg', e)}",
                         location=[str(part) for part in first.get('loc', ())]) from e
    return DensityMatrix.create(payload.to_array(), payload.n, payload.N)


@error_handler_decorator("state_io")
def load_density_matrix(path: Union[str, Path]) -> DensityMatrix:
    """Read a density matrix JSON file and apply all DensityMatrix invariants"""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}", path=str(path)) from e
    rho = parse_density_matrix(text)
    logger.info("density_matrix_loaded", path=str(path), n=rho.n, N=rho.N)
    return rho


def dump_density_matrix(rho: DensityMatrix, path: Union[str, Path]) -> bool:
    return save_json_file(to_payload(rho).model_dump(), str(path))

# Storage Package
from plse.storage.files import (
    read_json,
    read_matrix_csv,
    read_vector_csv,
    write_frame,
    write_json,
    write_vector_csv,
)

__all__ = [
    "read_json",
    "read_matrix_csv",
    "read_vector_csv",
    "write_frame",
    "write_json",
    "write_vector_csv",
]

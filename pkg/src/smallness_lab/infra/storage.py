"""JSON and CSV files for inputs, certificates and reports."""

import csv
import io
import sys
from pathlib import Path
from typing import Iterable, Optional, TextIO, Type, TypeVar

from pydantic import BaseModel, ValidationError

from ..api.schemas import ResultRow
from ..domain.errors import ConfigurationError

M = TypeVar("M", bound=BaseModel)

CSV_COLUMNS = ("instance_id", "n", "p", "bound", "exact", "verdict")


def render_json(model: BaseModel) -> str:
    """Deterministic JSON: model field order, indent 2, trailing newline."""
    return model.model_dump_json(indent=2, by_alias=True) + "\n"


def render_csv(rows: Iterable[ResultRow]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.model_dump())
    return buffer.getvalue()


class FileStore:
    """Reads validated models from files and writes reports to files or standard output."""

    def __init__(self, stdout: Optional[TextIO] = None):
        """Initialize store."""
        self.stdout = stdout

    def read_model(self, path: Path, model: Type[M]) -> M:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigurationError(f"cannot read {path}: {e.strerror}", path=str(path)) from e
        try:
            return model.model_validate_json(text)
        except ValidationError as e:
            raise ConfigurationError(
                f"{path} is not a valid {model.__name__}: {e.error_count()} error(s)",
                path=str(path),
                errors=[err["msg"] for err in e.errors()],
            ) from e

    def write_text(self, text: str, path: Optional[Path] = None) -> None:
        if path is None:
            stream = self.stdout or sys.stdout
            stream.write(text)
            stream.flush()
            return
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as e:
            raise ConfigurationError(f"cannot write {path}: {e.strerror}", path=str(path)) from e

    def write_json(self, model: BaseModel, path: Optional[Path] = None) -> None:
        self.write_text(render_json(model), path)

    def write_csv(self, rows: Iterable[ResultRow], path: Optional[Path] = None) -> None:
        self.write_text(render_csv(rows), path)

"""Field location tracking for configuration error reporting."""

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class FieldLocation:
    """Points at a field inside a scenario file or a row of a registry CSV."""

    source: str
    path: str = ""
    row: Optional[int] = None

    def child(self, key) -> "FieldLocation":
        """Location of a nested key (str) or list index (int)."""
        if isinstance(key, int):
            return FieldLocation(self.source, f"{self.path}[{key}]", self.row)
        path = f"{self.path}.{key}" if self.path else str(key)
        return FieldLocation(self.source, path, self.row)

    def __str__(self) -> str:
        """Format as source:path or source:row N:path."""
        parts = [self.source]
        if self.row is not None:
            parts.append(f"row {self.row}")
        if self.path:
            parts.append(self.path)
        return ":".join(parts)

"""Interface for output writers."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any


class IOutputWriter(ABC):
    """
    Contract for writing one kind of run artifact to a file.

    Plan logs, verification summaries and simulation traces each have a
    writer; the CLI picks one per output and never formats files itself.
    """

    suffix: str = ""

    @classmethod
    def target(cls, path: Path) -> Path:
        """The file written for ``path``; ``suffix`` is appended when path has none."""
        path = Path(path)
        if cls.suffix and not path.suffix:
            path = path.with_suffix(cls.suffix)
        return path

    @abstractmethod
    def format(self, artifact: Any) -> str:
        """
        Render an artifact as the file's text.

        Args:
            artifact: The object this writer understands.

        Raises:
            NotImplementedError: If the subclass doesn't implement this method.
        """

    def write(self, artifact: Any, path: Path) -> Path:
        """Write the artifact, creating parent directories; returns the path written."""
        path = self.target(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.format(artifact), encoding="utf-8")
        return path

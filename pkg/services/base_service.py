"""
Base codec for line-oriented documents
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Generic, Iterator, List, Optional, Tuple, TypeVar

from pydantic import ValidationError

from utils.exceptions import DocumentError, DocumentParseError
from utils.logger import get_logger

logger = get_logger(__name__)

DocumentT = TypeVar("DocumentT")


class BaseDocumentCodec(ABC, Generic[DocumentT]):
    """Abstract base class for document parsers and emitters"""

    def __init__(self, base_dir: Optional[Path] = None):
        """
        Initialize codec

        Args:
            base_dir: Directory that relative references inside documents resolve against
        """
        self.base_dir = Path(base_dir) if base_dir is not None else Path.cwd()
        self.logger = logger

    @abstractmethod
    def parse(self, text: str) -> DocumentT:
        """
        Parse document text

        Raises:
            DocumentParseError: If the text is malformed or fails schema validation
        """
        pass

    @abstractmethod
    def emit(self, document: DocumentT) -> str:
        """Render a document in canonical text form"""
        pass

    def load(self, path) -> DocumentT:
        """
        Read and parse a document file

        Relative references in the document resolve against the file's directory.

        Raises:
            DocumentError: If the file cannot be read
            DocumentParseError: If parsing fails
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DocumentError(f"Cannot read {path}: {exc}")
        previous = self.base_dir
        self.base_dir = path.parent
        try:
            document = self.parse(text)
        finally:
            self.base_dir = previous
        self.logger.debug(f"Loaded {path}")
        return document

    # ------------------------------------------------------------------
    # Shared lexing helpers
    # ------------------------------------------------------------------

    @staticmethod
    def content_lines(text: str) -> Iterator[Tuple[int, str]]:
        """Yield (line number, content) with comments and blank lines removed"""
        for number, raw in enumerate(text.splitlines(), start=1):
            content = raw.split("#", 1)[0].strip()
            if content:
                yield number, content

    @staticmethod
    def split_key(line: str, number: int) -> Tuple[str, str]:
        """Split "key: value" at the first colon"""
        key, sep, value = line.partition(":")
        if not sep:
            raise DocumentParseError(f"expected 'key: value', got '{line}'", number, 1)
        return key.strip(), value.strip()

    @staticmethod
    def parse_ints(value: str, number: int, line: str = "") -> List[int]:
        """Whitespace separated integers"""
        numbers = []
        for token in value.split():
            try:
                numbers.append(int(token))
            except ValueError:
                column = line.find(token) + 1 if line else None
                raise DocumentParseError(f"'{token}' is not an integer", number, column)
        return numbers

    @staticmethod
    def from_validation_error(exc: ValidationError, line: Optional[int] = None) -> DocumentParseError:
        """Re-raise a pydantic schema failure as a parse error"""
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        message = first.get("msg", str(exc))
        return DocumentParseError(f"{where}: {message}" if where else message, line)

# shabrauer/data/problem_loader.py

import hashlib
import json
import logging
import os

from pydantic import ValidationError

from shabrauer.errors import SchemaError
from shabrauer.models import ProblemDocument

logger = logging.getLogger(__name__)


def _location(error: dict) -> str:
    return ".".join(str(part) for part in error["loc"])


class ProblemLoader:
    """Reads problem documents (JSON) and validates them against the schema."""

    def __init__(self, data_path='.'):
        self.data_path = data_path

    def load(self, filename):
        """
        Loads and validates one document.

        Returns:
            Tuple[ProblemDocument, str]: The document and the SHA-256 digest of the file.
        """
        filepath = os.path.join(self.data_path, filename)
        if not os.path.exists(filepath):
            raise FileNotFoundError(f"{filepath} does not exist.")
        with open(filepath, encoding="utf-8") as handle:
            text = handle.read()
        logger.debug(f"Loaded {len(text)} characters from {filepath}")
        return self.load_string(text, source=filepath)

    def load_string(self, text, source='<string>'):
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(e.msg, location=f"{source}:{e.lineno}:{e.colno}") from e
        try:
            document = ProblemDocument.model_validate(raw)
        except ValidationError as e:
            first = e.errors()[0]
            raise SchemaError(
                f"{first['msg']} ({e.error_count()} error(s))", location=f"{source}: {_location(first)}"
            ) from e
        return document, digest

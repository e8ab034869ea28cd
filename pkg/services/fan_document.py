"""
Fan documents

    # comments start with a hash
    name: p2
    rank: 2
    ray 0: 1 0
    ray 1: 0 1
    ray 2: -1 -1
    cone: 0 1
    cone: 1 2
    cone: 0 2

Only maximal cones need to be listed; faces are closed at parse time. An
empty `cone:` line is the zero cone.
"""

import re
from typing import List, Optional

from pydantic import BaseModel, Field, ValidationError, model_validator

from core.fans import build_fan, ensure_valid_fan
from models.fan import Fan
from services.base_service import BaseDocumentCodec
from utils.exceptions import DocumentParseError

RAY_KEY = re.compile(r"^ray\s+(\d+)$")


class FanDocument(BaseModel):
    """Schema of a fan document"""

    name: Optional[str] = None
    rank: int = Field(ge=0)
    rays: List[List[int]] = Field(default_factory=list)
    cones: List[List[int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_indices(self) -> "FanDocument":
        for i, ray in enumerate(self.rays):
            if len(ray) != self.rank:
                raise ValueError(f"ray {i} has {len(ray)} coordinates, rank is {self.rank}")
        for cone in self.cones:
            if len(set(cone)) != len(cone):
                raise ValueError(f"cone {cone} repeats a ray")
            for i in cone:
                if i < 0 or i >= len(self.rays):
                    raise ValueError(f"cone {cone} references missing ray {i}")
        return self

    def to_fan(self) -> Fan:
        """Face-closed fan, not yet validated"""
        return build_fan(self.rank, self.rays, self.cones, self.name)

    @classmethod
    def from_fan(cls, f: Fan, name: Optional[str] = None) -> "FanDocument":
        """Document listing the maximal cones of a fan"""
        return cls(
            name=name if name is not None else f.name,
            rank=f.rank,
            rays=[list(r) for r in f.rays],
            cones=[list(c.ray_indices) for c in f.maximal_cones()],
        )


class FanDocumentCodec(BaseDocumentCodec[FanDocument]):
    """Parser and emitter for fan documents"""

    def parse(self, text: str) -> FanDocument:
        fields = self.parse_lines(list(self.content_lines(text)))
        try:
            return FanDocument(**fields)
        except ValidationError as exc:
            raise self.from_validation_error(exc)

    def parse_lines(self, lines) -> dict:
        """
        Collect fan fields from (line number, content) pairs

        Also used for fans written inline in fanifold documents.
        """
        fields = {"rays": [], "cones": []}
        for number, line in lines:
            key, value = self.split_key(line, number)
            lowered = key.lower()
            ray = RAY_KEY.match(lowered)
            if lowered == "name":
                fields["name"] = value or None
            elif lowered == "rank":
                ints = self.parse_ints(value, number, line)
                if len(ints) != 1:
                    raise DocumentParseError("rank takes one integer", number, len(key) + 2)
                fields["rank"] = ints[0]
            elif ray:
                index = int(ray.group(1))
                if index != len(fields["rays"]):
                    raise DocumentParseError(
                        f"ray {index} out of order, expected ray {len(fields['rays'])}", number, 1
                    )
                fields["rays"].append(self.parse_ints(value, number, line))
            elif lowered == "cone":
                fields["cones"].append(self.parse_ints(value, number, line))
            else:
                raise DocumentParseError(f"unknown key '{key}'", number, 1)
        if "rank" not in fields:
            first = lines[0][0] if lines else None
            raise DocumentParseError("missing 'rank:' line", first)
        return fields

    def emit(self, document: FanDocument) -> str:
        lines = []
        if document.name:
            lines.append(f"name: {document.name}")
        lines.append(f"rank: {document.rank}")
        for i, ray in enumerate(document.rays):
            lines.append(f"ray {i}: " + " ".join(str(x) for x in ray))
        for cone in document.cones:
            lines.append(("cone: " + " ".join(str(i) for i in cone)).rstrip())
        return "\n".join(lines) + "\n"

    def load_fan(self, path, validate: bool = True) -> Fan:
        """
        Load a fan from a document file

        Raises:
            DocumentParseError: If the document is malformed
            FanValidationError: If validate is set and the fan breaks an axiom
        """
        fan = self.load(path).to_fan()
        return ensure_valid_fan(fan) if validate else fan


def parse_fan(text: str, validate: bool = True) -> FanDocument:
    """
    Parse a fan document and check the fan axioms

    Raises:
        DocumentParseError: If the text is malformed
        FanValidationError: If validate is set and the fan breaks an axiom;
            the violations name the offending rays and cones
    """
    document = FanDocumentCodec().parse(text)
    if validate:
        ensure_valid_fan(document.to_fan())
    return document


def emit_fan(document: FanDocument) -> str:
    return FanDocumentCodec().emit(document)

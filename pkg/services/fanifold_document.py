"""
Fanifold documents

    name: vertex_on_line
    dim: 1
    closed: false
    stratum P: dim 0
    fan: p1.fan
    stratum A: dim 1
    rank: 0
    cone:
    arrow P -> A: cone 0 ; projection

A stratum's fan is either a `fan: <path>` reference (relative to the
document) or an inline block of `rank:`, `ray <i>:` and `cone:` lines directly
under the stratum header. Arrow projections are rows separated by `|`; an
empty projection means a rank-0 target, an omitted one is computed.
"""

import re
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, model_validator

from core.fans import DEFAULT_MAX_SEARCH_RANK, DEFAULT_MAX_SEARCH_RAYS, fan_isomorphic, quotient_fan
from core.lattice import integer_kernel
from models.fan import Cone
from models.fanifold import ExitArrow, Fanifold, Stratum
from models.lattice import QuotientMap, int_matrix, matrix_rows
from services.base_service import BaseDocumentCodec
from services.fan_document import FanDocument, FanDocumentCodec
from utils.exceptions import DocumentParseError, FanError

STRATUM_KEY = re.compile(r"^stratum\s+(\S+)$")
ARROW_KEY = re.compile(r"^arrow\s+(\S+)\s*->\s*(\S+)$")
TOKEN = re.compile(r"^[A-Za-z0-9_.\-]+$")


class StratumDocument(BaseModel):
    id: str
    dim: int = Field(ge=0)
    fan: FanDocument
    fan_path: Optional[str] = None
    line: Optional[int] = Field(default=None, exclude=True)


class ArrowDocument(BaseModel):
    source: str
    target: str
    cone: List[int]
    projection: Optional[List[List[int]]] = None
    line: Optional[int] = Field(default=None, exclude=True)


class FanifoldDocument(BaseModel):
    """Schema of a fanifold document"""

    name: Optional[str] = None
    dim: int = Field(ge=0)
    closed: bool = True
    strata: List[StratumDocument] = Field(default_factory=list)
    arrows: List[ArrowDocument] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_references(self) -> "FanifoldDocument":
        ids = [s.id for s in self.strata]
        if len(set(ids)) != len(ids):
            raise ValueError("stratum ids must be unique")
        keys = [(a.source, a.target) for a in self.arrows]
        if len(set(keys)) != len(keys):
            raise ValueError("at most one arrow per pair of strata")
        for a in self.arrows:
            for end in (a.source, a.target):
                if end not in ids:
                    raise ValueError(f"arrow {a.source} -> {a.target} references unknown stratum '{end}'")
        return self

    def to_fanifold(
        self,
        max_rank: int = DEFAULT_MAX_SEARCH_RANK,
        max_rays: int = DEFAULT_MAX_SEARCH_RAYS,
    ) -> Fanifold:
        """
        Build the fanifold

        A stratum is closed when no arrow enters it. Omitted projections are
        the canonical quotient followed by an isomorphism onto the target fan.

        Raises:
            DocumentParseError: If an arrow's cone is not in its source fan or no
                projection can be computed for it
        """
        fans = {s.id: s.fan.to_fan() for s in self.strata}
        entered = {a.target for a in self.arrows}
        strata = {
            s.id: Stratum(
                id=s.id,
                dim=s.dim,
                lattice_rank=fans[s.id].rank,
                normal_fan=fans[s.id],
                is_closed=s.id not in entered,
            )
            for s in self.strata
        }
        arrows = {}
        for doc in self.arrows:
            arrow = self._build_arrow(doc, fans, max_rank, max_rays)
            arrows[arrow.key] = arrow
        return Fanifold(dim=self.dim, strata=strata, arrows=arrows, closed=self.closed, name=self.name)

    @staticmethod
    def _build_arrow(doc: ArrowDocument, fans, max_rank: int, max_rays: int) -> ExitArrow:
        source = fans[doc.source]
        cone = Cone.of(doc.cone)
        if cone not in source.cones:
            raise DocumentParseError(f"cone {list(doc.cone)} is not a cone of stratum {doc.source}", doc.line)

        if doc.projection is not None:
            for row in doc.projection:
                if len(row) != source.rank:
                    raise DocumentParseError(
                        f"projection row {row} of arrow {doc.source} -> {doc.target} needs {source.rank} entries",
                        doc.line,
                    )
            projection = int_matrix(doc.projection, source.rank)
            lattice_map = QuotientMap(
                source_rank=source.rank,
                kernel_basis=integer_kernel(projection),
                projection=projection,
                target_rank=len(doc.projection),
            )
            return ExitArrow(doc.source, doc.target, cone, lattice_map)

        qf = quotient_fan(source, cone)
        try:
            iso = fan_isomorphic(qf.g, fans[doc.target], max_rank=max_rank, max_rays=max_rays)
        except FanError as exc:
            raise DocumentParseError(f"arrow {doc.source} -> {doc.target}: {exc}", doc.line)
        if iso is None:
            raise DocumentParseError(
                f"arrow {doc.source} -> {doc.target}: quotient fan is not isomorphic to the fan of {doc.target}",
                doc.line,
            )
        if qf.q.target_rank == 0:
            projection = qf.q.projection
        else:
            projection = iso.lattice_iso * qf.q.projection
        lattice_map = QuotientMap(
            source_rank=source.rank,
            kernel_basis=qf.q.kernel_basis,
            projection=int_matrix(matrix_rows(projection), source.rank),
            target_rank=qf.q.target_rank,
        )
        return ExitArrow(doc.source, doc.target, cone, lattice_map)

    @classmethod
    def from_fanifold(cls, F: Fanifold) -> "FanifoldDocument":
        """Document with inline fans and explicit projections"""
        return cls(
            name=F.name,
            dim=F.dim,
            closed=F.closed,
            strata=[
                StratumDocument(id=s.id, dim=s.dim, fan=FanDocument.from_fan(s.normal_fan).model_copy(update={"name": None}))
                for s in F.sorted_strata()
            ],
            arrows=[
                ArrowDocument(
                    source=a.source,
                    target=a.target,
                    cone=list(a.cone.ray_indices),
                    projection=matrix_rows(a.lattice_map.projection),
                )
                for a in F.sorted_arrows()
            ],
        )


class FanifoldDocumentCodec(BaseDocumentCodec[FanifoldDocument]):
    """Parser and emitter for fanifold documents"""

    def __init__(self, base_dir=None):
        super().__init__(base_dir)
        self.fan_codec = FanDocumentCodec(base_dir)

    def parse(self, text: str) -> FanifoldDocument:
        header = {}
        strata: List[dict] = []
        arrows: List[dict] = []
        block: Optional[Tuple[dict, List[Tuple[int, str]]]] = None

        def close_block() -> None:
            if block is None:
                return
            stratum, lines = block
            if "fan" in stratum:
                if lines:
                    raise DocumentParseError("stratum has both 'fan:' and inline fan lines", lines[0][0])
                return
            if not lines:
                raise DocumentParseError(f"stratum {stratum['id']} has no fan", stratum["line"])
            try:
                stratum["fan"] = FanDocument(**self.fan_codec.parse_lines(lines))
            except ValidationError as exc:
                raise self.from_validation_error(exc, lines[0][0])

        for number, line in self.content_lines(text):
            key, value = self.split_key(line, number)
            lowered = key.lower()
            stratum_match = STRATUM_KEY.match(key)
            arrow_match = ARROW_KEY.match(key)

            if stratum_match:
                close_block()
                stratum = self._parse_stratum_header(stratum_match.group(1), value, number, line)
                strata.append(stratum)
                block = (stratum, [])
            elif arrow_match:
                close_block()
                block = None
                arrows.append(self._parse_arrow(arrow_match.group(1), arrow_match.group(2), value, number, line))
            elif block is not None and lowered == "fan":
                block[0]["fan_path"] = value
                block[0]["fan"] = self._load_fan(value, number)
            elif block is not None and (lowered in ("rank", "cone", "name") or lowered.startswith("ray")):
                block[1].append((number, line))
            elif lowered == "name":
                header["name"] = value or None
            elif lowered == "dim":
                ints = self.parse_ints(value, number, line)
                if len(ints) != 1:
                    raise DocumentParseError("dim takes one integer", number, len(key) + 2)
                header["dim"] = ints[0]
            elif lowered == "closed":
                if value.lower() not in ("true", "false"):
                    raise DocumentParseError("closed must be true or false", number, len(key) + 2)
                header["closed"] = value.lower() == "true"
            else:
                raise DocumentParseError(f"unknown key '{key}'", number, 1)
        close_block()

        if "dim" not in header:
            raise DocumentParseError("missing 'dim:' line")
        try:
            return FanifoldDocument(**header, strata=strata, arrows=arrows)
        except ValidationError as exc:
            raise self.from_validation_error(exc)

    @staticmethod
    def _parse_stratum_header(stratum_id: str, value: str, number: int, line: str) -> dict:
        if not TOKEN.match(stratum_id):
            raise DocumentParseError(f"bad stratum id '{stratum_id}'", number, line.find(stratum_id) + 1)
        parts = value.split()
        if len(parts) != 2 or parts[0].lower() != "dim":
            raise DocumentParseError("expected 'stratum <id>: dim <k>'", number, line.find(":") + 2)
        dims = BaseDocumentCodec.parse_ints(parts[1], number, line)
        return {"id": stratum_id, "dim": dims[0], "line": number}

    def _parse_arrow(self, source: str, target: str, value: str, number: int, line: str) -> dict:
        cone_part, sep, projection_part = value.partition(";")
        tokens = cone_part.split()
        if not tokens or tokens[0].lower() != "cone":
            raise DocumentParseError("expected 'arrow <a> -> <b>: cone <indices>'", number, line.find(":") + 2)
        arrow = {
            "source": source,
            "target": target,
            "cone": self.parse_ints(" ".join(tokens[1:]), number, line),
            "line": number,
        }
        if sep:
            projection_tokens = projection_part.strip()
            if not projection_tokens.lower().startswith("projection"):
                raise DocumentParseError("expected '; projection <rows>'", number, line.find(";") + 2)
            body = projection_tokens[len("projection"):].strip()
            arrow["projection"] = (
                [self.parse_ints(row, number, line) for row in body.split("|")] if body else []
            )
        return arrow

    def _load_fan(self, reference: str, number: int) -> FanDocument:
        path = self.base_dir / reference
        try:
            return self.fan_codec.load(path)
        except DocumentParseError as exc:
            raise DocumentParseError(f"in {reference}: {exc}", number)

    def emit(self, document: FanifoldDocument) -> str:
        lines = []
        if document.name:
            lines.append(f"name: {document.name}")
        lines.append(f"dim: {document.dim}")
        lines.append(f"closed: {'true' if document.closed else 'false'}")
        for stratum in document.strata:
            lines.append(f"stratum {stratum.id}: dim {stratum.dim}")
            if stratum.fan_path:
                lines.append(f"fan: {stratum.fan_path}")
            else:
                lines.extend(self.fan_codec.emit(stratum.fan).rstrip("\n").split("\n"))
        for arrow in document.arrows:
            text = f"arrow {arrow.source} -> {arrow.target}: cone " + " ".join(str(i) for i in arrow.cone)
            if arrow.projection is not None:
                rows = " | ".join(" ".join(str(x) for x in row) for row in arrow.projection)
                text = (text.rstrip() + " ; projection " + rows).rstrip()
            lines.append(text.rstrip())
        return "\n".join(lines) + "\n"

    def load_fanifold(self, path, max_rank: int = DEFAULT_MAX_SEARCH_RANK, max_rays: int = DEFAULT_MAX_SEARCH_RAYS) -> Fanifold:
        return self.load(path).to_fanifold(max_rank, max_rays)

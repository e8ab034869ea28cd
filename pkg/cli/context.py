"""
Shared state and input helpers for CLI commands
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from config import config
from core.fanifold import sphere_fanifold
from models.fan import Cone, Fan
from models.fanifold import Fanifold
from models.report import Report
from services.fan_document import FanDocumentCodec
from services.fanifold_document import FanifoldDocumentCodec
from utils.exceptions import ConeNotInFanError, DocumentError

FAN_SUFFIX = ".fan"


class UsageError(DocumentError):
    """Command arguments do not fit the input"""
    pass


@dataclass
class CommandContext:
    """Per-invocation settings, config values overridden by flags"""

    command: str
    output_format: str = "text"
    jobs: int = 1
    max_rank: int = 4
    max_rays: int = 64


@dataclass
class CommandResult:
    """
    What a command hands back to the dispatcher

    `text` replaces the report rendering in text mode (documents, DOT); the
    report is what `--format json` prints.
    """

    report: Report
    text: Optional[str] = None

    @property
    def exit_code(self) -> int:
        return 0 if self.report.passed else 1


def resolve_input(path: str) -> Path:
    """
    Locate an input file, falling back to the corpus directory

    Raises:
        DocumentError: If neither location holds the file
    """
    candidate = Path(path)
    if candidate.exists():
        return candidate
    fallback = config.get_corpus_dir() / path
    if fallback.exists():
        return fallback
    raise DocumentError(f"No such file: {path}")


def load_fan_input(path: str, validate: bool = True) -> Fan:
    return FanDocumentCodec().load_fan(resolve_input(path), validate=validate)


def load_fanifold_input(path: str, ctx: CommandContext) -> Fanifold:
    """A fanifold document, or the sphere fanifold of a complete fan document"""
    resolved = resolve_input(path)
    if resolved.suffix == FAN_SUFFIX:
        return sphere_fanifold(FanDocumentCodec().load_fan(resolved))
    return FanifoldDocumentCodec().load_fanifold(resolved, ctx.max_rank, ctx.max_rays)


def require_cone(f: Fan, indices) -> Cone:
    """
    The cone with the given ray indices

    Raises:
        UsageError: If the fan has no such cone
    """
    try:
        return f.require(Cone.of(indices))
    except ConeNotInFanError as exc:
        raise UsageError(str(exc))


AXIOM_CLAUSES = {
    "bad_rank": "rays",
    "bad_ray_length": "rays",
    "zero_ray": "rays",
    "non_primitive_ray": "rays",
    "duplicate_ray": "rays",
    "missing_face": "faces",
    "bad_index": "faces",
    "dependent_rays": "simplicial",
    "unused_ray": "ray_usage",
    "intersection": "intersection",
}


def violation_report(command: str, violations, body: Optional[dict] = None) -> Report:
    """One clause per fan axiom, failing clauses list the violations as witnesses"""
    report = Report(command=command, body=dict(body or {}))
    for clause in dict.fromkeys(AXIOM_CLAUSES.values()):
        witnesses = [str(v) for v in violations if AXIOM_CLAUSES.get(v.kind) == clause]
        report.add_witnessed(clause, witnesses)
    report.body["violations"] = [v.to_dict() for v in violations]
    return report

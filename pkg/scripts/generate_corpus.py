#!/usr/bin/env python3
"""
Regenerate the fan corpus

This script writes:
- One document per standard fan (p1, p2, p1xp1, f1, a2, a3, p3)
- The seeded random complete fans under data/corpus/random/
- The sphere fanifold of every complete standard fan under data/corpus/spheres/

Hand-written documents (broken.fan, duplicate_ray.fan, the corner and
vertex_on_line fanifolds) are left alone.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from config import config  # noqa: E402
from core.corpus import complete_standard_fans, random_complete_fans, standard_fans  # noqa: E402
from core.fanifold import sphere_fanifold, validate_fanifold  # noqa: E402
from core.fans import ensure_valid_fan  # noqa: E402
from services.fan_document import FanDocument, FanDocumentCodec  # noqa: E402
from services.fanifold_document import FanifoldDocument, FanifoldDocumentCodec  # noqa: E402
from utils.logger import setup_logger  # noqa: E402


def write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    print(f"✓ {path}")


def generate_corpus(corpus_dir: Path, count: int, seed: int, spheres: bool) -> int:
    """Write the corpus, returning the number of files written"""
    fan_codec = FanDocumentCodec()
    written = 0

    for name, fan in standard_fans().items():
        write(corpus_dir / f"{name}.fan", fan_codec.emit(FanDocument.from_fan(ensure_valid_fan(fan))))
        written += 1

    for fan in random_complete_fans(count, seed):
        write(corpus_dir / "random" / f"{fan.name}.fan", fan_codec.emit(FanDocument.from_fan(ensure_valid_fan(fan))))
        written += 1

    if spheres:
        fanifold_codec = FanifoldDocumentCodec()
        for fan in complete_standard_fans():
            F = sphere_fanifold(fan)
            report = validate_fanifold(F)
            if not report.passed:
                print(f"✗ sphere of {fan.name} failed validation, skipped")
                print(report.to_text())
                continue
            write(corpus_dir / "spheres" / f"sphere_{fan.name}.fanifold", fanifold_codec.emit(FanifoldDocument.from_fanifold(F)))
            written += 1

    return written


def main():
    parser = argparse.ArgumentParser(description="Regenerate the fan corpus")
    parser.add_argument("--dir", type=Path, default=config.get_corpus_dir(), help="Corpus directory")
    parser.add_argument("--count", type=int, default=config.random_fan_count, help="Number of random fans")
    parser.add_argument("--seed", type=int, default=config.random_seed, help="Random seed")
    parser.add_argument("--no-spheres", action="store_true", help="Skip the sphere fanifold documents")
    args = parser.parse_args()

    setup_logger(log_level=config.log_level, to_file=False)

    print("=" * 60)
    print("Fanifold-speil - Korpusgenerering")
    print("=" * 60)
    print()
    written = generate_corpus(args.dir, args.count, args.seed, not args.no_spheres)
    print()
    print(f"{written} filer skrevet til {args.dir}")


if __name__ == "__main__":
    main()

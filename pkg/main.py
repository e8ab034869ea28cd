#!/usr/bin/env python3
"""
Fanifold-speil - Main Entry Point

Kombinatorisk motor for vifter (fans), FLTZ-skjeletter, fanifolder og
deres toriske speil. Alle sjekker er eksakte (heltallsaritmetikk).

Usage:
    python main.py <gruppe> <kommando> [valg] <fil>

Eksempler:
    python main.py fan check p2.fan
    python main.py fan quotient --cone 0 p2.fan
    python main.py --format json mirror verify p2.fan

Configuration:
    Se .env.example for konfigurasjonsmuligheter
    Kopier .env.example til .env og tilpass verdiene

Exit-koder:
    0 = alle sjekker bestått, 1 = en sjekk feilet, 2 = parse- eller bruksfeil
"""

import sys
from pathlib import Path

# Ensure we can import from project root
sys.path.insert(0, str(Path(__file__).parent))


def check_python_version():
    """Ensure Python version is 3.9 or higher"""
    if sys.version_info < (3, 9):
        print("ERROR: Python 3.9 or higher is required", file=sys.stderr)
        print(f"Current version: {sys.version}", file=sys.stderr)
        sys.exit(2)


def check_dependencies():
    """Check if required dependencies are installed"""
    missing = []

    for module in ("pydantic", "pydantic_settings", "sympy", "networkx"):
        try:
            __import__(module)
        except ImportError:
            missing.append(module.replace("_", "-"))

    if missing:
        print("ERROR: Missing required dependencies:", file=sys.stderr)
        for dep in missing:
            print(f"  - {dep}", file=sys.stderr)
        print("\nInstall dependencies with:", file=sys.stderr)
        print("  pip install -r requirements.txt", file=sys.stderr)
        sys.exit(2)


def create_env_if_needed():
    """Create .env file from .env.example if it doesn't exist"""
    root = Path(__file__).parent
    env_file = root / ".env"
    env_example = root / ".env.example"

    if not env_file.exists() and env_example.exists():
        env_file.write_text(env_example.read_text())
        print("✓ .env file created from .env.example", file=sys.stderr)


def main():
    """Main entry point"""

    # Check requirements
    check_python_version()
    check_dependencies()
    create_env_if_needed()

    # Import here after dependency check
    from cli.app import main as run

    try:
        sys.exit(run(sys.argv[1:]))

    except KeyboardInterrupt:
        print("\n\nAvbrutt av bruker (Ctrl+C)", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    main()

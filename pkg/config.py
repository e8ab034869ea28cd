"""
Configuration for the fanifold mirror engine
Uses Pydantic Settings for type-safe config from environment variables
"""

from pydantic_settings import BaseSettings, SettingsConfigDict
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parent


class Settings(BaseSettings):
    """Application settings loaded from environment variables (prefix FANIFOLD_)"""

    # Logging
    log_level: str = "INFO"
    console_log_level: str = "WARNING"
    log_to_file: bool = True
    log_file: str = "data/logs/fanifold.log"

    # Input / output
    corpus_dir: str = "data/corpus"
    output_format: str = "text"  # text or json
    json_indent: int = 2

    # Checks
    jobs: int = 1  # Worker threads for independent checks
    iso_search_max_rank: int = 4
    iso_search_max_rays: int = 64

    # Random complete fans used by scripts/generate_corpus.py
    random_seed: int = 20240611
    random_fan_count: int = 25

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="FANIFOLD_",
        case_sensitive=False,
        extra="ignore"
    )

    def get_corpus_dir(self) -> Path:
        """Get the corpus directory path, relative paths resolve against the project root"""
        path = Path(self.corpus_dir)
        return path if path.is_absolute() else PROJECT_ROOT / path

    def get_log_dir(self) -> Path:
        """Get the logs directory path (the parent of log_file)"""
        path = Path(self.log_file).parent
        return path if path.is_absolute() else PROJECT_ROOT / path

    def get_log_file(self) -> Path:
        return self.get_log_dir() / Path(self.log_file).name

    def ensure_directories(self) -> None:
        """Ensure all required directories exist"""
        self.get_corpus_dir().mkdir(parents=True, exist_ok=True)
        if self.log_to_file:
            self.get_log_dir().mkdir(parents=True, exist_ok=True)


# Global config instance
config = Settings()

import os
from enum import Enum

from dotenv import load_dotenv
from pydantic import BaseModel, Field

# Load environment variables
load_dotenv()


def _int_env(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got '{value}'")


class Settings:
    def __init__(self):
        # Core settings with safe defaults
        self.environment = os.getenv("ENVIRONMENT", "development")
        self.log_level = os.getenv("LOG_LEVEL", "WARNING").upper()

        # Enumeration defaults
        self.jobs = _int_env("SIGNBAL_JOBS", os.cpu_count() or 1)
        self.seed = _int_env("SIGNBAL_SEED", 20240229)
        self.max_degree = _int_env("SIGNBAL_MAX_DEGREE", 8)


class OutputFormat(str, Enum):
    JSON = "json"
    TABLE = "table"


class CliConfig(BaseModel):
    """Per-invocation options: environment defaults overridden by flags"""

    jobs: int = Field(..., ge=1, description="Worker processes for enumeration")
    output: OutputFormat = Field(OutputFormat.JSON, description="json (machine) or table (display only)")
    seed: int = Field(..., description="Seed for randomized suites")
    max_degree: int = Field(..., ge=0, description="Series truncation cap K")
    timings: bool = Field(False, description="Fill elapsed_ms in reports")

    @classmethod
    def build(cls, **overrides) -> "CliConfig":
        values = {"jobs": settings.jobs, "seed": settings.seed, "max_degree": settings.max_degree}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


# Create global settings instance
settings = Settings()

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    PROJECT_NAME: str = "ndn-approx-sim"

    # ============================================================================
    # Logging
    # ============================================================================
    LOG_LEVEL: str = Field(default="INFO", description="Root log level")
    LOG_DIR: str = Field(default="logs", description="Directory of rotating log files")
    LOG_TO_FILE: bool = Field(default=False, description="Also log to LOG_DIR/app.log")

    # ============================================================================
    # Runs and output
    # ============================================================================
    OUTPUT_DIR: str = Field(default="results", description="Default CSV output directory")
    SCENARIO_DIR: str = Field(default="config/scenarios", description="Bundled scenarios, relative to backend/")
    DEFAULT_SEED: int = Field(default=0, description="Seed when --seed is not given")
    SWEEP_WORKERS: int = Field(default=1, ge=1, description="Worker processes for sweeps; 1 runs inline")

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        extra = "allow"  # Allow extra fields from .env file


settings = Settings()

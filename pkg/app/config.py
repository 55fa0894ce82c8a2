from pydantic_settings import BaseSettings
from typing import List, Optional
import os
from functools import lru_cache
from dotenv import load_dotenv

load_dotenv()


class Settings(BaseSettings):
    PROJECT_NAME: str = "Complementary Preference Resolver"
    API_VERSION: str = "1.0.0"
    API_V1_STR: str = "/api/v1"

    ENVIRONMENT: str = os.getenv("ENVIRONMENT", "development")

    # Preference interaction
    GARDEN_PATH_THRESHOLD: int = 2
    ACCOMMODATED_PERSON_COUNT: int = 1

    # Oracles and property suites
    ORACLE_MAX_CARRIER: int = 5
    ORACLE_MAX_CANDIDATES: int = 4
    PROPERTY_CASES: int = 10_000

    # Rules loaded when a caller gives none
    DEFAULT_RULES_FILE: Optional[str] = os.getenv("DEFAULT_RULES_FILE")

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE: str = os.getenv("LOG_FILE", "discourse_service.log")

    # CORS
    BACKEND_CORS_ORIGINS: List[str] = [
        "*",
        "http://localhost",
        "http://localhost:8080",
    ]

    class Config:
        env_file = ".env"
        extra = "allow"


@lru_cache()
def get_settings():
    return Settings()


settings = get_settings()

"""Configuration management using environment variables.

Environment Variables:
    # Logging & Development
    LOG_LEVEL: Logging level (default: INFO)
    LOG_JSON: Use JSON logging (default: true)
    DEBUG: Enable debug mode (default: false)

    # Exhaustive scans
    JOBS: Worker processes for mask-range scans (default: 1)
    CHUNK_SIZE: Edge masks diagonalized per numpy batch (default: 16384)
    ENUMERATION_CAP: Largest order scanned without ALLOW_N8 (default: 7)
    ALLOW_N8: Permit the 2^28-graph scans at n = 8 (default: false)
                Needs several cores and a long wall clock; keep off for CI

    # Numerics
    JACOBI_TOL: Relative off-diagonal Frobenius target (default: 1e-12)
    JACOBI_MAX_SWEEPS: Sweep budget before a numeric failure (default: 50)
    VALUE_TOL: Absolute tolerance for ties with the best value (default: 1e-9)
    TOGGLE_TOL: Smallest score counted as an improving move (default: 1e-12)
    DEFAULT_EPSILON: Threshold constant of the S/T/L partition (default: 0.1)

    # Graphons
    CUT_NORM_EXACT_CAP: Largest block count solved by subset enumeration (default: 24)
    CUT_NORM_STARTS: Seeded starts of the alternating heuristic (default: 32)
    MAX_ALIGNMENTS: Block permutations tried by the cut-distance bound (default: 40320)

    # API Configuration
    API_PORT: Server port (default: 8001)
"""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Logging
    log_level: str = "INFO"
    log_json: bool = True

    # Exhaustive scans
    jobs: int = 1
    chunk_size: int = 16384
    enumeration_cap: int = 7
    allow_n8: bool = False

    # Numerics
    jacobi_tol: float = 1e-12
    jacobi_max_sweeps: int = 50
    value_tol: float = 1e-9
    toggle_tol: float = 1e-12
    default_epsilon: float = 0.1

    # Graphons
    cut_norm_exact_cap: int = 24
    cut_norm_starts: int = 32
    max_alignments: int = 40320

    # API Configuration
    api_port: int = 8001

    # Development
    debug: bool = False

    @property
    def scan_cap(self) -> int:
        """Largest order an exhaustive scan accepts under the current flags."""
        return 8 if self.allow_n8 else self.enumeration_cap


# Create global settings instance
settings = Settings()

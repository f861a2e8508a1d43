"""
Configuration Settings for funtf-potential
Centralized solver tolerances, budgets and seeds using Pydantic Settings
"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Library settings loaded from FUNTF_* environment variables and .env files.
    Every public operation accepts keyword overrides; None falls back to these.
    """

    model_config = SettingsConfigDict(
        env_prefix="FUNTF_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = "INFO"
    log_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    log_file: str | None = None

    # Tolerances
    classify_tol: float = Field(default=1e-8, gt=0)
    normalization_tol: float = Field(default=1e-9, gt=0)
    admissibility_tol: float = Field(default=1e-10, gt=0)
    regularization: float = Field(default=1e-12, gt=0)

    # 2-summing norm solver
    pi2_tol: float = Field(default=1e-6, gt=0)
    pi2_max_iters: int = Field(default=500, ge=1)
    pi2_rounds: int = Field(default=4, ge=1)
    pi2_restarts: int = Field(default=8, ge=1)
    pi2_ascent_iters: int = Field(default=200, ge=1)
    pi2_relative_gap: float = Field(default=1e-10, gt=0)

    # Dual ball sampling
    dual_sample_budget: int = Field(default=64, ge=1)
    phase_count: int = Field(default=16, ge=2)

    # Auerbach bases
    auerbach_starts: int = Field(default=32, ge=1)
    auerbach_max_sweeps: int = Field(default=200, ge=1)

    # Erasures
    operator_norm_restarts: int = Field(default=64, ge=1)
    erasure_subset_cap: int = Field(default=1_000_000, ge=1)

    # FUNTF search
    search_max_iters: int = Field(default=200, ge=1)
    search_restarts: int = Field(default=16, ge=1)
    search_success_residual: float = Field(default=1e-10, gt=0)

    # Reproducibility and parallelism
    seed: int = 0
    threads: int = Field(default=1, ge=1)


class SolverConfig:
    """
    Grouped views of the solver settings
    """

    def __init__(self, settings: Settings):
        self.settings = settings

    @property
    def pi2_config(self) -> dict:
        """Configuration for the 2-summing norm bounds"""
        return {
            "tol": self.settings.pi2_tol,
            "max_iters": self.settings.pi2_max_iters,
            "rounds": self.settings.pi2_rounds,
            "restarts": self.settings.pi2_restarts,
            "ascent_iters": self.settings.pi2_ascent_iters,
            "relative_gap": self.settings.pi2_relative_gap,
            "regularization": self.settings.regularization,
            "admissibility_tol": self.settings.admissibility_tol,
        }

    @property
    def erasure_config(self) -> dict:
        """Configuration for operator norms and erasure enumeration"""
        return {
            "restarts": self.settings.operator_norm_restarts,
            "subset_cap": self.settings.erasure_subset_cap,
            "threads": self.settings.threads,
        }


class SearchConfig:
    """
    Configuration specifically for the numerical FUNTF search
    """

    def __init__(self, settings: Settings):
        self.settings = settings

    @property
    def search_config(self) -> dict:
        """Iteration and restart limits for search_funtf"""
        return {
            "max_iters": self.settings.search_max_iters,
            "restarts": self.settings.search_restarts,
            "success_residual": self.settings.search_success_residual,
            "seed": self.settings.seed,
        }

    @property
    def auerbach_config(self) -> dict:
        """Multi-start limits for determinant maximization"""
        return {
            "starts": self.settings.auerbach_starts,
            "max_sweeps": self.settings.auerbach_max_sweeps,
            "seed": self.settings.seed,
        }


# Global settings instance
settings = Settings()

# Convenience instances
solver_config = SolverConfig(settings)
search_config = SearchConfig(settings)

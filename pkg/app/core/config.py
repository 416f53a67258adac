"""
Configuration management for the quantum walk diffusion backend.
"""
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Environment
    environment: str = "development"

    # FastAPI Configuration (Optional)
    host: str = "0.0.0.0"
    port: int = 8000

    # Walk defaults
    default_steps: int = 15
    default_num_k: int = 1024
    alpha_count: int = 201  # α resolution over [-π, π)

    # Numerical tolerances
    gap_tol: float = 1e-6
    pt_tol: float = 1e-6  # relative modulus split
    pt_snap_window: float = 0.2  # rad around {0, π}
    winding_residual_max: float = 0.01
    boundary_margin: float = 0.05  # rad around transition lines
    surviving_norm_floor: float = 1e-24  # lossy norms below this are rounding noise

    # Sweep execution
    sweep_max_workers: int = 4
    api_max_sweep_rows: int = 5000
    api_max_steps: int = 500

    class Config:
        env_file = ".env"
        env_prefix = "QWALK_"
        case_sensitive = False


settings = Settings()

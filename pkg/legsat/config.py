from functools import lru_cache
from pydantic import BaseSettings, PositiveInt, PositiveFloat, NonNegativeInt, constr


class Settings(BaseSettings):
    """
    Runtime configuration, read from environment variables prefixed with
    ``LEGSAT_`` (e.g. ``LEGSAT_LOG_LEVEL=DEBUG``).

    Parameters
    ----------
    log_level : str, default="WARNING"
        Level of the root logger configured by the command line.
    perturb_steps : int, default=10
        Number of moves applied by ``perturb`` when no ``--steps`` is given.
    seed : int, default=0
        Seed used by ``perturb`` and the randomized checks of ``verify``.
    svg_scale : float, default=24.0
        Pixels per column / level unit in rendered SVG fronts.
    max_rounds : int, default=100000
        Upper bound on propagation rounds of a bound graph.
    verify_workers : int, default=4
        Threads used by ``verify`` to run independent checks.
    random_cases : int, default=200
        Randomized (pattern, companion) pairs checked against the
        composition laws.
    move_cases : int, default=1000
        Randomized (word, site) pairs checked for move invariance.
    """
    log_level: constr(regex="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$") = "WARNING"
    perturb_steps: NonNegativeInt = 10
    seed: NonNegativeInt = 0
    svg_scale: PositiveFloat = 24.0
    max_rounds: PositiveInt = 100000
    verify_workers: PositiveInt = 4
    random_cases: NonNegativeInt = 200
    move_cases: NonNegativeInt = 1000

    class Config:
        env_prefix = "LEGSAT_"


@lru_cache()
def get_settings() -> Settings:
    "Return the process-wide settings instance."
    return Settings()

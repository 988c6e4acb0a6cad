from pathlib import Path

from pydantic_settings import BaseSettings


class FreqallocSettings(BaseSettings):
    MAX_WORKERS: int = 4
    OUTPUT_DIR: str = "runs"
    DEFAULT_SEED: int = 0
    DESK_PROFILE: Path = Path("configs/desk.cfg")

    ZF_CONDITION_LIMIT: float = 1e12
    EVAL_CACHE_SIZE: int = 20000

    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s %(name)-36s %(levelname)-8s %(message)s"
    LOG_RICH: bool = True

    model_config = {"env_file": ".env", "case_sensitive": True, "extra": "ignore"}


freqalloc_settings = FreqallocSettings()

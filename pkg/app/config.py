from utils.logging_config import get_logger

logger = get_logger(__name__)

from pydantic_settings import BaseSettings
from pydantic import ConfigDict


class Settings(BaseSettings):
    model_config = ConfigDict(env_file=".env", extra="allow")

    PROJECT_NAME: str = "revmap"

    # 稠密置换的点数上限（pⁿ 或 N），超过则拒绝构建
    REVMAP_CAP_POINTS: int = 20_000_000
    # 穷举 E(g,h,N) 时 N 的上限
    REVMAP_ENUM_CAP: int = 10
    # Monte Carlo 的 N·trials 上限
    REVMAP_WORK_CAP: int = 2_000_000_000
    # 对称线种子搜索允许的最大周期
    REVMAP_PERIOD_LIMIT: int = 64
    # repeats 命令中用精确有理数计算 μ(t,i) 的最大 N
    REVMAP_EXACT_MU_MAX_N: int = 400
    # 每个 worker 任务处理的试验数
    REVMAP_TRIAL_BATCH: int = 64

    # 分布式试验（--backend celery）
    CELERY_BROKER_URL: str = "redis://localhost:6379/0"
    CELERY_RESULT_BACKEND: str = "redis://localhost:6379/0"

    LOG_LEVEL: str = "WARNING"
    LOG_FILE: str = ""


try:
    settings = Settings()
    logger.debug(f"配置加载成功 - {settings.PROJECT_NAME}")
    logger.debug(
        f"上限: points={settings.REVMAP_CAP_POINTS}, enum N≤{settings.REVMAP_ENUM_CAP}, "
        f"work={settings.REVMAP_WORK_CAP}, period≤{settings.REVMAP_PERIOD_LIMIT}"
    )
except Exception as e:
    logger.error(f"配置加载失败: {e}")
    raise

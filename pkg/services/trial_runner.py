"""
试验与逐素数计算的扇出执行

本地后端用 ProcessPoolExecutor，分布式后端用 Celery；两者执行同一个
tasks.trial_tasks.run_job，结果按提交顺序合并，输出与 worker 数量无关。
"""

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Literal, Optional, Sequence

from app.config import settings
from core.errors import ParameterError, RevmapError
from core.stats import TrialResult, check_work_cap
from core.theory import TheoryParams
from tasks.trial_tasks import run_job
from utils.logging_config import get_logger

logger = get_logger(__name__)

Backend = Literal["local", "celery"]


class TrialRunner:
    """按批次扇出独立任务"""

    def __init__(self, workers: Optional[int] = None, backend: Backend = "local"):
        self.configure(workers, backend)

    def configure(self, workers: Optional[int] = None, backend: Backend = "local") -> None:
        if workers is not None and workers < 1:
            raise ParameterError(f"workers 必须为正整数: {workers}")
        if backend not in ("local", "celery"):
            raise ParameterError(f"未知后端: {backend}")
        self.workers = workers or os.cpu_count() or 1
        self.backend = backend

    def map_jobs(self, kind: str, jobs: Sequence[Dict[str, Any]]) -> List[Any]:
        """执行一组同类任务，返回值按 jobs 的顺序排列"""
        if not jobs:
            return []
        if self.backend == "celery":
            return self._map_celery(kind, jobs)
        if self.workers == 1 or len(jobs) == 1:
            return [run_job(kind, job) for job in jobs]
        with ProcessPoolExecutor(max_workers=min(self.workers, len(jobs))) as pool:
            futures = [pool.submit(run_job, kind, job) for job in jobs]
            return [future.result() for future in futures]

    def _map_celery(self, kind: str, jobs: Sequence[Dict[str, Any]]) -> List[Any]:
        from celery import group
        from tasks.celery_app import celery_app  # noqa: F401  注册 broker 配置
        from tasks.trial_tasks import run_job_task

        logger.info(f"[trial_runner] 提交 {len(jobs)} 个 {kind} 任务到 Celery（{settings.CELERY_BROKER_URL}）")
        try:
            return group(run_job_task.s(kind, job) for job in jobs).apply_async().get()
        except RevmapError:
            raise
        except Exception as e:
            logger.error(f"[trial_runner] Celery 任务失败: {e}")
            raise RevmapError(f"Celery 后端执行失败: {e}") from e

    def run_trials(self, params: TheoryParams, trials: int, master_seed: int) -> List[TrialResult]:
        """试验 0..trials-1，第 k 次只依赖 (master_seed, k)"""
        if trials < 1:
            raise ParameterError(f"trials 必须为正整数: {trials}")
        check_work_cap(params, trials)
        batch = max(1, settings.REVMAP_TRIAL_BATCH)
        jobs = [
            {
                "n": params.n,
                "g": params.g,
                "h": params.h,
                "master_seed": master_seed,
                "start": start,
                "count": min(batch, trials - start),
            }
            for start in range(0, trials, batch)
        ]
        logger.info(
            f"[trial_runner] 采样启动: N={params.n}, g={params.g}, h={params.h}, "
            f"{trials} 次试验, {len(jobs)} 个批次, 后端 {self.backend}, workers={self.workers}"
        )
        results = [
            TrialResult.model_validate(item)
            for batch_items in self.map_jobs("trial_batch", jobs)
            for item in batch_items
        ]
        logger.debug(f"[trial_runner] 采样完成: {len(results)} 次试验")
        return results


trial_runner = TrialRunner()

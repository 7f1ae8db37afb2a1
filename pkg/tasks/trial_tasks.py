"""
可分发的计算任务

每个任务都是 (kind, kwargs) → JSON 可序列化结果 的纯函数：
本地进程池直接调用 run_job，Celery worker 通过 run_job_task 调用同一个函数。
"""

from typing import Any, Callable, Dict, List

from celery import shared_task

from core.errors import ParameterError
from core.stats import run_trials
from core.theory import TheoryParams
from utils.logging_config import get_logger

logger = get_logger(__name__)


def trial_batch(n: int, g: int, h: int, master_seed: int, start: int, count: int) -> List[Dict[str, Any]]:
    """试验 start .. start+count-1"""
    params = TheoryParams(n=n, g=g, h=h)
    return [result.model_dump() for result in run_trials(params, count, master_seed, start)]


def phi5_prime(p: int) -> Dict[str, Any]:
    from services.prime_survey import phi5_prime_report
    return phi5_prime_report(p)


def henon_prime(p: int, a: int, t: int, full: bool) -> Dict[str, Any]:
    from services.prime_survey import henon_prime_report
    return henon_prime_report(p, a=a, t=t, full=full)


def map3d_prime(p: int, e: int, k: int) -> Dict[str, Any]:
    from services.prime_survey import map3d_prime_report
    return map3d_prime_report(p, e=e, k=k)


JOBS: Dict[str, Callable[..., Any]] = {
    "trial_batch": trial_batch,
    "phi5_prime": phi5_prime,
    "henon_prime": henon_prime,
    "map3d_prime": map3d_prime,
}


def run_job(kind: str, kwargs: Dict[str, Any]) -> Any:
    try:
        job = JOBS[kind]
    except KeyError:
        raise ParameterError(f"未知任务类型: {kind}") from None
    return job(**kwargs)


@shared_task(name="tasks.trial_tasks.run_job_task")
def run_job_task(kind: str, kwargs: Dict[str, Any]) -> Any:
    """供 Celery 调用的计算任务"""
    logger.info(f"[trial_tasks] 任务启动: {kind} {kwargs}")
    result = run_job(kind, kwargs)
    logger.debug(f"[trial_tasks] 任务完成: {kind}")
    return result

"""
Celery 应用：把试验批次和逐素数的映射分析分发到 worker

只传 JSON：任务参数是 (N, g, h, seed, 批次大小) 这类整数，结果是计数字典。
"""

from celery import Celery

from app.config import settings

celery_app = Celery(
    "revmap_tasks",
    broker=settings.CELERY_BROKER_URL,
    backend=settings.CELERY_RESULT_BACKEND,
    include=["tasks.trial_tasks"],
)

celery_app.conf.update(
    task_serializer="json",
    result_serializer="json",
    accept_content=["json"],
    enable_utc=True,
    # 批次都是长任务
    worker_prefetch_multiplier=1,
    task_acks_late=True,
    task_track_started=True,
    result_expires=6 * 3600,
    worker_hijack_root_logger=False,
    worker_redirect_stdouts_level=settings.LOG_LEVEL,
)

"""
revmap 日志配置

格式沿用“按内容选符号”的写法：枚举、采样、素数域、多项式、并行任务等
各有自己的符号，长时间的 Monte Carlo 运行里方便扫读。
所有日志写到 stderr，stdout 只留给 CSV/JSON 结果。
"""

import logging
import logging.handlers
import os
import re
import sys
from typing import Optional, Pattern, Sequence, Tuple

# (正则, 符号)，按顺序匹配
_SYMBOL_RULES: Sequence[Tuple[Pattern[str], str]] = tuple(
    (re.compile(pattern, re.IGNORECASE), symbol)
    for pattern, symbol in (
        (r"失败|错误|error|fail|拒绝|refuse", "❌"),
        (r"通过|成功|完成|pass|success|done", "✅"),
        (r"启动|开始|start", "🚀"),
        (r"配置|config", "🔧"),
        (r"枚举|enumerat", "🧮"),
        (r"采样|sample|trial|试验", "🎲"),
        (r"素数|prime|域|field", "🔢"),
        (r"多项式|poly|根|root", "📐"),
        (r"映射|henon|map3d", "🗺️"),
        (r"任务|task|worker|celery|批次", "⚙️"),
        (r"文件|写入|输出", "📁"),
        (r"检查|check|验证", "🔍"),
        (r"上限|cap|limit", "⛔"),
    )
)

_LEVEL_FALLBACK = {
    logging.DEBUG: "🔍",
    logging.INFO: "ℹ️",
    logging.WARNING: "⚠️",
    logging.ERROR: "❌",
    logging.CRITICAL: "🚨",
}

_LEVEL_COLORS = {
    logging.DEBUG: "\033[36m",
    logging.INFO: "\033[32m",
    logging.WARNING: "\033[33m",
    logging.ERROR: "\033[31m",
    logging.CRITICAL: "\033[35m",
}
_RESET = "\033[0m"

# 模块 → 短标签；未列出的模块取最后一段的大写
_MODULE_TAGS = {
    "app.main": "MAIN",
    "app.config": "CONFIG",
    "app.experiments": "EXPERIMENT",
    "core.model": "MODEL",
    "core.sampler": "SAMPLER",
    "core.theory": "THEORY",
    "core.stats": "STATS",
    "core.ffield": "FIELD",
    "core.polyroots": "POLY",
    "services.map_analysis": "MAPS",
    "services.trial_runner": "RUNNER",
    "services.enumeration_oracle": "ORACLE",
    "services.prime_survey": "PRIMES",
    "tasks.trial_tasks": "TASKS",
    "utils.report_writer": "REPORT",
}

_QUIET_LOGGERS = {
    "celery": logging.INFO,
    "kombu": logging.WARNING,
    "redis": logging.WARNING,
    "asyncio": logging.WARNING,
    "concurrent.futures": logging.WARNING,
}


class RevmapLogFormatter(logging.Formatter):
    """符号 时间 - 级别 - 模块 - 函数:行 - 消息"""

    def __init__(self, use_colors: bool = True, use_smart_symbols: bool = True):
        super().__init__(datefmt="%Y-%m-%d %H:%M:%S")
        self.use_colors = use_colors and sys.stderr.isatty()
        self.use_smart_symbols = use_smart_symbols

    def symbol_for(self, record: logging.LogRecord) -> str:
        if self.use_smart_symbols:
            message = record.getMessage()
            for pattern, symbol in _SYMBOL_RULES:
                if pattern.search(message):
                    return symbol
        return _LEVEL_FALLBACK.get(record.levelno, "📝")

    @staticmethod
    def module_tag(name: str) -> str:
        return _MODULE_TAGS.get(name, name.rsplit(".", 1)[-1].upper())

    def format(self, record: logging.LogRecord) -> str:
        level = f"{record.levelname:<8}"
        module = f"{self.module_tag(record.name):<12}"
        if self.use_colors:
            color = _LEVEL_COLORS.get(record.levelno, "")
            level, module = f"{color}{level}{_RESET}", f"{color}{module}{_RESET}"

        where = f"{record.funcName}:{record.lineno}"
        line = (
            f"{self.symbol_for(record)} {self.formatTime(record, self.datefmt)} - "
            f"{level} - {module} - {where:<24} - {record.getMessage()}"
        )
        if record.exc_info:
            line = f"{line}\n{self.formatException(record.exc_info)}"
        return line


def _attach(root: logging.Logger, handler: logging.Handler, level: int, use_colors: bool, use_smart_symbols: bool) -> None:
    handler.setLevel(level)
    handler.setFormatter(RevmapLogFormatter(use_colors=use_colors, use_smart_symbols=use_smart_symbols))
    root.addHandler(handler)


def setup_logging(
    level: str = "WARNING",
    log_file: Optional[str] = None,
    max_file_size: int = 10 * 1024 * 1024,
    backup_count: int = 5,
    console_output: bool = True,
    use_smart_symbols: bool = True,
) -> None:
    """
    重新配置 root logger，可重复调用

    Args:
        level: 日志级别名（未知名称按 INFO 处理）
        log_file: 可选的日志文件，按 max_file_size 轮转
        console_output: 是否写 stderr
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)

    numeric = getattr(logging, level.upper(), logging.INFO)
    root.setLevel(numeric)

    if console_output:
        _attach(root, logging.StreamHandler(sys.stderr), numeric, True, use_smart_symbols)
    if log_file:
        os.makedirs(os.path.dirname(log_file) or ".", exist_ok=True)
        rotating = logging.handlers.RotatingFileHandler(
            log_file, maxBytes=max_file_size, backupCount=backup_count, encoding="utf-8"
        )
        _attach(root, rotating, numeric, False, use_smart_symbols)

    for name, quiet in _QUIET_LOGGERS.items():
        logging.getLogger(name).setLevel(quiet)

    logging.getLogger(__name__).debug(f"日志已配置: level={level}, file={log_file or '-'}")


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


def log_success(logger: logging.Logger, message: str) -> None:
    logger.info(f"✅ {message}")


def log_start(logger: logging.Logger, message: str) -> None:
    logger.info(f"🚀 {message}")


def log_config(logger: logging.Logger, message: str) -> None:
    logger.info(f"🔧 {message}")


# 直接导入时给一个最小配置，CLI 会按 --log-level 重新配置
if not logging.getLogger().handlers:
    setup_logging(level=os.getenv("LOG_LEVEL", "WARNING"))

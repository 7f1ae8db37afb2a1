"""
结果输出：CSV 与 JSON

- CSV：浮点数 6 位有效数字，Fraction 写成 "p/q"，LF 换行
- JSON：{config, results, checks}，键排序，2 空格缩进，Fraction 写成 "p/q"，末尾换行
同一配置与种子的输出逐字节一致。
"""

import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from utils.logging_config import get_logger

logger = get_logger(__name__)


def format_number(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.6g}"
    return str(value)


def to_jsonable(value: Any) -> Any:
    """递归转换为 json 可序列化的对象"""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump())
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buffer.getvalue()


def render_json(config: Dict[str, Any], results: Any, checks: List[Dict[str, Any]]) -> str:
    document = {"config": config, "results": results, "checks": checks}
    return json.dumps(to_jsonable(document), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit(text: str, out: Optional[str] = None) -> None:
    """写到 --out 指定的文件，未指定时写到 stdout"""
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info(f"[report] 文件已写入: {path}")

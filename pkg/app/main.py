#!/usr/bin/env python3
"""
revmap 命令行入口

使用方法：
    python -m app.main involutions --n 40000 --g 200 --h 200 --trials 200 --seed 42 --out r.csv
    python -m app.main repeats --n 10000 --g 100 --h 100 --t 3 --trials 10000
    python -m app.main henon --a 1 --p 6563 --t 5
    python -m app.main map3d --e 1 --k 1 --p 7
    python -m app.main cebotarev --degree 6
    python -m app.main phi5 --p-min 5000 --p-max 20000

退出码：0 成功，2 参数错误，3 超过资源上限，4 --check 模式下检查未通过
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

# 添加项目根目录到 Python 路径
sys.path.insert(0, str(Path(__file__).parent.parent))

from pydantic import ValidationError

from app.config import settings
from app.experiments import RunConfig, run
from core.errors import AcceptanceCheckError, ParameterError, ResourceCapError, RevmapError
from utils.logging_config import get_logger, log_config, setup_logging
from utils.report_writer import emit, render_csv, render_json

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_CAP = 3
EXIT_CHECK = 4


def _global_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--log-level", type=str, default=None, help="日志级别（默认取 LOG_LEVEL）")
    parser.add_argument("--workers", type=int, default=None, help="并行 worker 数（默认 CPU 核数）")
    parser.add_argument("--backend", choices=["local", "celery"], default="local", help="执行后端")
    parser.add_argument("--format", choices=["csv", "json"], default="csv", help="输出格式")
    parser.add_argument("--out", type=str, default=None, help="输出文件（默认 stdout）")
    parser.add_argument("--check", action="store_true", help="按验收容差检查，失败时退出码 4")


def _model_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="相空间大小 N")
    parser.add_argument("--g", type=int, required=True, help="#Fix G")
    parser.add_argument("--h", type=int, required=True, help="#Fix H")
    parser.add_argument("--trials", type=int, default=None, help="试验次数")
    parser.add_argument("--seed", type=int, default=42, help="master seed")
    parser.add_argument("--exact", action="store_true", help="穷举 E(g,h,N) 给出精确值")


def _prime_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, default=None, help="单个素数")
    parser.add_argument("--p-min", type=int, default=None, help="素数范围下界")
    parser.add_argument("--p-max", type=int, default=None, help="素数范围上界")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="revmap", description="可逆映射的随机对合模型实验")
    subparsers = parser.add_subparsers(dest="command", required=True)

    involutions = subparsers.add_parser("involutions", help="缩放循环长度分布 R̂_N(x) 与 R(x) 的比较")
    _model_options(involutions)
    _global_options(involutions)

    repeats = subparsers.add_parser("repeats", help="对称 t-循环个数的分布与 Poisson 律")
    _model_options(repeats)
    repeats.add_argument("--t", type=int, default=3, help="周期 t")
    repeats.add_argument("--all-cycles", action="store_true", help="计入非对称 t-循环")
    _global_options(repeats)

    henon = subparsers.add_parser("henon", help="Hénon 映射在 𝔽_p 上的逐素数报告")
    henon.add_argument("--a", type=int, default=1, help="参数 a")
    henon.add_argument("--t", type=int, default=5, help="对称循环的周期")
    henon.add_argument("--full", action="store_true", help="同时做完整循环分解")
    _prime_options(henon)
    _global_options(henon)

    map3d = subparsers.add_parser("map3d", help="三维可逆映射（p ≡ 3 mod 4）")
    map3d.add_argument("--e", type=int, default=1, help="参数 e")
    map3d.add_argument("--k", type=int, default=1, help="参数 k")
    _prime_options(map3d)
    _global_options(map3d)

    cebotarev = subparsers.add_parser("cebotarev", help="S_d 不动点分布与 Poisson(1) 对照表")
    cebotarev.add_argument("--degree", type=int, default=6, help="多项式次数 d")
    _global_options(cebotarev)

    phi5 = subparsers.add_parser("phi5", help="Φ₅ mod p 的根数与普查")
    _prime_options(phi5)
    phi5.add_argument("--cross-check", action="store_true", help="与对称 5-循环的轨道搜索对照")
    _global_options(phi5)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    options = {key: value for key, value in vars(args).items() if value is not None}
    options.pop("log_level", None)
    return RunConfig(**options)


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    return config_from_args(build_parser().parse_args(argv))


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(
        level=args.log_level or settings.LOG_LEVEL,
        log_file=settings.LOG_FILE or None,
        console_output=True,
    )

    try:
        config = config_from_args(args)
        log_config(logger, f"[main] {config.command}: {config.resolved()}")
        report = run(config)
        if config.format == "json":
            text = render_json(config.resolved(), report.results, report.checks)
        else:
            text = render_csv(report.header, report.rows)
        emit(text, config.out)

        if config.check and report.failed:
            raise AcceptanceCheckError(report.failed)
        for item in report.checks:
            status = "通过" if item["pass"] else "失败"
            logger.info(f"[check] {item['name']}: {status} (value={item['value']}, bound={item['bound']})")
        return EXIT_OK
    except (ParameterError, ValidationError) as e:
        logger.error(f"[main] 参数错误: {e}")
        return EXIT_PARAMETER
    except ResourceCapError as e:
        logger.error(f"[main] 超过资源上限: {e}")
        return EXIT_CAP
    except AcceptanceCheckError as e:
        for item in e.failed:
            logger.error(f"[check] {item['name']}: 失败 (value={item['value']}, bound={item['bound']})")
        return EXIT_CHECK
    except RevmapError as e:
        logger.error(f"[main] 运行失败: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

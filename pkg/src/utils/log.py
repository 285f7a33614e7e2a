"""
日志工具模块
"""
import logging
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure(verbose: bool = False) -> None:
    """配置 dec 根日志记录器（只在 CLI 入口调用一次）"""
    logger = logging.getLogger("dec")
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """获取 dec.* 命名空间下的日志记录器"""
    short = (name or "engine").replace("src.", "")
    return logging.getLogger(f"dec.{short}")

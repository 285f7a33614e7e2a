"""
资源保护模块
"""
import os
import time
from collections import deque
from typing import Any, Dict, Mapping, Optional, Tuple

import psutil

from src.utils.config import GUARD_CONFIG
from src.utils.log import get_logger

logger = get_logger(__name__)


class ResourceGuard:
    """内存保护器 - 在检查项之间采样进程 RSS，超限时让当前夹具提前结束"""

    def __init__(self, config: Optional[Mapping[str, Any]] = None):
        self.config = {**GUARD_CONFIG, **(config or {})}
        self.step_times = deque(maxlen=100)
        self.counter = 0
        self.is_tripped = False
        self.trip_reason: Optional[str] = None
        self.peak_mb = 0.0
        self._last_step = time.perf_counter()

    def memory_mb(self) -> float:
        """当前进程的常驻内存(MB)"""
        try:
            return psutil.Process(os.getpid()).memory_info().rss / 1024 / 1024
        except psutil.Error as e:
            logger.warning(f"❌ 内存检查失败: {e}")
            return 0.0

    def check_memory_usage(self) -> bool:
        memory = self.memory_mb()
        self.peak_mb = max(self.peak_mb, memory)
        limit = self.config['max_memory_mb']
        if memory > limit:
            logger.warning(f"⚠️ 内存使用过高: {memory:.1f}MB > {limit}MB")
            return True
        return False

    def step(self, label: str = "") -> Tuple[bool, str]:
        """每完成一个检查项调用一次；返回 (是否应停止, 原因)"""
        now = time.perf_counter()
        self.step_times.append(now - self._last_step)
        self._last_step = now
        self.counter += 1
        if self.counter % max(1, int(self.config['check_interval'])) == 0 and self.check_memory_usage():
            self.trip(f"内存使用过高（{label}）" if label else "内存使用过高")
        return self.is_tripped, self.trip_reason or ""

    def trip(self, reason: str) -> None:
        if not self.is_tripped:
            self.is_tripped = True
            self.trip_reason = reason
            logger.warning(f"🛑 停止当前夹具: {reason}")

    def reset(self) -> None:
        if self.is_tripped:
            logger.info("▶️ 资源保护复位")
        self.is_tripped = False
        self.trip_reason = None

    def get_stats(self) -> Dict[str, Any]:
        """保护器统计信息（只写日志，不进报告）"""
        return {
            'steps': self.counter,
            'is_tripped': self.is_tripped,
            'trip_reason': self.trip_reason,
            'peak_memory_mb': round(self.peak_mb, 1),
            'avg_step_seconds': sum(self.step_times) / len(self.step_times) if self.step_times else 0,
        }

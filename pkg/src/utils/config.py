"""
验证引擎配置
"""
import os
import re
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from src.core.cochain import SupportClass
from src.core.errors import ConfigError, DecError
from src.core.homotopy import TimeBump
from src.core.lorentz import MIN_KERNEL_DEPTH
from src.core.mesh import TimeAxis, build_sigma

# 引擎配置
ENGINE_CONFIG = {
    'seed': 20240601,  # 随机上链的种子
    'homotopy_samples': 100,  # P/Q 恒等式每个次数的样本数
    'slice_samples': 20,  # 时间片映射交换性样本数
    'compat_samples': 50,  # 相容性引理的随机闭上链对数
    'green_samples': 4,  # Green 验证的随机源个数
    'lorenz_samples': 20,  # Lorenz 规范固定的随机势个数
    'kernel_depth': 3,  # ker G 秩证书的时间片深度（0 表示跳过，否则至少 3）
}

# 度量配置
METRIC_CONFIG = {
    'dt': "1/2",  # 时间步长（有理数字符串）
    'scheme': "uniform",  # 空间权重方案 uniform / valence
}

# 观测窗口配置
WINDOW_CONFIG = {
    'margin': None,  # 两端去掉的时间片数，None 表示 锥半径 × 领子宽度
    'observation_collar': 2,  # 观测窗口自身的时间领子宽度
}

# 报告配置
REPORT_CONFIG = {
    'out_dir': "reports",
    'csv': False,  # 是否导出矩阵 CSV
}

# 资源保护配置
GUARD_CONFIG = {
    'max_memory_mb': 4096,  # 进程常驻内存上限(MB)
    'check_interval': 1,  # 每隔多少个检查项采样一次内存
}

# 应用配置
APP_CONFIG = {
    'title': "离散外微分验证引擎",
    'version': "0.1.0",
    'host': "127.0.0.1",
    'port': 8000,
    'log_level': "info",
}

WORKERS_ENV = 'DEC_WORKERS'

SUITES = ('mesh', 'betti', 'homotopy', 'duality', 'green', 'maxwell', 'faraday')
SELECTORS = SUITES + ('all',)
# 这些套件只接受带时间轴的夹具
SPACETIME_SUITES = {'homotopy', 'green', 'maxwell', 'faraday'}
# 这些套件的次数取自 field_degrees
FIELD_SUITES = {'maxwell', 'faraday'}

_SECTIONS = {'engine': ENGINE_CONFIG, 'metric': METRIC_CONFIG, 'window': WINDOW_CONFIG,
             'report': REPORT_CONFIG, 'guard': GUARD_CONFIG}


@dataclass(frozen=True)
class FixtureSpec:
    """一个夹具：只有 Σ，或 Time(slices, collar) × Σ"""
    name: str
    sigma: str
    slices: Optional[int] = None
    collar: int = 1
    base_slice: Optional[int] = None
    bump_edge: Optional[int] = None
    margin: Optional[int] = None
    degrees: Tuple[int, ...] = ()
    field_degrees: Tuple[int, ...] = ()
    betti: Tuple[Tuple[str, Tuple[int, ...]], ...] = ()

    @property
    def is_spacetime(self) -> bool:
        return self.slices is not None

    @property
    def expected_betti(self) -> Dict[str, Tuple[int, ...]]:
        """支撑类 → 期望的 Betti 数"""
        return dict(self.betti)


@dataclass(frozen=True)
class RunConfig:
    path: str
    engine: Mapping[str, Any]
    metric: Mapping[str, Any]
    window: Mapping[str, Any]
    report: Mapping[str, Any]
    guard: Mapping[str, Any]
    fixtures: Mapping[str, FixtureSpec]
    suites: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)

    def fixtures_for(self, suite: str) -> List[FixtureSpec]:
        return [self.fixtures[name] for name in self.suites.get(suite, ())]


def worker_count() -> int:
    """DEC_WORKERS 环境变量，默认 1"""
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} 必须是正整数: {raw!r}")


def _line_of(exc: tomllib.TOMLDecodeError) -> str:
    match = re.search(r'line (\d+)', str(exc))
    return match.group(1) if match else "?"


def _merge(defaults: Dict[str, Any], section: str, override: Any) -> Dict[str, Any]:
    if override is None:
        return dict(defaults)
    if not isinstance(override, dict):
        raise ConfigError(f"[{section}] 必须是一个表")
    unknown = sorted(set(override) - set(defaults))
    if unknown:
        raise ConfigError(f"[{section}] 中有未知的键: {', '.join(unknown)}")
    return {**defaults, **override}


def _fixture(name: str, table: Any) -> FixtureSpec:
    if not isinstance(table, dict) or 'sigma' not in table:
        raise ConfigError(f"夹具 {name} 缺少 sigma 描述符")
    allowed = {'sigma', 'slices', 'collar', 'base_slice', 'bump_edge', 'margin', 'degrees',
               'field_degrees', 'betti'}
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ConfigError(f"夹具 {name} 中有未知的键: {', '.join(unknown)}")
    spec = FixtureSpec(name=name, sigma=str(table['sigma']), slices=table.get('slices'),
                       collar=int(table.get('collar', 1)), base_slice=table.get('base_slice'),
                       bump_edge=table.get('bump_edge'), margin=table.get('margin'),
                       degrees=tuple(int(k) for k in table.get('degrees', ())),
                       field_degrees=tuple(int(k) for k in table.get('field_degrees', ())))
    try:
        sigma = build_sigma(spec.sigma)
        if spec.is_spacetime:
            time = TimeAxis(int(spec.slices), spec.collar, spec.base_slice)
            if spec.bump_edge is not None:
                TimeBump.single(time, int(spec.bump_edge))
    except DecError as exc:
        raise ConfigError(f"夹具 {name} 不合法: {exc.message}", exc.witness) from exc
    m = sigma.dimension + (1 if spec.is_spacetime else 0)
    for k in spec.degrees:
        if not 0 <= k <= m:
            raise ConfigError(f"夹具 {name} 的次数 {k} 超出 [0, {m}]")
    if spec.field_degrees and not spec.is_spacetime:
        raise ConfigError(f"夹具 {name}: field_degrees 只对时空夹具有意义")
    betti = _betti_table(name, table.get('betti'), m, spec.is_spacetime)
    return replace(spec, betti=betti)


def _betti_table(name: str, table: Any, m: int, spacetime: bool) -> Tuple[Tuple[str, Tuple[int, ...]], ...]:
    """betti = { Free = [...], SC = [...] }，长度 m + 1 的非负整数"""
    if table is None:
        return ()
    if not isinstance(table, dict):
        raise ConfigError(f"夹具 {name}: betti 必须是一个表")
    out = []
    for key, values in table.items():
        try:
            support = SupportClass.parse(key)
        except ValueError as exc:
            raise ConfigError(f"夹具 {name}: {exc}", {'support': key}) from exc
        if support in (SupportClass.SC, SupportClass.TC) and not spacetime:
            raise ConfigError(f"夹具 {name}: 只有 Σ 时没有 {support.value} 支撑", {'support': key})
        if (not isinstance(values, list) or len(values) != m + 1
                or any(not isinstance(v, int) or isinstance(v, bool) or v < 0 for v in values)):
            raise ConfigError(f"夹具 {name}: betti.{key} 必须是 {m + 1} 个非负整数", {'support': key})
        out.append((support.value, tuple(values)))
    return tuple(out)


def parse_config(text: str, path: str = "<string>") -> RunConfig:
    """解析 TOML 文本并与默认配置合并"""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: 第 {_line_of(exc)} 行解析失败: {exc}") from exc
    unknown = sorted(set(raw) - set(_SECTIONS) - {'fixtures', 'suites'})
    if unknown:
        raise ConfigError(f"{path}: 未知的配置节 {', '.join(unknown)}")
    merged = {name: _merge(defaults, name, raw.get(name)) for name, defaults in _SECTIONS.items()}
    depth = merged['engine']['kernel_depth']
    if not isinstance(depth, int) or (depth != 0 and depth < MIN_KERNEL_DEPTH):
        raise ConfigError(f"{path}: kernel_depth 必须为 0 或 ≥ {MIN_KERNEL_DEPTH}: {depth!r}", {'kernel_depth': depth})
    fixtures = {name: _fixture(name, table) for name, table in (raw.get('fixtures') or {}).items()}
    suites: Dict[str, Tuple[str, ...]] = {}
    for suite, names in (raw.get('suites') or {}).items():
        if suite not in SUITES:
            raise ConfigError(f"{path}: 未知的套件 {suite}，可选 {', '.join(SUITES)}")
        for name in names:
            if name not in fixtures:
                raise ConfigError(f"{path}: 套件 {suite} 引用了未知夹具 {name}", {'fixture': name})
            if suite in SPACETIME_SUITES and not fixtures[name].is_spacetime:
                raise ConfigError(f"{path}: 套件 {suite} 需要带时间轴的夹具，{name} 只有 Σ")
            if suite in FIELD_SUITES:
                _check_field_degrees(suite, fixtures[name])
        suites[suite] = tuple(names)
    return RunConfig(path, merged['engine'], merged['metric'], merged['window'], merged['report'],
                     merged['guard'], fixtures, suites)


def _check_field_degrees(suite: str, spec: FixtureSpec) -> None:
    """势模型（maxwell 套件）要求 1 ≤ k ≤ m − 1，Faraday 模型要求 0 ≤ k ≤ m"""
    m = build_sigma(spec.sigma).dimension + 1
    low, high = (1, m - 1) if suite == 'maxwell' else (0, m)
    for k in spec.field_degrees or (1,):
        if not low <= k <= high:
            raise ConfigError(f"夹具 {spec.name}: {suite} 次数 {k} 超出 [{low}, {high}]", {'degree': k})


def load_config(path: Any) -> RunConfig:
    file = Path(path)
    if not file.exists():
        raise ConfigError(f"配置文件不存在: {file}")
    return parse_config(file.read_text(encoding='utf-8'), str(file))


def find_fixture(config: RunConfig, name: str) -> FixtureSpec:
    if name in config.fixtures:
        return config.fixtures[name]
    raise ConfigError(f"未知夹具: {name}", {'fixture': name})

"""
报告模型模块
"""
import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.core import linalg
from src.core.linalg import Dense


class CheckResult(BaseModel):
    """单项验证结果；有理数一律是 "p/q" 字符串"""
    model_config = ConfigDict(extra='forbid')

    check: str = Field(..., description="验证项名称")
    fixture: str = Field("", description="夹具名称")
    passed: bool
    details: Dict[str, Any] = Field(default_factory=dict)
    matrices: Dict[str, List[List[str]]] = Field(default_factory=dict)
    witness: Optional[Dict[str, Any]] = None


class SuiteReport(BaseModel):
    suite: str
    passed: bool
    checks: List[CheckResult] = Field(default_factory=list)


class RunReport(BaseModel):
    config: str = Field(..., description="配置文件名")
    selector: str
    exact: bool = Field(True, description="False 表示 --float 模式，不作为验收依据")
    passed: bool
    suites: List[SuiteReport] = Field(default_factory=list)


def check(name: str, passed: bool, fixture: str = "", details: Optional[Dict[str, Any]] = None,
          matrices: Optional[Dict[str, Dense]] = None, witness: Optional[Dict[str, Any]] = None) -> CheckResult:
    """构造 CheckResult，矩阵自动格式化为有理数字符串"""
    return CheckResult(
        check=name,
        fixture=fixture,
        passed=bool(passed),
        details=details or {},
        matrices={key: linalg.fmt_dense(m) for key, m in (matrices or {}).items()},
        witness=witness,
    )


def failed_check(name: str, fixture: str, error: Exception) -> CheckResult:
    witness = error.to_dict() if hasattr(error, 'to_dict') else {'error': type(error).__name__, 'message': str(error)}
    return CheckResult(check=name, fixture=fixture, passed=False, witness=witness)


def render_json(report: RunReport) -> str:
    """排序键、无时间戳，保证重复运行逐字节一致"""
    return json.dumps(report.model_dump(mode='json'), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_report(report: RunReport, out_dir: Path, dump_csv: bool = False) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "report.json"
    path.write_text(render_json(report), encoding='utf-8')
    if dump_csv:
        matrix_dir = out_dir / "matrices"
        matrix_dir.mkdir(exist_ok=True)
        for suite in report.suites:
            for item in suite.checks:
                for key, matrix in item.matrices.items():
                    name = f"{suite.suite}__{item.fixture or 'all'}__{item.check}__{key}.csv"
                    with open(matrix_dir / name, 'w', newline='', encoding='utf-8') as handle:
                        csv.writer(handle).writerows(matrix)
    return path


def report_schema() -> Dict[str, Any]:
    return RunReport.model_json_schema()

"""
API路由模块

只读接口：夹具目录、报告模式、最近一次运行的报告。验证本身只通过命令行触发。
"""
import json
from pathlib import Path
from typing import Any, Dict, Optional

from fastapi import FastAPI, HTTPException

from src.core.errors import DecError
from src.core.mesh import TimeAxis, build_product, build_sigma
from src.core.report import report_schema
from src.utils.config import APP_CONFIG, FixtureSpec, RunConfig
from src.utils.log import get_logger

logger = get_logger(__name__)


def describe_fixture(spec: FixtureSpec) -> Dict[str, Any]:
    """夹具的胞腔计数与描述文本"""
    sigma = build_sigma(spec.sigma)
    home = sigma
    if spec.is_spacetime:
        home = build_product(TimeAxis(int(spec.slices), spec.collar, spec.base_slice), sigma)
    return {
        'name': spec.name,
        'sigma': spec.sigma,
        'slices': spec.slices,
        'collar': spec.collar,
        'dimension': home.dimension,
        'counts': list(home.counts()),
        'description': home.describe(),
    }


def setup_routes(app: FastAPI, config: RunConfig, report_dir: Optional[Path] = None):
    """设置路由"""
    out_dir = Path(report_dir or config.report['out_dir'])

    @app.get("/api/fixtures")
    async def list_fixtures():
        return {
            'config': config.path,
            'fixtures': [{'name': s.name, 'sigma': s.sigma, 'slices': s.slices, 'collar': s.collar}
                         for s in config.fixtures.values()],
            'suites': {suite: list(names) for suite, names in config.suites.items()},
        }

    @app.get("/api/fixtures/{name}")
    async def get_fixture(name: str):
        spec = config.fixtures.get(name)
        if spec is None:
            raise HTTPException(status_code=404, detail=f"未知夹具: {name}")
        try:
            return describe_fixture(spec)
        except DecError as exc:
            raise HTTPException(status_code=422, detail=exc.to_dict())

    @app.get("/api/report-schema")
    async def get_report_schema():
        return report_schema()

    @app.get("/api/report")
    async def get_latest_report():
        path = out_dir / "report.json"
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"还没有报告: {path}")
        return json.loads(path.read_text(encoding='utf-8'))


def create_app(config: RunConfig, report_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title=APP_CONFIG['title'], version=APP_CONFIG['version'])
    setup_routes(app, config, report_dir)
    logger.info(f"🌐 只读接口就绪: {len(config.fixtures)} 个夹具，报告目录 {report_dir or config.report['out_dir']}")
    return app

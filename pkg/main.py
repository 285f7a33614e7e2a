"""
离散外微分验证引擎 - 命令行入口

    python main.py run configs/default.toml all [--float] [--out reports] [--csv]
    python main.py describe sphere3 [--config configs/default.toml]
    python main.py report-schema
    python main.py serve [--config configs/default.toml]
"""
import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

import uvicorn

from src.api.routes import create_app, describe_fixture
from src.core.errors import ConfigError, DecError
from src.core.mesh import build_sigma
from src.core.report import report_schema, write_report
from src.core.suite_runner import SuiteRunner
from src.utils.config import APP_CONFIG, METRIC_CONFIG, SELECTORS, load_config
from src.utils.log import configure, get_logger

logger = get_logger("main")

DEFAULT_CONFIG = Path("configs/default.toml")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class EngineCLI:
    """命令行各子命令的实现"""

    def run(self, args: argparse.Namespace) -> int:
        config = load_config(args.config)
        report = SuiteRunner(config, exact=not args.float).run(args.selector)
        out_dir = Path(args.out or config.report['out_dir'])
        path = write_report(report, out_dir, args.csv or bool(config.report['csv']))
        for suite in report.suites:
            failed = [c for c in suite.checks if not c.passed]
            mark = "✅" if suite.passed else "❌"
            print(f"{mark} {suite.suite}: {len(suite.checks) - len(failed)}/{len(suite.checks)} 通过")
            for item in failed:
                print(f"    ❌ {item.fixture}/{item.check}: {json.dumps(item.witness, ensure_ascii=False)}")
        if not report.exact:
            print("⚠️ 浮点模式的结果不作为验收依据")
        print(f"📄 报告已写入 {path}")
        return EXIT_OK if report.passed else EXIT_FAILED

    def describe(self, args: argparse.Namespace) -> int:
        config_path = Path(args.config) if args.config else DEFAULT_CONFIG
        if config_path.exists():
            config = load_config(config_path)
            if args.target in config.fixtures:
                info = describe_fixture(config.fixtures[args.target])
                print(info['description'])
                if config.fixtures[args.target].is_spacetime:
                    print(f"metric: dt = {config.metric['dt']}, weights = {config.metric['scheme']}")
                return EXIT_OK
        elif args.config:
            raise ConfigError(f"配置文件不存在: {config_path}")
        print(build_sigma(args.target).describe())
        print(f"metric defaults: dt = {METRIC_CONFIG['dt']}, weights = {METRIC_CONFIG['scheme']}")
        return EXIT_OK

    def report_schema(self, args: argparse.Namespace) -> int:
        print(json.dumps(report_schema(), indent=2, sort_keys=True, ensure_ascii=False))
        return EXIT_OK

    def serve(self, args: argparse.Namespace) -> int:
        config = load_config(args.config or DEFAULT_CONFIG)
        app = create_app(config, Path(args.out) if args.out else None)
        print(f"🌐 访问 http://{APP_CONFIG['host']}:{APP_CONFIG['port']}/api/fixtures 查看夹具目录")
        uvicorn.run(app, host=APP_CONFIG['host'], port=APP_CONFIG['port'], log_level=APP_CONFIG['log_level'])
        return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dec-verify", description=APP_CONFIG['title'])
    parser.add_argument('-v', '--verbose', action='store_true', help="输出 DEBUG 日志")
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help="运行验证套件")
    run.add_argument('config', help="TOML 配置文件")
    run.add_argument('selector', choices=SELECTORS, help="套件选择器")
    run.add_argument('--float', action='store_true', help="浮点模式（只做诊断）")
    run.add_argument('--out', default=None, help="报告目录，默认取配置中的 report.out_dir")
    run.add_argument('--csv', action='store_true', help="同时导出矩阵 CSV")

    describe = sub.add_parser('describe', help="描述夹具或曲面描述符")
    describe.add_argument('target', help="夹具名或描述符，如 sphere3、circle(3)")
    describe.add_argument('--config', default=None)

    sub.add_parser('report-schema', help="打印报告的 JSON Schema")

    serve = sub.add_parser('serve', help="启动只读 HTTP 接口")
    serve.add_argument('--config', default=None)
    serve.add_argument('--out', default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数；返回退出码"""
    args = build_parser().parse_args(argv)
    configure(args.verbose)
    cli = EngineCLI()
    handler = getattr(cli, args.command.replace('-', '_'))
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"❌ 配置错误: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except DecError as exc:
        print(f"❌ {type(exc).__name__}: {exc.message}", file=sys.stderr)
        if exc.witness is not None:
            print(f"    witness: {json.dumps(exc.witness, ensure_ascii=False)}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

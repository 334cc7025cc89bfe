import argparse
import importlib
import inspect
import logging
import os
import pkgutil
import sys
from typing import Dict, List, Optional

from dotenv import load_dotenv

from ccr_lab.modules.report import Report, RunConfig, load_config
from ccr_lab.modules.suite import Suite, SuiteContext

# Load environment variables
load_dotenv()

# Initialize logging
LOG_DIR = os.getenv("CCR_LAB_LOG_DIR", "./logs")
LOG_LEVEL = os.getenv("CCR_LAB_LOG_LEVEL", "INFO").upper()
if not os.path.exists(LOG_DIR):
    os.makedirs(LOG_DIR)

logging.basicConfig(
    filename=os.path.join(LOG_DIR, "ccr_lab.log"),
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)

ALL_SUITES = "all"
EXIT_USAGE = 2


def discover_suites(package_name: str = "ccr_lab.suites") -> Dict[str, Suite]:
    """
    Discovers all Suite objects in the specified package, keyed by suite name.
    """
    logging.info(f"Discovering suites in {package_name}...")
    package = importlib.import_module(package_name)
    package_path = os.path.dirname(package.__file__)

    suites: Dict[str, Suite] = {}
    for _, module_name, is_pkg in pkgutil.walk_packages(path=[package_path], prefix=f"{package_name}."):
        if is_pkg:
            continue
        try:
            module = importlib.import_module(module_name)
        except ImportError as e:
            error_msg = f"Error importing module {module_name}: {e}"
            print(error_msg, file=sys.stderr)
            logging.error(error_msg)
            continue
        for _, value in inspect.getmembers(module, lambda member: isinstance(member, Suite)):
            if value.name in suites:
                raise ValueError(f"duplicate suite name {value.name!r} in {module_name}")
            logging.info(f"Registered suite {value.name} from {module_name}")
            suites[value.name] = value

    logging.info(f"Suite discovery complete: {', '.join(sorted(suites))}")
    return suites


def run_suite(config: RunConfig, name: str, suites: Optional[Dict[str, Suite]] = None) -> Report:
    """Run one suite, or every registered suite in name order for `all`."""
    suites = suites if suites is not None else discover_suites()
    if name != ALL_SUITES and name not in suites:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(sorted(suites) + [ALL_SUITES])}")
    selected = sorted(suites) if name == ALL_SUITES else [name]
    context = SuiteContext(config)
    report = Report(config.config_hash())
    for suite_name in selected:
        report.extend(suites[suite_name].run(context))
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccr-lab",
        description="Verify CCR, Weyl and GNS identities of quasi-free Wightman functionals over finite test spaces.",
    )
    parser.add_argument("suite", help=f"suite to run, or '{ALL_SUITES}'")
    parser.add_argument("--config", required=True, help="path to a JSON run configuration")
    parser.add_argument("--degree", type=int, help="override the truncation degree N")
    parser.add_argument("--seed", type=int, help="override the seed of the randomized checks")
    parser.add_argument("--probe", type=int, help="override the probe degree P")
    parser.add_argument("--out", help="write the JSONL report to this path")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config).with_overrides(args.degree, args.seed, args.probe)
        report = run_suite(config, args.suite)
    except (ValueError, OSError) as e:
        logging.error(f"ccr-lab {args.suite} aborted: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    print(report.table())
    if args.out:
        report.write_jsonl(args.out)
        logging.info(f"Wrote {len(report.records)} records to {args.out}")
    logging.info(f"ccr-lab {args.suite} finished with exit status {report.exit_code}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())

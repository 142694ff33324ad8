"""Command-line entry point."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import load_config, validate, with_overrides
from .errors import ConfigError, StorageError, WordLayersError
from .pipeline import EXIT_CONFIG, EXIT_INPUT, run_pipeline

logger = logging.getLogger("wordlayers")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="wordlayers",
        description="Build a temporal multilayer word co-occurrence network from a timestamped corpus.",
    )
    p.add_argument("--config", required=True, help="pipeline config file (TOML)")
    p.add_argument("--output-dir", help="override export.output_dir")
    p.add_argument("--input", action="append", dest="inputs", metavar="PATH",
                   help="input corpus file (repeatable); replaces input.paths from the config")
    p.add_argument("--top-k", type=int, help="override graph.top_k")
    p.add_argument("--seed", type=int, help="override community.seed")
    p.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--format", dest="formats", help="comma-separated subset of gexf,graphml,csv")
    p.add_argument("--report-stdout", action="store_true", help="also print the run report to stdout")
    p.add_argument("--validate-only", action="store_true", help="check the config and exit")
    p.add_argument("-q", "--quiet", action="store_true", help="only log warnings and errors")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args.config)
        formats = tuple(f.strip() for f in args.formats.split(",") if f.strip()) if args.formats else None
        cfg = with_overrides(
            cfg, inputs=args.inputs, top_k=args.top_k, seed=args.seed,
            output_dir=args.output_dir, formats=formats,
        )
    except ConfigError as exc:
        logger.error("config: %s", exc)
        return EXIT_CONFIG
    problems = validate(cfg)
    if args.threads < 1:
        problems.append("--threads must be ≥ 1")
    if problems:
        for msg in problems:
            logger.error("config: %s", msg)
        return EXIT_CONFIG
    if args.validate_only:
        logger.info("config ok")
        return 0
    try:
        result = run_pipeline(cfg, threads=args.threads)
    except ConfigError as exc:
        logger.error("config: %s", exc)
        return EXIT_CONFIG
    except StorageError as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
    except WordLayersError as exc:
        logger.error("%s", exc)
        return 1
    if args.report_stdout:
        sys.stdout.write(result.report.render())
    if result.exit_code:
        logger.error("%s", result.report.note)
    else:
        logger.info("wrote %s", ", ".join(str(p) for p in result.outputs))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())

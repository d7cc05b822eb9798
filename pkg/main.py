import logging
import sys
from typing import List, Optional

from app.formatters import format_report
from app.router import build_run_config, router
from core.config import get_settings
from core.exceptions import UsageProblem, VerificationViolation

logger = logging.getLogger('cactaz')


def configure_logging(verbosity: int = 0) -> None:
    level = get_settings().log_level.upper()
    if verbosity == 1:
        level = 'INFO'
    elif verbosity >= 2:
        level = 'DEBUG'
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        force=True,
    )


def _emit(text: str, output_path: Optional[str]) -> None:
    if output_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(output_path, 'w', encoding='utf-8', newline='\n') as handle:
        handle.write(text)


def run(argv: Optional[List[str]] = None) -> int:
    """Exit codes: 0 success, 1 a checked claim failed, 2 bad usage or input."""
    parser = router.build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    if args.subcommand is None:
        parser.print_usage(sys.stderr)
        return 2
    configure_logging(args.verbose)

    try:
        config = build_run_config(args)
        payload = router.dispatch(config)
        text = format_report(payload, config.output_format)
    except VerificationViolation as e:
        logger.error('[cactaz] %s', e)
        for witness in e.witnesses:
            logger.error('[cactaz] witness %s', witness)
        try:
            _emit(format_report(e.results, config.output_format), config.output_path)
        except UsageProblem as usage:
            print(f'error: {usage}', file=sys.stderr)
        return 1
    except UsageProblem as e:
        print(f'error: {e}', file=sys.stderr)
        return 2
    except ValueError as e:
        # pydantic validation of command parameters
        print(f'error: {e}', file=sys.stderr)
        return 2

    try:
        _emit(text, config.output_path)
    except OSError as e:
        print(f'error: cannot write {config.output_path}: {e}', file=sys.stderr)
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(run())

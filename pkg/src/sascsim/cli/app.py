import argparse
import logging

from sascsim import __version__
from sascsim.cli.commands import HANDLERS
from sascsim.cli.options import COMMAND_OPTIONS, resolve_params
from sascsim.cli.run_record import load_config_file
from sascsim.errors import InternalInvariantError, SascSimError
from sascsim.log_config import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sascsim",
        description="Speaker-aware conversation simulation and conversational ASR scoring.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default="INFO")
    parser.add_argument("--log-file")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for command, options in COMMAND_OPTIONS.items():
        sub = subparsers.add_parser(command)
        sub.add_argument("--config", help="JSON config file (a run.json works too)")
        for option in options:
            # defaults stay None so config-file values are not shadowed
            if option.flag:
                sub.add_argument(
                    option.flag_name, dest=option.name, action="store_true",
                    default=None, help=option.help,
                )
            else:
                sub.add_argument(
                    option.flag_name,
                    dest=option.name,
                    nargs="+" if option.multiple else None,
                    default=None,
                    help=option.help,
                )
    return parser


def run_cli(argv=None) -> int:
    """Parse argv, run one sub-command and map errors to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_file)

    try:
        file_values = load_config_file(args.config, args.command) if args.config else {}
        params = resolve_params(args.command, vars(args), file_values)
        return HANDLERS[args.command](params)
    except SascSimError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except OSError as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
    except Exception:  # pylint: disable=broad-exception-caught
        logger.exception("unexpected failure in %s", args.command)
        return InternalInvariantError.exit_code

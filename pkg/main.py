"""
Main entry point for the ENSEI toolkit.
Oblivious frequency-domain convolution: parameter inspection, the two-party
demo, benchmarks and the plaintext reference runner.
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from cli import RunConfig, cmd_bench, cmd_demo, cmd_oracle, cmd_params
from config import get_settings
from params import PRESETS
from utils import setup_logging, validate_seed
from utils.exceptions import EnseiError, ParameterError, ProtocolError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_PROTOCOL = 3
EXIT_PARAMETER = 4

COMMANDS = {
    "params": cmd_params,
    "demo": cmd_demo,
    "bench": cmd_bench,
    "oracle": cmd_oracle,
}


def seed_arg(value: str) -> int:
    ok, error, seed = validate_seed(value)
    if not ok:
        raise argparse.ArgumentTypeError(error)
    return seed


def build_parser() -> argparse.ArgumentParser:
    """Argument parser shared by every subcommand."""
    parser = argparse.ArgumentParser(
        description="ENSEI - oblivious convolution over packed homomorphic encryption"
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=None,
        help="Logging level. Defaults to ENSEI_LOG_LEVEL",
    )

    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("parameters")
    group.add_argument("--preset", choices=sorted(PRESETS), help="Named parameter preset")
    group.add_argument("--input-bits", type=int, help="Activation bit width (explicit profile)")
    group.add_argument("--filter-bits", type=int, help="Weight bit width (explicit profile)")
    group.add_argument("--fh", type=int, dest="filter_h", help="Filter height")
    group.add_argument("--fw", type=int, dest="filter_w", help="Filter width")
    group.add_argument("--n", type=int, default=2048, help="Lattice dimension (explicit profile)")
    group.add_argument("--build-mode", choices=["unified", "split"], default="unified",
                       help="Unified modulus or split transform/plaintext moduli")
    group.add_argument("--accumulation", type=int, help="Input channels q is sized for")

    group = common.add_argument_group("network")
    group.add_argument("--schedule", dest="schedule_path", help="TOML layer schedule")
    group.add_argument("--image-h", type=int, default=8)
    group.add_argument("--image-w", type=int, default=8)
    group.add_argument("--channels", type=int, default=1)
    group.add_argument("--channels-out", type=int, default=1)
    group.add_argument("--conv-type", choices=["same", "valid"], default="same")
    group.add_argument("--weights-file", help="Plain-integer filters (TEST-ONLY on Alice's side)")
    group.add_argument("--image-file", help="Plain-integer input image")

    group = common.add_argument_group("session")
    group.add_argument("--role", choices=["alice", "bob", "both"], help="Party to run")
    group.add_argument("--transport", choices=["inproc", "tcp"], default="inproc",
                       help="Transport for --role both")
    group.add_argument("--listen", help="host:port to accept the peer on")
    group.add_argument("--connect", help="host:port of the peer")
    group.add_argument("--seed", type=seed_arg, default=None, help="Session seed. Defaults to ENSEI_DEFAULT_SEED")
    group.add_argument("--mode", choices=["baseline", "freq-direct"], default="baseline",
                       help="Encrypt in the coefficient domain or directly in the evaluation domain")
    group.add_argument("--iterations", type=int, default=None,
                       help="Bench iterations. Defaults to ENSEI_BENCH_ITERATIONS")

    group = common.add_argument_group("output")
    fmt = group.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_const", const="json", dest="output_format")
    fmt.add_argument("--csv", action="store_const", const="csv", dest="output_format")
    group.add_argument("--out", help="Write the report to this file")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("params", parents=[common], help="Show parameters and the preset report")
    sub.add_parser("demo", parents=[common], help="Run the two-party protocol")
    sub.add_parser("bench", parents=[common], help="Benchmark both encryption modes")
    sub.add_parser("oracle", parents=[common], help="Evaluate the network in the clear")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge flags over settings into a validated RunConfig.

    Raises:
        ValidationError: If the combination of flags is invalid
    """
    settings = get_settings()
    preset = args.preset
    if preset is None and args.input_bits is None and args.filter_bits is None:
        preset = settings.default_preset

    return RunConfig(
        preset=preset,
        input_bits=args.input_bits,
        filter_bits=args.filter_bits,
        filter_h=args.filter_h,
        filter_w=args.filter_w,
        n=args.n,
        build_mode=args.build_mode,
        accumulation=args.accumulation,
        schedule_path=args.schedule_path,
        image_h=args.image_h,
        image_w=args.image_w,
        channels=args.channels,
        channels_out=args.channels_out,
        conv_type=args.conv_type,
        weights_file=args.weights_file,
        image_file=args.image_file,
        role=args.role,
        transport=args.transport,
        listen=args.listen,
        connect=args.connect,
        seed=args.seed if args.seed is not None else settings.default_seed,
        mode=args.mode,
        output_format=args.output_format or "human",
        out=args.out,
        iterations=args.iterations or settings.bench_iterations,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = get_settings()
        setup_logging(args.log_level or settings.log_level)

        config = make_config(args)
        return COMMANDS[args.command](config)

    except ValidationError as e:
        print(f"\n❌ Invalid arguments:\n{e}\n", file=sys.stderr)
        return EXIT_USAGE

    except ParameterError as e:
        logger.error(f"Parameter error: {e}")
        print(f"\n❌ Parameter error: {e}\n", file=sys.stderr)
        return EXIT_PARAMETER

    except ProtocolError as e:
        logger.error(f"Protocol error: {e}")
        print(f"\n❌ Protocol error: {e}\n", file=sys.stderr)
        return EXIT_PROTOCOL

    except (ValueError, FileNotFoundError) as e:
        print(f"\n❌ {e}\n", file=sys.stderr)
        return EXIT_USAGE

    except EnseiError as e:
        logger.error(f"Computation failed: {e}")
        print(f"\n❌ {e}\n", file=sys.stderr)
        return EXIT_FAILURE

    except Exception as e:
        logger.exception("Application error")
        print(f"\n❌ An error occurred: {str(e)}\n", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end: ``sufflz {compress,decompress,memory,bench,selftest}``."""

import argparse
import logging
import os
import sys
import tempfile

from . import bench, selftest
from .codec import decode_stream, encode_stream
from .errors import LZSAError
from .sliding_index import WindowConfig


def _power_of_two(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1 or v & (v - 1):
        raise argparse.ArgumentTypeError(f"{v} is not a power of two")
    return v


def _config_pair(text):
    try:
        m, n = (int(x) for x in text.split(","))
        return WindowConfig(m, n)
    except (ValueError, LZSAError) as exc:
        raise argparse.ArgumentTypeError(f"bad config {text!r}: {exc}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="sufflz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="compress a file")
    p.add_argument("--dict", dest="dict_len", type=_power_of_two, default=32768)
    p.add_argument("--lab", dest="lab_len", type=_power_of_two, default=1024)
    p.add_argument("--policy", choices=("fast", "best"), default="best")
    p.add_argument("--min-match", type=int, default=1)
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("decompress", help="decompress a file")
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("memory", help="print encoder memory models")
    p.add_argument("--dict", dest="dict_len", type=_power_of_two, default=32768)
    p.add_argument("--lab", dest="lab_len", type=_power_of_two, default=1024)
    p.add_argument("--hashsz", type=int, default=None, help="suffix tree hash size (default: --dict)")
    p.add_argument("--mf", choices=sorted(bench.LZMA_HALF_COEFFICIENTS), default="BT4")

    p = sub.add_parser("bench", help="benchmark a corpus directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--config", dest="configs", type=_config_pair, action="append",
                   help="M,N geometry; repeatable (default: all table geometries)")
    p.add_argument("--policy", choices=("fast", "best"), default="best")
    p.add_argument("--min-match", type=int, default=1)
    p.add_argument("--report", required=True, help="table path; records go to PATH.jsonl")
    p.add_argument("--parallel", action="store_true")

    sub.add_parser("selftest", help="run the built-in oracle checks")
    return parser


def _atomic_write(path, data):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sufflz-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _run(args, parser):
    if args.command == "compress":
        try:
            config = WindowConfig(args.dict_len, args.lab_len)
        except LZSAError as exc:
            parser.error(str(exc))
        if args.min_match < 1:
            parser.error("--min-match must be >= 1")
        with open(args.input, "rb") as fh:
            stats = encode_stream(fh, config, args.policy, args.min_match)
        _atomic_write(args.output, stats.data)
        print(f"{stats.input_bytes} -> {stats.output_bytes} bytes ({stats.bpb:.3f} bpb, "
              f"{stats.literals} literals, {stats.matches} matches, {stats.elapsed:.2f}s)")
    elif args.command == "decompress":
        with open(args.input, "rb") as fh:
            stats = decode_stream(fh)
        _atomic_write(args.output, stats.data)
        print(f"{stats.input_bytes} -> {stats.output_bytes} bytes")
    elif args.command == "memory":
        try:
            WindowConfig(args.dict_len, args.lab_len)
        except LZSAError as exc:
            parser.error(str(exc))
        for name, value in bench.memory_report(args.dict_len, args.lab_len,
                                               args.hashsz, args.mf).items():
            print(f"{name:<5}{value}")
    elif args.command == "bench":
        configs = [(c.dict_len, c.lab_len) for c in args.configs] if args.configs else bench.TABLE_CONFIGS
        report = bench.run_benchmark(args.corpus, configs, args.policy, args.min_match, args.parallel)
        report.write(args.report)
        print(report.table())
    elif args.command == "selftest":
        return 0 if selftest.run() else 1
    return 0


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args, parser)
    except (LZSAError, OSError) as exc:
        print(f"sufflz: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

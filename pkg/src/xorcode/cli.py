"""Command-line front end: gen, encode, decode, simulate, audit.

Every command draws all randomness from --seed and prints it, so repeated
invocations are byte-identical. Exit codes: 0 success, 1 domain error
(singular design, infeasible schedule, rank deficit), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import codec, latin, network, security
from .errors import CodingError, ParseError
from .gf2 import determinant, invert


def _seeds(seed: int, count: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(63) for _ in range(count)]


def _load_rectangle(path: str) -> latin.LatinRectangle:
    return latin.LatinRectangle.from_text(Path(path).read_text())


def cmd_gen(args) -> int:
    k = None if args.auto else args.rows
    rect, matrix = latin.find_nonsingular_rectangle(
        args.packets, k, seed=args.seed, max_retries=args.max_retries, moves=args.moves
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "rectangle.txt").write_text(rect.to_text())
    (outdir / "incidence.txt").write_text(matrix.to_text())
    (outdir / "inverse.txt").write_text(invert(matrix).to_text())
    print(
        f"seed={args.seed} n={rect.n} k={rect.k} "
        f"balanced={str(latin.is_balanced(matrix, rect.k)).lower()} "
        f"nonsingular={str(bool(determinant(matrix))).lower()}"
    )
    print(f"wrote {outdir / 'rectangle.txt'} {outdir / 'incidence.txt'} {outdir / 'inverse.txt'}")
    return 0


def cmd_encode(args) -> int:
    rect = _load_rectangle(args.rectangle)
    scheme = codec.make_scheme(rect, args.mode)
    data = Path(args.input).read_bytes()
    if not data:
        raise ValueError(f"input file {args.input} is empty")
    block = codec.split_payload(data, scheme.n)
    packets = codec.encode(scheme, block)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    width = len(str(scheme.n))
    names = []
    for p in packets:
        name = outdir / f"packet_{p.index:0{width}d}.bin"
        name.write_bytes(codec.serialize_packet(p))
        names.append(str(name))
    manifest = outdir / "manifest.txt"
    manifest.write_text(codec.format_manifest(scheme, rect, block.original_len))
    print(
        f"n={scheme.n} k={scheme.k} mode={scheme.mode} "
        f"packet_len={block.packet_len} original_len={block.original_len}"
    )
    print(f"wrote {len(names)} packets and {manifest}")
    return 0


def cmd_decode(args) -> int:
    n, _, _, original_len, _ = codec.parse_manifest(Path(args.manifest).read_text())
    packets = [codec.deserialize_packet(Path(f).read_bytes()) for f in args.packets]
    block = codec.decode(packets, n, original_len=original_len)
    Path(args.output).write_bytes(codec.join_payload(block))
    print(f"recovered={original_len} bytes from {len(packets)} packets -> {args.output}")
    return 0


def cmd_simulate(args) -> int:
    net = network.parse_network(Path(args.network).read_text())
    sched = network.build_schedule(net, args.packets)
    design_seed, payload_seed = _seeds(args.seed, 2)
    if args.rectangle:
        rect = _load_rectangle(args.rectangle)
    else:
        rect, _ = latin.find_nonsingular_rectangle(sched.n, seed=design_seed)
    scheme = codec.make_scheme(rect, args.mode)
    rng = random.Random(payload_seed)
    block = codec.SourceBlock.from_packets(
        [rng.randbytes(args.packet_len) for _ in range(sched.n)]
    )
    report = network.simulate(net, sched, scheme, block)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    sched_path = outdir / "schedule.txt"
    sched_path.write_text(network.format_schedule(net, sched))
    report_text = network.format_simulation_report(report)
    (outdir / "report.txt").write_text(report_text)
    print(f"seed={args.seed} n={sched.n} k={rect.k} mode={args.mode}")
    if sched.padding:
        print(f"padding={sched.padding} (requested {sched.requested_n}, delivering {sched.n})")
    print(report_text, end="")
    print(f"wrote {sched_path} and {outdir / 'report.txt'}")
    return 0 if report.all_decoded else 1


def cmd_audit(args) -> int:
    rect = _load_rectangle(args.rectangle)
    scheme = codec.make_scheme(rect, args.mode)
    if args.partition:
        seqs = []
        for chunk in args.partition.split(";"):
            try:
                seqs.append(tuple(int(t) for t in chunk.replace(",", " ").split()))
            except ValueError:
                raise ParseError(f"bad partition chunk {chunk!r}") from None
        part = security.PathPartition.from_sequences(seqs)
    else:
        partitions = network.parse_schedule_partitions(Path(args.schedule).read_text())
        sink = args.sink or next(iter(partitions))
        if sink not in partitions:
            raise ParseError(f"sink {sink!r} not found in schedule")
        part = security.PathPartition.from_sequences(partitions[sink])
    report = security.audit(rect, scheme, part)
    print(report.summary_line())
    if report.discrepancy:
        print("discrepancy=true  # column test and brute-force minimum disagree")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xorcode",
        description="Balanced XOR network coding: designs, packet codecs, "
        "phase schedules and eavesdropping audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="search for a nonsingular Latin-rectangle design")
    p.add_argument("-n", "--packets", type=int, required=True, help="design order / packet count")
    p.add_argument("-k", "--rows", type=int, help="rectangle rows (odd); default auto")
    p.add_argument("--auto", action="store_true", help="pick rows automatically (n-1 or n-2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--moves", type=int, help="mixing steps per sampled square (default n^3)")
    p.add_argument("--max-retries", type=int, default=64)
    p.add_argument("-o", "--out", default=".", help="output directory")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("encode", help="encode a file into coded packets")
    p.add_argument("-r", "--rectangle", required=True, help="Latin rectangle file")
    p.add_argument("--mode", choices=codec.MODES, default=codec.MODE_DIRECT)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--out", default=".", help="output directory")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode packet files back into the original")
    p.add_argument("-m", "--manifest", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("packets", nargs="+", help="packet files")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="build a phase schedule and replay delivery")
    p.add_argument("--network", required=True, help="network file")
    p.add_argument("-n", "--packets", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=codec.MODES, default=codec.MODE_DIRECT)
    p.add_argument("--rectangle", help="reuse an existing design instead of sampling one")
    p.add_argument("--packet-len", type=int, default=8)
    p.add_argument("-o", "--out", default=".", help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("audit", help="eavesdropping audit of a routing")
    p.add_argument("-r", "--rectangle", required=True)
    p.add_argument("--mode", choices=codec.MODES, default=codec.MODE_BALANCED_DECODE)
    p.add_argument("--schedule", help="schedule file to take the path partition from")
    p.add_argument("--sink", help="which sink's partition to audit (default: first)")
    p.add_argument("--partition", help="explicit partition, e.g. '3,10,7,2;8,4,11,9;1,6,5,12'")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "audit" and not (args.partition or args.schedule):
        parser.error("audit needs --schedule or --partition")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CodingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

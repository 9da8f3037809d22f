"""
Command-line front end.

    evgrover run --qubits 3 --marked 5 --version ev-truncated --epsilon 0
    evgrover sweep --qubits 16 --num-marked 1 --ratios 0.001,0.01,0.05,1
    evgrover verify --suite filtering --max-qubits 4

Exit codes: 0 success, 1 usage error, 2 search failure (run) or failed
suite (verify).
"""
from __future__ import annotations

import argparse
import contextlib
import sys
import warnings
from dataclasses import dataclass
from typing import IO, Iterator, Sequence

import numpy as np

from .drivers import SweepCell, compare_versions, make_grid, run_version
from .errors import GroverError
from .io import write_result, write_sweep_csv
from .measurement import EnsembleModel
from .state import MAX_QUBITS, SearchInstance
from .verify import SUITES, run_suites

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


@dataclass
class RunConfig:
    num_qubits: int
    marked: list[int] | None
    num_marked: int | None
    instance_seed: int | None
    version: str
    iterations: int | None
    epsilon: float
    ensemble_size: int
    seed: int
    output: str
    fmt: str
    max_qubits: int = MAX_QUBITS

    def validate(self) -> None:
        if (self.marked is None) == (self.num_marked is None):
            raise UsageError("give exactly one of --marked or --num-marked")
        if not 1 <= self.num_qubits <= self.max_qubits:
            raise UsageError(f"--qubits must be in [1, {self.max_qubits}], got {self.num_qubits}")
        n = 1 << self.num_qubits
        if self.marked is not None:
            for x in self.marked:
                if not 0 <= x < n:
                    raise UsageError(f"marked location {x} must satisfy 0 <= x < 2^L = {n}")
            if len(set(self.marked)) != len(self.marked):
                raise UsageError("marked locations must be distinct")
        M = len(self.marked) if self.marked is not None else self.num_marked
        if not 1 <= M <= n - 1:
            raise UsageError(f"number of marked items must be in [1, {n - 1}], got {M}")
        if not 0.0 <= self.epsilon < 1.0:
            raise UsageError(f"--epsilon must be in [0, 1), got {self.epsilon}")
        if self.version == "ev_truncated" and self.epsilon >= 1.0 / M:
            raise UsageError(
                f"--epsilon must be < 1/M = {1.0 / M:.6g} for the truncated EV version"
            )
        if self.ensemble_size < 0:
            raise UsageError("--ensemble-size must be >= 0")
        if self.iterations is not None and self.iterations < 0:
            raise UsageError("--iterations must be >= 0")

    def instance(self) -> SearchInstance:
        if self.marked is not None:
            return SearchInstance(self.num_qubits, tuple(self.marked), self.max_qubits)
        return SearchInstance.random(
            self.num_qubits, self.num_marked, self.resolved_instance_seed(), self.max_qubits
        )

    def resolved_instance_seed(self) -> int | None:
        if self.marked is not None:
            return None
        if self.instance_seed is not None:
            return self.instance_seed
        # independent of the measurement stream derived from the same --seed
        return int(np.random.SeedSequence([self.seed, 0x1F57]).generate_state(1)[0])


@contextlib.contextmanager
def _open_output(path: str) -> Iterator[IO[str]]:
    if path in ("", "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_run(args: argparse.Namespace) -> int:
    cfg = RunConfig(
        num_qubits=args.qubits,
        marked=args.marked,
        num_marked=args.num_marked,
        instance_seed=args.instance_seed,
        version=args.version.replace("-", "_"),
        iterations=args.iterations,
        epsilon=args.epsilon,
        ensemble_size=args.ensemble_size,
        seed=args.seed,
        output=args.output,
        fmt=args.format,
        max_qubits=args.max_qubits,
    )
    cfg.validate()
    inst = cfg.instance()
    model = None
    if cfg.ensemble_size > 0:
        model = EnsembleModel(cfg.ensemble_size, cfg.seed, cfg.epsilon)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        result = run_version(
            cfg.version,
            inst,
            epsilon=cfg.epsilon,
            model=model,
            seed=cfg.seed,
            iterations=cfg.iterations,
            instance_seed=cfg.resolved_instance_seed(),
        )
    with _open_output(cfg.output) as fh:
        write_result(result, fh, cfg.fmt)
    return EXIT_OK if result.success else EXIT_FAILURE


def cmd_sweep(args: argparse.Namespace) -> int:
    if (args.ratios is None) == (args.epsilons is None):
        raise UsageError("give exactly one of --ratios or --epsilons")
    if args.ratios is not None:
        cells = make_grid(args.qubits, args.num_marked, args.ratios)
    else:
        cells = []
        for L in args.qubits:
            for M in args.num_marked:
                if M > (1 << L) - 1:
                    continue
                for eps in args.epsilons:
                    if not 0.0 <= eps * M <= 1.0:
                        raise UsageError(f"epsilon {eps} outside [0, 1/M] for M={M}")
                    cells.append(SweepCell(L, M, eps * M))
    if not cells:
        raise UsageError("sweep grid is empty")
    for c in cells:
        if not 1 <= c.num_qubits < args.max_qubits:
            raise UsageError(f"--qubits entries must be in [1, {args.max_qubits - 1}]")
    rows = compare_versions(
        cells,
        seeds=args.seeds,
        ensemble_size=args.ensemble_size,
        master_seed=args.seed,
        jobs=args.jobs,
    )
    with _open_output(args.output) as fh:
        write_sweep_csv(rows, fh)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_suites(args.suite, args.max_qubits, args.seed)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("all suites passed" if ok else "SOME SUITES FAILED")
    return EXIT_OK if ok else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="evgrover", description="Grover search on an expectation-value quantum computer")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="one search in a chosen version")
    r.add_argument("--qubits", type=int, required=True)
    g = r.add_mutually_exclusive_group()
    g.add_argument("--marked", type=_int_list, help="explicit marked locations, e.g. 0,3")
    g.add_argument("--num-marked", type=int, help="number of randomly placed marked items")
    r.add_argument("--instance-seed", type=int, help="seed for random marked placement")
    r.add_argument(
        "--version", choices=["pm", "ev-standard", "ev-truncated"], default="ev-standard"
    )
    r.add_argument("--iterations", type=int, help="override the iteration count")
    r.add_argument("--epsilon", type=float, default=0.0, help="EV resolution")
    r.add_argument("--ensemble-size", type=int, default=0, help="0 = exact EVs")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--output", default="-")
    r.add_argument("--format", choices=["json", "csv"], default="json")
    r.add_argument("--max-qubits", type=int, default=MAX_QUBITS)
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="truncated vs standard iteration counts over a grid")
    s.add_argument("--qubits", type=_int_list, required=True)
    s.add_argument("--num-marked", type=_int_list, default=[1])
    s.add_argument("--ratios", type=_float_list, help="r = epsilon / epsilon_stand values")
    s.add_argument("--epsilons", type=_float_list, help="absolute epsilon values")
    s.add_argument("--seeds", type=int, default=20, help="sampled-mode trials per cell")
    s.add_argument("--ensemble-size", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--output", default="-")
    s.add_argument("--max-qubits", type=int, default=MAX_QUBITS)
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the identity suites")
    v.add_argument("--suite", action="append", choices=sorted(SUITES))
    v.add_argument("--max-qubits", type=int, default=6)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"evgrover: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except GroverError as e:
        print(f"evgrover: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: synth (write a synthetic benchmark as PPM frames), complete
(run the solver on frames or a synth spec), metrics (score one frame
directory against another), ablate (sweep the activation menu). Exit codes:
0 success, 1 usage error, 2 data error, 3 solver divergence.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import DataError, DivergenceError
from .experiment import ablation_sweep, resolve_input, run_experiment
from .frames import load_frames, save_frames
from .metrics import psnr, rse, ssim
from .sampling import synth_lowrank
from .transforms import ACTIVATION_NAMES

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DIVERGED = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors instead of argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rate", type=float, required=True, help="sampling rate in (0, 1]")
    p.add_argument("--seed", type=int, required=True, help="mask seed")
    p.add_argument("--alpha", type=float, default=10.0)
    p.add_argument("--beta", type=float, default=10.0)
    p.add_argument("--r", type=int, default=5, help="transform row count")
    p.add_argument("--rho", type=float, default=0.001, help="proximal weight")
    p.add_argument("--eps", type=float, default=1e-4, help="stopping tolerance")
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--activation", choices=ACTIVATION_NAMES, default="tanh")
    p.add_argument("--out", required=True, help="output directory")


def build_parser() -> _Parser:
    parser = _Parser(prog="quatcomplete", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[], help="write a synthetic PPM benchmark")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--n3", type=int, required=True)
    p.add_argument("--rank", type=int, required=True, help="slice rank bound")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("complete", help="recover missing entries")
    p.add_argument(
        "--input",
        required=True,
        help="frames directory or synth spec like synth:n1=20,n2=20,n3=10,rank=2,seed=7",
    )
    _add_solver_flags(p)
    p.add_argument("--grid", action="store_true", help="sweep alpha/beta/r grids")
    p.add_argument(
        "--assert-decrease",
        action="store_true",
        help="enable per-iteration decrease and feasibility assertions",
    )

    p = sub.add_parser("metrics", help="score recovered frames against a reference")
    p.add_argument("--recovered", required=True)
    p.add_argument("--reference", required=True)

    p = sub.add_parser("ablate", help="run the activation ablation")
    p.add_argument("--input", required=True, help="frames directory or synth spec")
    _add_solver_flags(p)
    return parser


def _cmd_synth(args) -> int:
    t = synth_lowrank(args.n1, args.n2, args.n3, args.rank, args.seed)
    save_frames(t, Path(args.out))
    print(f"wrote {args.n3} frames to {args.out}")
    return EXIT_OK


def _cmd_complete(args) -> int:
    records = run_experiment(args)
    best = max(records, key=lambda rec: rec.psnr)
    if args.grid:
        print(
            f"grid best: alpha={best.alpha:g} beta={best.beta:g} r={best.r} "
            f"psnr={best.psnr:.4f} ssim={best.ssim:.4f} rse={best.rse:.6f}"
        )
    else:
        print(
            f"iters={best.iters} rse={best.rse:.6f} psnr={best.psnr:.4f} "
            f"ssim={best.ssim:.4f} structure_dev={best.structure_dev:.3e}"
        )
    return EXIT_OK


def _cmd_metrics(args) -> int:
    recovered = load_frames(Path(args.recovered)).tensor()
    reference = load_frames(Path(args.reference)).tensor()
    print(
        f"rse={rse(recovered, reference):.6f} "
        f"psnr={psnr(recovered, reference):.4f} "
        f"ssim={ssim(recovered, reference):.4f}"
    )
    return EXIT_OK


def _cmd_ablate(args) -> int:
    records = ablation_sweep(args)
    for rec in records:
        print(
            f"{rec.activation:8s} psnr={rec.psnr:.4f} ssim={rec.ssim:.4f} "
            f"rse={rec.rse:.6f} structure_dev={rec.structure_dev:.3e}"
        )
    return EXIT_OK


_COMMANDS = {
    "synth": _cmd_synth,
    "complete": _cmd_complete,
    "metrics": _cmd_metrics,
    "ablate": _cmd_ablate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DivergenceError as exc:
        print(f"solver diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

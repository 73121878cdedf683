"""Twist a bundle by powers of a line bundle and watch the cone cohomology die.

    python scripts/sweep_demo.py --model kt --e nil2 --l line --max-n 6
"""
import argparse
from dataclasses import dataclass

from primcoh.bundle import phi_det_poly
from primcoh.io import load_model
from primcoh.vanishing import SweepResult, render_report, sweep, threshold


@dataclass
class SweepConfig:
    model: str = "kt"
    e: str = "nil2"
    l: str = "line"
    max_n: int = 6


def run(cfg: SweepConfig) -> str:
    spec, bundles = load_model(cfg.model)
    e, l = bundles[cfg.e], bundles[cfg.l]
    rows = sweep(e, l, spec, cfg.max_n, compute_dims=True, names=(cfg.e, cfg.l))
    return render_report(SweepResult(spec.name, cfg.e, cfg.l, phi_det_poly(e, l), threshold(e, l), rows))


def main():
    cfg = SweepConfig()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for field in ("model", "e", "l", "max_n"):
        default = getattr(cfg, field)
        p.add_argument("--" + field.replace("_", "-"), type=type(default), default=default)
    args = p.parse_args()
    print(run(SweepConfig(args.model, args.e, args.l, args.max_n)))


if __name__ == "__main__":
    main()

"""Random cone-flat bundles: square-zero check, perturbations, and a histogram
of how often the cone cohomology vanishes versus det(Phi).

    python scripts/random_flatness.py --samples 200 --seed 1
"""
import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass

from primcoh.bundle import check_cone_flat
from primcoh.cone import assemble, cohomology_dims, euler_characteristic, verify_complex
from primcoh.linalg import det
from primcoh.sampling import perturb, random_flat_bundle, random_instance


@dataclass
class Config:
    samples: int = 100
    seed: int = 0
    m_max: int = 6
    r_max: int = 3


def run(cfg: Config) -> Counter:
    rng = random.Random(cfg.seed)
    tally = Counter()
    for _ in range(cfg.samples):
        inst = random_instance(rng, m_max=cfg.m_max)
        b = random_flat_bundle(rng, inst, rng.randint(1, cfg.r_max))
        c = assemble(b, inst.spec)
        assert verify_complex(c)
        dims = cohomology_dims(c)
        assert euler_characteristic(dims) == 0
        key = ("Phi invertible" if det(b.Phi) else "Phi singular",
               "vanishes" if not any(dims) else "nonzero")
        tally[key] += 1
        p = perturb(rng, b)
        flat = check_cone_flat(p, inst.spec).passed
        tally["perturbed, " + ("still flat" if flat else "not flat")] += 1
        assert flat == verify_complex(assemble(p, inst.spec))
    return tally


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--samples", type=int, default=Config.samples)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--m-max", type=int, default=Config.m_max)
    p.add_argument("--r-max", type=int, default=Config.r_max)
    args = p.parse_args()
    start = time.perf_counter()
    tally = run(Config(args.samples, args.seed, args.m_max, args.r_max))
    for key, count in sorted(tally.items(), key=str):
        print(f"{' / '.join(key) if isinstance(key, tuple) else key:40s} {count}")
    print(f"{time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""The three growth regimes of the edge-count hitting time tau_0([c n]).

Below beta/(2 alpha) the time concentrates on the fluid travel time; at the
fixed point it grows logarithmically; above it the renewal estimator tracks
the exponential growth predicted by the entropy exponent.
"""

import argparse
import math
import pathlib
import sys
from dataclasses import dataclass

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from dyner import analytic as an
from dyner import simulate as sim
from dyner.model import ModelParams, closest_integer, derive


@dataclass(frozen=True)
class RegimeConfig:
    seed: int = 20240
    subcritical_n: int = 1000
    subcritical_c: float = 0.3
    subcritical_replicas: int = 100
    boundary_sizes: tuple = (100, 400, 1600)
    boundary_replicas: int = 100
    supercritical_n: int = 40
    supercritical_c: float = 0.8
    direct_replicas: int = 1000
    cycle_replicas: int = 500


def subcritical(cfg: RegimeConfig) -> None:
    d = derive(ModelParams(cfg.subcritical_n, 1.0, 1.0))
    i = closest_integer(cfg.subcritical_c * d.n)
    samples = sim.sample_hitting_times(d, 0, i, cfg.subcritical_replicas, cfg.seed)
    mean = np.mean([s.time for s in samples])
    fluid = an.fluid_time(0.0, cfg.subcritical_c, d)
    print(f"[subcritical] n={d.n}, c={cfg.subcritical_c}: "
          f"MC mean {mean:.4f} vs fluid {fluid:.4f}")


def boundary(cfg: RegimeConfig) -> None:
    print("[boundary] c = beta/(2 alpha): expected O(log n) growth")
    for n in cfg.boundary_sizes:
        d = derive(ModelParams(n, 1.0, 1.0))
        samples = sim.sample_hitting_times(
            d, 0, n // 2, cfg.boundary_replicas, cfg.seed + n
        )
        mean = np.mean([s.time for s in samples])
        exact = an.expected_hitting(0, n // 2, d).value
        print(f"  n={n:5d}: MC mean {mean:7.3f}, exact {exact:7.3f}, "
              f"log n = {math.log(n):.3f}")


def supercritical(cfg: RegimeConfig) -> None:
    d = derive(ModelParams(cfg.supercritical_n, 1.0, 1.0))
    c = cfg.supercritical_c
    est = sim.estimate_hitting_renewal(d, c, cfg.cycle_replicas, cfg.seed)
    direct = sim.sample_hitting_times(d, 0, est.i, cfg.direct_replicas, cfg.seed + 1)
    direct_mean = np.mean([s.time for s in direct])
    exact = an.expected_hitting(0, est.i, d)
    exponent = an.entropy_exponent(c, d)
    print(f"[supercritical] n={d.n}, c={c} (i={est.i}, s={est.s}):")
    print(f"  renewal estimate : {est.estimate.value:.3f} "
          f"(log {est.estimate.log_value:.3f})")
    print(f"  direct MC mean   : {direct_mean:.3f}")
    print(f"  exact recursion  : {exact.value:.3f}")
    print(f"  entropy exponent : exact {exponent.exact:.3f}, "
          f"asymptotic {exponent.asymptotic:.3f}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=RegimeConfig.seed)
    args = parser.parse_args()
    cfg = RegimeConfig(seed=args.seed)
    subcritical(cfg)
    boundary(cfg)
    supercritical(cfg)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

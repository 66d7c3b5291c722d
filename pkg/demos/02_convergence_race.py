"""One seeded run of each scheme on the same moderately conditioned
quadratic, reusing one random stream seed so the schemes face identical
conditions. Prints iterations to target, objective evaluations, and a
slice of the checkpoint trail that the record keeps in place of a full
per-iteration log.
"""

import numpy as np

from randpursuit import (
    CmaConfig,
    CommonConfig,
    Objective,
    RngStream,
    SarpConfig,
    cma11_run,
    epcma_run,
    rp_run,
    sarp_run,
)


def main() -> None:
    n, L = 20, 1e4
    f = Objective("fexp", n, L)
    cfg = CommonConfig(x0=np.ones(n))
    b = f.spectral_bounds()
    print(f"objective fexp n={n} L={L:g}, start f = {f.value(cfg.x0):.4f}, "
          f"target {cfg.target:g}")
    print()

    runs = [
        ("rp", lambda rng: rp_run(f, cfg, rng)),
        ("sarp", lambda rng: sarp_run(f, cfg, SarpConfig(b.mu, b.lmax), rng)),
        ("cma11", lambda rng: cma11_run(f, cfg, CmaConfig.for_dimension(n), rng)),
        ("epcma-4", lambda rng: epcma_run(f, cfg, CmaConfig.for_dimension(n, memory=4), rng)),
    ]
    print(f"{'scheme':<10}{'#ITS':>10}{'#evals':>12}{'final fval':>14}")
    records = {}
    for name, go in runs:
        rec = go(RngStream.from_seed(2024))
        records[name] = rec
        print(f"{name:<10}{rec.its_to_target:>10}{rec.evals:>12}{rec.final_fval:>14.3e}")
    print()

    rec = records["sarp"]
    print(f"sarp checkpoint trail: {len(rec.checkpoints)} entries; every half-decade")
    print("first crossing below each level plus stride samples, head and tail:")
    for it, fval, sigma in rec.checkpoints[:4]:
        print(f"  iter {it:>7}  fval {fval:.6e}  sigma {sigma:.3e}")
    print("  ...")
    for it, fval, sigma in rec.checkpoints[-2:]:
        print(f"  iter {it:>7}  fval {fval:.6e}  sigma {sigma:.3e}")


if __name__ == "__main__":
    main()

"""A small benchmark cell end to end: define the experiment, execute the
seeded replicates, and write the trajectory and summary CSV files that
the figure generator consumes.

Output lands in demos/demo_out. Re-running is byte-identical: run seeds
derive from (base_seed, run_index) only, and aggregation order is fixed.
"""

from pathlib import Path

from randpursuit import ExperimentSpec, Objective, run_experiment

OUT = Path(__file__).resolve().parent / "demo_out"


def main() -> None:
    spec = ExperimentSpec(
        objective=Objective("fexp", 10, 100.0),
        algorithms=("rp", "sarp", "cma11", "epcma-2"),
        runs=5,
        base_seed=1000,
    )
    stats, paths = run_experiment(spec, OUT)

    print(f"{'scheme':<10}{'ok':>6}{'median':>9}{'mean':>10}{'std':>9}{'evals mean':>12}")
    for s in stats:
        print(f"{s.algorithm:<10}{s.success_count:>4}/{s.runs}{s.its_median:>9}"
              f"{s.its_mean:>10.1f}{s.its_std:>9.1f}{s.evals_mean:>12.1f}")
    print()
    print(f"wrote {len(paths)} files to {OUT}:")
    for p in paths[:3]:
        print(f"  {p.name}")
    print(f"  ... and {len(paths) - 4} more trajectory files")
    print(f"  {paths[-1].name}  (summary, one row per scheme)")
    print()
    print("render the cell with the separate figure generator:")
    print(f"  node plotgen/dist/main.js --in {OUT} --func fexp --L 100 --n 10 "
          f"--out fexp_cell.svg")


if __name__ == "__main__":
    main()

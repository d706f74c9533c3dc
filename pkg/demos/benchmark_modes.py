"""Compare the three estimators on the simulation design.

Runs a small replication study for the partial linear fit and the two
reference fits (fully linear, fully nonparametric) and prints the averaged
regression-function error for each setting. Run with:

    python3 demos/benchmark_modes.py

This is a scaled-down version of what `fplreg benchmark` does; bump n and
the replication count for table-quality numbers.
"""

from fplreg import SimConfig, run_benchmark

config = SimConfig(n=80, seed=11)
reps = 10

print(f"n={config.n}, {reps} replications per cell\n")

fplm = run_benchmark(config, m_grid=[1, 2, 3], multipliers=[1, 2, 4],
                     replications=reps, jobs=2)
print("partial linear (rows: m, columns: bandwidth multiplier, mse3):")
for m in (1, 2, 3):
    row = [c for c in fplm.cells if c.m == m]
    cells = "  ".join(f"{c.multiplier:>4g}h: {c.mse3:.4f}" for c in row)
    print(f"  m={m}  {cells}")

flm = run_benchmark(config, m_grid=[1, 2, 3], multipliers=[],
                    replications=reps, mode="flm")
print("\nfully linear on the concatenated curve (by m):")
for c in flm.cells:
    print(f"  m={c.m}  mse3 {c.mse3:.4f}")

npfr = run_benchmark(config, m_grid=[], multipliers=[1, 2, 4],
                     replications=reps, mode="npfr")
print("\nfully nonparametric on the concatenated curve (by multiplier):")
for c in npfr.cells:
    print(f"  {c.multiplier:g}h  mse3 {c.mse3:.4f}")

best = min(c.mse3 for c in fplm.cells)
print(f"\nbest partial linear mse3 {best:.4f} vs "
      f"fully nonparametric best {min(c.mse3 for c in npfr.cells):.4f}")

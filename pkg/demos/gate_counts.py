"""Exponential counts needed to reach a fixed precision on a mixed-field chain.

Compares the worst-case second-order bound against the light-cone bound for a
single-site observable and the color-ordered bound for a bond-correlation
observable.  Light-cone-driven counts flatten out with system size; the
worst-case counts keep growing.
"""

from paulicone.experiments import ExperimentConfig, run_gatecount

cfg = ExperimentConfig(
    experiment="gatecount",
    model="mfi",
    params={"J": 1.0, "h": 0.5, "g": 1.2},
    n=[8, 12, 16, 24, 32],
    t=0.1,
    epsilon=1e-3,
    observable="z:0",
    include_empirical=False,
)

rows = run_gatecount(cfg)

print(f"steps and exponentials for error <= {cfg.epsilon} at t={cfg.t}\n")
print(f"{'n':>4} {'method':>14} {'r':>6} {'exponentials':>13}")
for row in rows:
    print(f"{row['n']:>4} {row['method']:>14} {row['bound_r']:>6} {row['exponential_count']:>13}")

by_method = {}
for row in rows:
    by_method.setdefault(row["method"], []).append(row["exponential_count"])
print("\ncount growth from n=8 to n=32:")
for method, counts in by_method.items():
    print(f"  {method:>14}: x{counts[-1] / counts[0]:.2f}")

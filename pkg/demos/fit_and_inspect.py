"""Fit the partial linear model to a simulated draw and inspect the pieces.

Walks the whole estimation path by hand: draw a dataset, pick the
bandwidth, fit, compare the recovered coefficient curve against the truth,
and predict on fresh units. Run with:

    python3 demos/fit_and_inspect.py
"""

import numpy as np

from fplreg import (
    FitConfig,
    SimConfig,
    cross_validate,
    error_report,
    fit_fplm,
    generate,
    l2_distance,
    predict,
)

# A moderate sample keeps everything under a second. The truth bundle
# records the coefficient curve and the nonlinear component values so we
# can score the fit afterwards.
config = SimConfig(n=150, seed=7)
data, truth = generate(config)
print(f"drew {len(data.X)} units on a {data.X[0].grid.num_points}-point grid")

# m is the number of principal components kept in the coefficient curve;
# the bandwidth multiplier scales the median pairwise distance. Let
# cross-validation pick both from a small grid.
m, mult, table = cross_validate(
    data, m_grid=[1, 2, 3, 4], h_multipliers=[1, 2, 4], folds=5
)
print(f"cross-validation selected m={m}, multiplier={mult}")
for cm, cmult, err in table:
    print(f"  m={cm} mult={cmult:g}  cv error {err:.4f}")

model = fit_fplm(data, FitConfig(m=m, bandwidth_multiplier=mult))
print(f"fitted with bandwidth h={model.h:.3f}")

report = error_report(model, data, truth)
print(f"coefficient curve error   (mse1) {report.mse1:.4f}")
print(f"nonlinear component error (mse2) {report.mse2:.4f}")
print(f"regression function error (mse3) {report.mse3:.4f}")
print(f"L2 distance b_hat to b    {l2_distance(model.b_hat, truth.b_true):.4f}")

# Prediction on units the model never saw.
fresh, fresh_truth = generate(SimConfig(n=5, seed=99))
print("\nheld-out predictions (truth = linear part + g, before noise):")
for i in range(5):
    y_hat = predict(model, fresh.X[i], fresh.T[i])
    y_clean = fresh_truth.linear_values[i] + fresh_truth.g_values[i]
    print(f"  unit {i}: predicted {y_hat:+.3f}   noiseless truth {y_clean:+.3f}")

# The coefficient curve itself is just values on the grid; dump a few.
s = model.b_hat.grid.points
print("\ncoefficient curve samples:")
for idx in np.linspace(0, len(s) - 1, 5, dtype=int):
    print(f"  b_hat({s[idx]:.2f}) = {model.b_hat.values[idx]:+.4f}"
          f"   b({s[idx]:.2f}) = {truth.b_true.values[idx]:+.4f}")

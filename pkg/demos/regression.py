"""Does a second predictor earn its place? Fixed 0.05 versus adaptive level."""

import numpy as np

from adaptive_alpha import CalibrationStrategy
from adaptive_alpha.dataset import Dataset
from adaptive_alpha.decision import run_regression_test

rng = np.random.default_rng(7)
n = 400
weight = rng.normal(30, 7, n)
speed = 80 + 2 * weight + rng.normal(0, 10, n)
mpg = 60 - weight + 0.06 * speed + rng.normal(0, 4, n)
cols = {"mpg": mpg, "weight": weight, "speed": speed}
data = Dataset(tuple(cols), cols, "synthetic")

report, diag = run_regression_test(data, "mpg", ["weight"], ["weight", "speed"],
                                   CalibrationStrategy.simple())
print(f"b = {diag.b:.1f}  (Var(speed) = {diag.variances['speed']:.1f}, "
      f"Cor(weight, speed) = {diag.correlations['speed']['weight']:.2f})")
print(f"p = {report.p_exact:.4f}")
print(f"fixed 0.05      -> {'reject' if report.reject_classical else 'keep'} the smaller model")
print(f"adaptive {report.alpha_adaptive:.4f} -> {'reject' if report.reject_adaptive else 'keep'} the smaller model")

"""Write data/diabetes.csv: the 442x10 diabetes design with columns centered
and scaled to unit Euclidean norm (as distributed in the R `lars` package),
plus the raw disease-progression response in column `y`."""
import sys

import numpy as np
from sklearn.datasets import load_diabetes

NAMES = ["age", "sex", "bmi", "map", "tc", "ldl", "hdl", "tch", "ltg", "glu"]


def main(out_path):
    d = load_diabetes(scaled=False)
    x = d.data - d.data.mean(axis=0)
    x /= np.linalg.norm(x, axis=0)
    with open(out_path, "w") as f:
        f.write(",".join(NAMES + ["y"]) + "\n")
        for row, y in zip(x, d.target):
            f.write(",".join(f"{v:.17g}" for v in row) + f",{y:.17g}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/diabetes.csv")

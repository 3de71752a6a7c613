"""How much does the O2 contraction depend on the chosen representative x?

phi(x nu, -1) = phi(x, -1) for every unit nu, yet the two-piece path through
phi(x, i) becomes a path through phi(x, nu i nu^-1).  This script samples
(x, nu) pairs and prints the largest gap between the two paths on a grid.
"""
import argparse

import numpy as np

from quatcat.cover import contract_O2
from quatcat.hmat import fro_norm
from quatcat.qproj import make_rng, phi, random_unit_quaternion, random_unit_vector
from quatcat.quat import Quaternion


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--samples", type=int, default=200)
    parser.add_argument("--steps", type=int, default=65)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    grid = np.linspace(0.0, 1.0, args.steps)
    gaps = []
    for i in range(args.samples):
        rng = make_rng(args.seed, i)
        x, nu = random_unit_vector(rng, args.n), random_unit_quaternion(rng)
        p, q = phi(x, Quaternion(-1.0)), phi(x.scale(nu), Quaternion(-1.0))
        gaps.append(max(fro_norm(contract_O2(p, t) - contract_O2(q, t)) for t in grid))
    gaps = np.array(gaps)
    print(f"n={args.n} samples={args.samples}")
    print(f"endpoint matrices agree; path gap min {gaps.min():.3e} median {np.median(gaps):.3e} max {gaps.max():.3e}")


if __name__ == "__main__":
    main()

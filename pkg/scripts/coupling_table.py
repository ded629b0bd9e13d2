#!/usr/bin/env python3
"""Print the interatomic coupling constants of each group for one geometry."""

import argparse

import numpy as np

from fluordimer.atomic import Geometry
from fluordimer.config import parse_number
from fluordimer.coupling import GROUPS, build_coupling_table, spvc_constant


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--r12", type=parse_number, default=0.04)
    p.add_argument("--theta", type=parse_number, default=np.pi / 2)
    p.add_argument("--phi", type=parse_number, default=np.pi / 4)
    args = p.parse_args()

    table = build_coupling_table(Geometry(args.r12, args.theta, args.phi))
    print(f"r12 = {args.r12} lambda_pi, theta = {args.theta:.4f}, phi = {args.phi:.4f}")
    print(f"{'group':6} {'|Gamma| / gamma_pi':>20} {'|Omega| / gamma_pi':>20}")
    for group in GROUPS:
        gamma, omega = table.representative(group)
        print(f"{group:6} {abs(gamma):20.6f} {abs(omega):20.6f}")
    print(f"intraatomic pi-pi cross decay: {spvc_constant(1, 2).real:+.6f}")
    print()
    print("all interatomic entries (i, j): Gamma, Omega")
    for i in range(1, 5):
        for j in range(1, 5):
            print(f"  ({i},{j}) {table.labels[i - 1, j - 1, 0, 1]}: "
                  f"{table.gamma_of(i, j, 1, 2):.6g}, {table.omega_of(i, j, 1, 2):.6g}")


if __name__ == "__main__":
    main()

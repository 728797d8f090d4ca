#!/usr/bin/env python3
"""Write a synthetic daily factor/stock panel with the MEx, SMB, HML, IBM schema.

The real series are not redistributable. This panel only mimics their scale,
fat tails and correlation pattern so the analysis pipeline has something to
run on. Output is deterministic for a given seed.
"""
import argparse
import datetime as dt

import numpy as np


def business_days(start, count):
    days = []
    d = start
    while len(days) < count:
        if d.weekday() < 5:
            days.append(d)
        d += dt.timedelta(days=1)
    return days


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=1259)
    ap.add_argument("--seed", type=int, default=20200430)
    ap.add_argument("--out", default="data/synthetic_ff_ibm.csv")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    n = args.rows
    # Student-t with 4 dof, rescaled to unit variance.
    t = lambda size: rng.standard_t(4, size) / np.sqrt(2.0)

    cov = np.array([[1.0, 0.15, 0.14], [0.15, 1.0, 0.22], [0.14, 0.22, 1.0]])
    z = t((n, 3)) @ np.linalg.cholesky(cov).T
    mex = 0.037 + 1.20 * z[:, 0]
    smb = -0.018 + 0.59 * z[:, 1]
    hml = -0.035 + 0.67 * z[:, 2]
    ibm = 0.005 + 0.95 * mex + 0.25 * hml - 0.10 * smb + 1.05 * t(n)

    dates = business_days(dt.date(2015, 5, 1), n)
    with open(args.out, "w") as f:
        f.write("Date,MEx,SMB,HML,IBM\n")
        for i in range(n):
            f.write(f"{dates[i]:%Y%m%d},{mex[i]:.2f},{smb[i]:.2f},{hml[i]:.2f},{ibm[i]:.2f}\n")


if __name__ == "__main__":
    main()

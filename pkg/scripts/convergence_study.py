"""Grid convergence of the leapfrog solver against the exact travelling cosine."""

import argparse
import math

import numpy as np

from fluctoptics.propagate import ModulationModel, ProbeGrid, run


def rms_error(points, cfl, t_end):
    r = run(ProbeGrid(points=points, cfl=cfl), ModulationModel.constant(0.0), t_end=t_end)
    s = r.snapshots[-1]
    return float(np.sqrt(np.mean((s.E - np.cos(10 * (s.z - s.t))) ** 2)))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cfl", type=float, default=0.5)
    ap.add_argument("--periods", type=float, default=1.0, help="probe periods 2 pi / 10 to integrate")
    ap.add_argument("--points", type=int, nargs="+", default=[128, 256, 512, 1024, 2048])
    args = ap.parse_args()

    t_end = args.periods * 2 * math.pi / 10
    prev = None
    print(f"{'N':>6} {'rms error':>12} {'order':>7}")
    for n in args.points:
        e = rms_error(n, args.cfl, t_end)
        order = "" if prev is None else f"{math.log2(prev / e):7.3f}"
        print(f"{n:6d} {e:12.4e} {order}")
        prev = e


if __name__ == "__main__":
    main()

"""Squeezed-beam <:E^2:> and induced birefringence over two oscillation periods.

Writes fig1.csv (t, e2, dn, dn_quoted) and prints the extrema and the
subvacuum windows in the first period.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from fluctoptics.media import cdgeas2, delta_n_quantum, quantum_coefficient
from fluctoptics.qstates import SqueezedBeam, e2_squeezed_beam, subvacuum_windows
from fluctoptics.tables import csv_text, write_text
from fluctoptics.units import Quantity, um


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=float, default=1.5)
    ap.add_argument("--points", type=int, default=801)
    ap.add_argument("--out", type=Path, default=Path("fig1.csv"))
    args = ap.parse_args()

    beam = SqueezedBeam.in_medium(10.6, 3.5, delta_k_over_k=1e-3, delta_theta=0.1, q=args.q)
    period = math.pi / beam.Omega
    t = np.linspace(0, 2 * period, args.points)
    e2 = e2_squeezed_beam(beam, t, 0.0)
    m = cdgeas2()
    dn = delta_n_quantum(m, e2)
    dn_quoted = delta_n_quantum(m, e2, coefficient=Quantity(m.metadata["quoted_coefficient"], um(4)))
    write_text(args.out, csv_text({"t": t, "e2": e2.value, "dn": dn, "dn_quoted": dn_quoted}))

    print(f"coefficient computed {quantum_coefficient(m).value:.4e} um^4, quoted {m.metadata['quoted_coefficient']:.2e}")
    print(f"e2 range      [{e2.value.min():.4e}, {e2.value.max():.4e}] um^-4")
    print(f"dn_quoted range [{dn_quoted.min():.4e}, {dn_quoted.max():.4e}]")
    w = subvacuum_windows(beam, 0.0, period)
    print(f"subvacuum fraction {w.fraction:.6f}; windows in first period:")
    for a, b in w.intervals:
        print(f"  {a:.6f} .. {b:.6f} um")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

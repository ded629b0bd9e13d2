#!/usr/bin/env python3
"""Numbers behind the two acceptance checks that do not pass as stated.

1. Intraatomic coupling at large distance: the reduced atom-1 state with the
   intraatomic couplings on vs off, as a function of r12 and with the
   interatomic couplings removed.
2. Curve pairing near the line centre: where on the central window the
   deviation between the full and the intraatomic-suppressed spectrum sits,
   and the slowest relaxation rates with and without those couplings.
"""

import numpy as np

from fluordimer.atomic import DriveField, Geometry
from fluordimer.coupling import GroupMask, build_coupling_table
from fluordimer.liouvillian import build_liouvillian, eigenvalues, partial_trace, steady_state
from fluordimer.spectrum import SpectrumTermFlags, incoherent_pi_spectrum


def trace_norm(a):
    return np.abs(np.linalg.eigvalsh(0.5 * (a + a.conj().T))).sum()


def reduced_difference(drive, geometry, scales=(1, 1, 1, 1, 1)):
    states = []
    for spvc in (True, False):
        table = build_coupling_table(geometry, GroupMask(scales, spvc))
        states.append(partial_trace(steady_state(build_liouvillian(drive, geometry, table)), 1))
    return trace_norm(states[0] - states[1])


def intraatomic_at_distance():
    drive = DriveField(6.0, -14.0)
    print("trace-norm difference of reduced atom-1 states, intraatomic couplings on vs off")
    print(f"{'r12':>8} {'all groups':>12} {'no groups':>12}")
    for r in (0.09, 1.0, 3.0, 10.0, 30.0, 100.0):
        g = Geometry(r)
        print(f"{r:8.2f} {reduced_difference(drive, g):12.3e} {reduced_difference(drive, g, (0,) * 5):12.3e}")


def central_pairing():
    w = np.linspace(-450, 450, 2001)
    drive, g = DriveField(10, 0), Geometry(0.04)
    full = incoherent_pi_spectrum(w, drive, g).total
    no_eom = incoherent_pi_spectrum(w, drive, g, GroupMask(spvc_eom=False)).total
    no_p3 = incoherent_pi_spectrum(w, drive, g, flags=SpectrumTermFlags.without("P3")).total
    win = np.abs(w) <= 50
    dev_eom, dev_p3 = np.abs(full - no_eom), np.abs(full - no_p3)
    k = np.argmax(np.where(win, dev_eom, 0))
    print(f"\ncentral window: largest no-spvc deviation {dev_eom[k]:.3e} at omega = {w[k]}")
    print(f"ratio on [-50, 50]: {dev_eom[win].max() / dev_p3[win].max():.3f}")
    off_centre = win & (w != 0)
    print(f"ratio excluding omega = 0: {dev_eom[off_centre].max() / dev_p3[off_centre].max():.3f}")
    for spvc in (True, False):
        table = build_coupling_table(g, GroupMask(spvc_eom=spvc))
        rates = np.sort(-eigenvalues(build_liouvillian(drive, g, table)).decay)
        print(f"slowest nonzero relaxation rate, intraatomic {'on ' if spvc else 'off'}: {rates[1]:.4g}")


if __name__ == "__main__":
    intraatomic_at_distance()
    central_pairing()

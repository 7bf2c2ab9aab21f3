# The particle-like energy-momentum relation, measured on the grid.
#
# A solitary wave boosted to velocity v is sampled on a Cartesian grid and
# its energy/momentum are measured by direct sums of the Hamiltonian density
# and -Re(psi_dot conj(grad psi)).  The claim under test:
#
#     E_v = E_0 / sqrt(1 - v^2),     P_v = E_0 v / sqrt(1 - v^2),
#
# i.e. the invariant mass E_v sqrt(1 - v^2) is velocity-independent and
# equals the rest energy.
#
#   python demos/relativistic_energy_momentum.py
# -> writes outputs/boost_scan_1d.csv

import os

import numpy as np

from solwave import (PotentialSpec, boost_scan, compute_functionals,
                     find_ground_state, grid_for, scan_to_csv)

CUBIC = PotentialSpec(mass_sq=1.0, terms=((1.0, 4),), amplitude_cap=8.5)


def main():
    os.makedirs("outputs", exist_ok=True)
    wave = find_ground_state(CUBIC, 0.8, 1)
    rep = compute_functionals(wave)
    print(f"1D rest energy E_0 = {rep.e0:.8f}\n")

    grid = grid_for(wave, [0.0], 0.0, 0.02)
    speeds = [0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9]
    rows = boost_scan(wave, CUBIC, [[v] for v in speeds], grid, report=rep)
    scan_to_csv(rows, "outputs/boost_scan_1d.csv")

    print(f"{'v':>5} {'E_meas':>10} {'P_meas':>10} {'E sqrt(1-v^2)':>14} "
          f"{'relE':>9} {'relP':>9}")
    for row in rows:
        v = float(np.linalg.norm(row.v))
        mass = row.e_measured * np.sqrt(1 - v**2)
        print(f"{v:>5.2f} {row.e_measured:>10.5f} {row.p_measured[0]:>10.5f} "
              f"{mass:>14.8f} {row.rel_err_e:>9.1e} {row.rel_err_p:>9.1e}")

    print("\nsame in n=2 (boost along axis 1, transverse momentum must vanish):")
    wave2 = find_ground_state(CUBIC, 0.8, 2)
    rep2 = compute_functionals(wave2)
    grid2 = grid_for(wave2, [0.0, 0.0], 0.0, 0.05)
    for row in boost_scan(wave2, CUBIC, [[0.3, 0.0], [0.6, 0.0]], grid2, report=rep2):
        print(f"  v={row.v[0]:.1f}: relE={row.rel_err_e:.1e} "
              f"relP={row.rel_err_p:.1e} P_transverse={row.p_measured[1]:.1e}")


if __name__ == "__main__":
    main()

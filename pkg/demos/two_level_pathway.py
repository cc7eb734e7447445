"""Minimal walkthrough: carry a two-level ground state into the excited state.

The register is one electronic qubit plus one photon qubit.  We ramp the
photon frequency linearly to twice the excitation energy while switching the
dipole coupling on and off with a sin^3 envelope, then post-select the photon
vacuum.  Longer total evolution time -> higher final fidelity.
"""

import numpy as np

from exasp.analysis import fidelity_report
from exasp.coupling import couple
from exasp.models import TwoLevelParams, build_two_level, exact_diagonalize
from exasp.pathway import PathwaySchedule, adiabatic_time_bound
from exasp.propagator import evolve, prepare_initial
from exasp.experiment import write_trace_csv
from exasp.statevector import init_product

eps = 1.0
system = build_two_level(TwoLevelParams(epsilon=eps, mu=1.0))
coupled = couple(system, polarization=(0, 0, 1))

spectrum = exact_diagonalize(system)
ground, excited = spectrum[0][1], spectrum[1][1]
print(f"electronic levels: {spectrum[0][0]:+.3f}, {spectrum[1][0]:+.3f}")

psi0 = prepare_initial(coupled, ground)       # |ground> (x) |1 photon>
target = init_product(excited, 0)             # |excited> (x) |0 photons>

print("\n  T    final energy   fidelity   p(photon=0)")
for total_time in (5.0, 10.0, 50.0):
    sched = PathwaySchedule(omega_max=4 * eps, lambda_max=0.5,
                            total_time=total_time, n_steps=100)
    final, trace = evolve(coupled, sched, psi0, method="exact", target=target)
    rep = fidelity_report(final, coupled, excited)
    print(f"{total_time:5.0f}   {trace.final.e_total:+.4f}        "
          f"{rep.fid_raw:.4f}     {rep.p0:.4f}")
    if total_time == 50.0:
        write_trace_csv(trace, "two_level_T50.csv")

sched = PathwaySchedule(omega_max=4 * eps, lambda_max=0.5, total_time=1.0, n_steps=1)
bound = adiabatic_time_bound(coupled, sched, grid_size=200)
print(f"\nadiabatic-theorem time scale (to be far exceeded): {bound:.2f}")
print("wrote two_level_T50.csv")

"""Which projective measurements extract all the phase information from a qubit?

A pure qubit in the x-z plane is rotated about y.  Any projective measurement
whose axis lies in that plane reaches the quantum Fisher information, so the
optimal set is a whole circle.  Shrink the Bloch vector to length 0.8 and the
circle collapses to a single axis, perpendicular to the state.
"""
import numpy as np

from qmet import qubit


def sweep(s):
    fam = qubit.optimal_q_solutions(s)
    print(f"|s| = {np.linalg.norm(s):.2f}  family = {fam.kind}  QFI = {qubit.qubit_qfi(s):.4f}")
    print("   angle   CFI      worst residual of the +-q pair")
    for deg in range(0, 181, 15):
        q = fam.direction(np.deg2rad(deg))
        povm = qubit.QubitPovmSet.projective(q)
        cfi = qubit.qubit_cfi(s, 0.0, povm)
        res = max(qubit.element_residual(s, e)[1] for e in povm)
        print(f"   {deg:5d}   {cfi:.4f}   {res:.1e}")
    print()


sweep(np.array([1.0, 0.0, 0.0]))
sweep(np.array([0.8, 0.0, 0.0]))

# counting the two output ports is optimal only for pure or equatorial states
for s in ((0.6, 0, 0.8), (0.6, 0, 0.0), (0.6, 0, 0.4)):
    print(f"s = {s}: imbalance CFI {qubit.imbalance_cfi_qubit(s):.4f} vs QFI {qubit.qubit_qfi(s):.4f}")

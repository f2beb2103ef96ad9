"""Counting particles on a two-qubit Werner state.

The state mixes the twin-Fock ket |1,1> (weight alpha) with white noise.
Counting particles in each arm after the interferometer is optimal only for
the pure twin-Fock state; for any noise it falls short of the quantum Fisher
information at every phase.  The SLD eigenbasis always saturates it.

Pass a path to also write the curves as CSV (same columns as
``qmet werner-fig2``).
"""
import sys

import numpy as np

from qmet import fisher, werner

alphas = (0.5, 0.95, 1.0)
thetas = np.linspace(0, np.pi, 201)
table = werner.fig2_table(alphas, thetas)

header = ["theta"] + [f"{k}_{a:g}" for a in alphas for k in ("cfi_imb", "qfi")]
if len(sys.argv) > 1:
    np.savetxt(sys.argv[1], table, delimiter=",", header=",".join(header), comments="", fmt="%.12g")
    print(f"wrote {sys.argv[1]}")

for k, a in enumerate(alphas):
    cfi = table[:, 1 + 2 * k]
    print(f"alpha={a:<5g} QFI={werner.werner_qfi(a):.4f}  best counting CFI={cfi.max():.4f}"
          f"  at theta={thetas[cfi.argmax()]:.3f}")

a, th = 0.7, 0.4
rho, drho = werner.werner_state(a, th), werner.werner_derivative(a, th)
print(f"\nalpha={a}, theta={th}")
print(f"  counting CFI      {fisher.cfi_povm(rho, drho, werner.fock_povm()):.6f}")
print(f"  SLD eigenbasis    {fisher.cfi_povm(rho, drho, werner.optimal_povm(a, th)):.6f}")
print(f"  QFI               {werner.werner_qfi(a):.6f}")

v = werner.disentangling_map()
print("\nthe disentangling map sends the SLD eigenstates at theta=0 to Fock states:")
for psi in werner.sld_eigensystem(a, 0.0):
    print("  ", np.round(np.abs(v @ psi.coeffs), 12))

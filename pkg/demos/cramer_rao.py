"""Does maximum likelihood reach the Cramer-Rao bound?

Each experiment draws m outcomes, estimates the phase by maximum likelihood,
and is repeated many times.  The spread of the estimates is compared with
1/sqrt(m F).  With F the Fisher information of the measurement actually
performed the ratio is close to 1; with the quantum Fisher information in
its place, a sub-optimal measurement shows a ratio above 1.
"""
import numpy as np

from qmet import estimate, werner

m, trials, seed = 10_000, 400, 2024

runs = [
    ("qubit, optimal projector", estimate.qubit_optimal_model((1, 0, 0), 0.3), 1.0, 0.3),
    ("Werner alpha=1, counting", estimate.werner_fock_model(1.0), 4.0, 0.5),
    ("Werner alpha=0.5, counting", estimate.werner_fock_model(0.5), werner.werner_imbalance_cfi(0.5, np.pi / 4), np.pi / 4),
    ("same, against the QFI", estimate.werner_fock_model(0.5), werner.werner_qfi(0.5), np.pi / 4),
]
print(f"m={m}, trials={trials}, seed={seed}")
print(f"{'model':30s} {'F':>7s} {'std':>10s} {'bound':>10s} {'ratio':>7s}")
for name, model, f, th in runs:
    r = estimate.crlb_trial(model, f, th, m, trials, seed)
    print(f"{name:30s} {f:7.4f} {r.empirical_std:10.6f} {r.crlb:10.6f} {r.ratio:7.3f}")

print("\nspread versus shots (qubit):")
model = estimate.qubit_optimal_model((1, 0, 0), 0.3)
for shots in (100, 1000, 10_000):
    r = estimate.crlb_trial(model, 1.0, 0.3, shots, trials, seed)
    print(f"  m={shots:6d}  std={r.empirical_std:.5f}  1/sqrt(m)={r.crlb:.5f}")

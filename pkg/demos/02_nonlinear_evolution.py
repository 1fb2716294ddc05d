"""Nonlinear state evolution through the CNOT-then-SWAP loop.

Ordinary quantum mechanics is linear: no unitary can make two states more
distinguishable. A qubit that interacts with its own future self is not
bound by that rule. The loop state depends on the input, which makes the
effective input -> output map quadratic:

    a|H> + e^{i phase} b|V>   ->   (a^4 + b^4)|H><H| + 2 a^2 b^2 |V><V|

This script sweeps the input polar angle, compares two distinguishability
measures against the standard-QM baseline, and shows two signature
effects: the fixed-measurement mismatch probability beats the baseline
for every input closer to |H> than trace distance 1/sqrt(2), while the
trace distance itself only shows the advantage after iterating the
circuit at least three times. Any input phase is erased along the way.

Run: python demos/02_nonlinear_evolution.py
"""

import math

from ctcsim import PureQubit, iterate_circuit, nonlinearity_sweep, trace_distance


def main():
    print("Distinguishability of psi(phi) from the reference |H>, after one pass:")
    print(f"  {'phi':>8}  {'L loop':>9} {'L std QM':>9}  {'D loop':>9} {'D std QM':>9}  advantage")
    for k in range(0, 9):
        phi = k * math.pi / 8
        rec = nonlinearity_sweep([phi], [0.0], iterations=[])[0]
        marker = "L only" if rec.L_ctc_sigma_z > rec.L_qm + 1e-12 else ""
        print(f"  {phi:8.4f}  {rec.L_ctc_sigma_z:9.5f} {rec.L_qm:9.5f}  "
              f"{rec.D_ctc:9.5f} {rec.D_qm:9.5f}  {marker}")
    print()
    print("The mismatch measure L sees the nonlinearity for phi < pi/2; the")
    print("trace distance D does not (D loop < D std QM there).")
    print()

    print("Feeding the output back through the loop amplifies the effect")
    print("(input polar angle pi/4, reference stays |H>):")
    psi = PureQubit(math.pi / 4)
    d_qm = math.sin(math.pi / 8)
    print(f"  standard-QM trace distance to beat: {d_qm:.5f}")
    for n in range(1, 6):
        out = iterate_circuit(psi, n)
        ref = iterate_circuit(PureQubit(0.0), n)
        d = trace_distance(out, ref)
        note = "  <-- first pass where D beats standard QM" if (
            d > d_qm and trace_distance(iterate_circuit(psi, n - 1), ref) <= d_qm
        ) else ""
        print(f"  after {n} pass(es): D = {d:.5f}{note}")
    print()

    print("Phase erasure: outputs for equal polar angle, different phases:")
    base = None
    for k in range(4):
        phase = k * math.pi / 2
        rec = nonlinearity_sweep([math.pi / 4], [phase], iterations=[])[0]
        out = iterate_circuit(PureQubit(math.pi / 4, phase), 1)
        if base is None:
            base = out
        print(f"  phase {phase:6.4f}: output distance to phase-0 output = "
              f"{trace_distance(out, base):.2e}")


if __name__ == "__main__":
    main()

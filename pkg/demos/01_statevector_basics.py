# Statevector simulation basics: gates, Bell states and fidelity overlaps.
import numpy as np

from qkevo import CNot, Hadamard, Rotation, apply_circuit, apply_gate, \
    fidelity_overlap, new_zero_state

# |0> through a Hadamard
state = apply_gate(new_zero_state(1), Hadamard(0))
print("H|0>              :", np.round(state.amplitudes, 4))

# RZ acts as a pure phase on |0>
state = apply_gate(new_zero_state(1), Rotation("Z", 0, np.pi / 3))
print("RZ(pi/3)|0>       :", np.round(state.amplitudes, 4))

# Bell state: H then CNOT (qubit 0 is the least significant bit)
bell = apply_circuit(new_zero_state(2), [Hadamard(0), CNot(0, 1)])
print("Bell state        :", np.round(bell.amplitudes, 4))
print("norm              :", bell.norm())

# Fidelity overlap |<psi_a|psi_b>|^2 between two 1-qubit feature maps.
# For the H+RZ map this is exactly cos^2((x1 - x2) / 2).
x1, x2 = 0.9, 2.4
fid = fidelity_overlap([Hadamard(0), Rotation("Z", 0, x1)],
                       [Hadamard(0), Rotation("Z", 0, x2)], n_qubits=1)
print("fidelity          :", fid)
print("cos^2((x1-x2)/2)  :", np.cos((x1 - x2) / 2) ** 2)

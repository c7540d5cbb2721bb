# Genome bit strings -> feature-map templates -> bound circuits.
#
# A genome for N qubits has N + C(N,2) + 4 bits:
#   [rotation flags | 2 axis bits | pair flags | 2 depth bits]
import numpy as np

from qkevo import Genome, bind, decode, gate_counts, genome_length

print("genome length for 3 qubits:", genome_length(3))

# The 10-bit example: all rotations on, axis Z, pairs (0,2) and (1,2), depth 3.
genome = Genome.from_string("1111001110", n_qubits=3)
template = decode(genome)
print("template:", template)

counts = gate_counts(template)
print(f"local gates: {counts.local}, cnot gates: {counts.cnot}")

# Bind a data vector: angles become x_k for rotations and x_i*x_j inside
# each CNOT-RZ-CNOT entangling block.
x = np.array([0.4, 1.1, 2.0])
ops = bind(template, x)
print(f"bound circuit has {len(ops)} gates; first repetition:")
for op in ops[: len(ops) // template.depth]:
    print("  ", op)

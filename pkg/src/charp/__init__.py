"""charp: exact homological algebra over small characteristic-p coefficient rings.

Subpackages by theme:

- ``rings``, ``linalg``, ``witt``: coefficient rings (prime/Galois fields,
  Z/p^e, Galois rings, length-2 Witt vectors) and exact linear algebra.
- ``complexes``: bounded cochain complexes, cohomology, cones, truncations,
  connecting homomorphisms.
- ``doldkan``: the Dold-Kan correspondence and derived symmetric / divided /
  exterior powers with their natural maps.
- ``cosalg``: cosimplicial commutative algebras, nerve cochain algebras,
  Frobenius and the degree 0/1 power operations.
- ``groups``, ``gcoh``: finite-group and lattice cohomology, semidirect
  reduction, extension classes of equivariant complexes.
- ``roots``: certified weight-combinatorics searches and the quadratic field
  search.
- ``scenarios``, ``cli``: the scenario registry and verification CLI.
"""

__version__ = "0.1.0"

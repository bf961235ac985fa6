"""Workbench for hidden-sum trapdoors in substitution-permutation ciphers.

Submodules:
  gf2         exact GF(2) linear algebra and GF(2^m) field arithmetic
  vbf         vectorial Boolean functions and differential properties
  hidden_sum  regular affine group actions and the sums they induce
  cipher      the SPN engine and the bundled 6-bit trapdoored instance
  attack      affine reconstruction of the cipher from 7 chosen plaintexts
  corpus      pinned function corpus for the property sweeps
  reproduce   the end-to-end verification battery
"""

__version__ = "0.1.0"

"""Exact computations with the polynomial representation of the rank-n (C^vee_n, C_n) double affine Hecke algebra."""

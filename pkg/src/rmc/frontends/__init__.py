"""Compilers from classical models of computation into machine terms."""

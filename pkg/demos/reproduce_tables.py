"""Rerun the fixture experiments and print them beside the published numbers."""
from symplectic_sr import reproduce_tables

print(reproduce_tables().format())

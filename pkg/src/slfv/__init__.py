"""Genealogies under a two-scale spatial population model on a 2-D torus.

The package simulates, backward in time, the marked-partition ancestral
process of a two-locus sample under frequent small reproduction events
and rare large extinction/recolonization events, and evaluates the
matching large-torus closed-form laws (coalescence-time survival,
identity by descent).
"""

__version__ = "0.1.0"

"""Cubical coherence for abstract rewriting systems: cubical omega-groupoid
cells, contractions and their fillers, confluence fillers, and cubical
polygraphic resolutions."""

__version__ = "0.1.0"

"""rulewb: association-rule mining with ontology-based post-processing."""

__version__ = "0.1.0"

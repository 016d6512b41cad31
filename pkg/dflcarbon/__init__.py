"""Decentralized federated learning simulator with per-node energy and carbon accounting."""

__version__ = "0.1.0"

"""Test suite for the dflcarbon simulator."""

"""Test suite for reason_cells."""

"""Experiment sweeps, configuration and CSV/SVG output."""

"""Relay power, beamforming and time-split optimizers."""

"""Configuration, sweep and verification drivers."""

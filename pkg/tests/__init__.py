"""Unit test package for wprelay."""

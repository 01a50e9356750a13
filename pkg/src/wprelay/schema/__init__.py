"""Pydantic schemas shared across wprelay modules."""

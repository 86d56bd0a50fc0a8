"""Experiment services and schemas."""

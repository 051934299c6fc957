"""Randomized load balancing with phase-type service times."""

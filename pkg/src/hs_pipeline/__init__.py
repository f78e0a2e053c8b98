"""Numerical core: HS geometry, separable-set oracles, projection and witnesses."""

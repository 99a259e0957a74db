"""Workshop air-quality monitoring stack.

Simulated DHT-11 / MQ-135 sensors publish readings over MQTT into a
channel-based time-series store that computes a Gaussian salubrity index,
raises threshold alerts and serves feeds, reports and model datasets over
REST.
"""

__version__ = "0.1.0"

from .salubrity import (  # noqa: F401
    Label,
    SalubrityConfig,
    SalubrityScore,
    SurfaceGrid,
    classify_salubrity,
    gaussian_factor,
    salubrity,
    surface_grid,
)

"""Discrete-event simulator for a vehicle exhaust monitoring sensor network.

A battery-powered vehicle reports emission readings over a mesh of roadside
base stations to a central server, under one of four MAC protocols
(802.11 DCF, 802.15.4 CSMA-CA, a duty-cycled sleep/listen MAC, and TDMA),
with on-demand routing, Manhattan-grid mobility, a two-ray ground radio
model, and per-mode energy accounting.
"""

from .engine import Simulation, run_simulation
from .scenario import Scenario, load_scenario, validate

__version__ = "0.1.0"

__all__ = ["Simulation", "run_simulation", "Scenario", "load_scenario",
           "validate", "__version__"]

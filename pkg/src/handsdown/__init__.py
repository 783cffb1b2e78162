"""Hands-down ten-finger typing on passive touch surfaces.

Subsystems: key layout geometry, touch-event pipeline, lexicon + character
n-gram LM, synthetic noise corpus generation, decoder backends, evaluation
metrics, and a realtime typing service.
"""

__version__ = "0.1.0"

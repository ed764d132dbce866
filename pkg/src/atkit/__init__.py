"""atkit: assistance toolkit for profile-adapted pedagogical devices.

Collects a multi-dimensional teacher profile and a teaching-unit
description, runs externalized production rules over a fact store to
derive adaptation directives, and generates a concrete pedagogical
device: per-team blog scaffolds, the teacher's e-suitcase and a toolbox
manifest.
"""

__version__ = "0.1.0"

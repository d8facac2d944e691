"""Picture-description tutoring engine.

Runs scaffolded dialogic sessions over annotated scenes, evaluates
student responses against target vocabulary, mediates pluggable speech
and dialogue backends, and ships an evaluation toolkit plus a REST
service.
"""

__version__ = "0.1.0"

"""Reversible structured flowcharts.

Executable big-step semantics, a partial-injection denotational semantics
with a point-level evaluator and a finite extensional kernel, a program
inverter, and a conformance harness tying them together.
"""

__version__ = "0.1.0"

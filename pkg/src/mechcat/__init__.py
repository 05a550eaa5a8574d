"""Enumeration of spatial manipulator topologies over R, P, C and S joints."""

__version__ = "0.1.0"

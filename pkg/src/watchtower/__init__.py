"""Goal-oriented software project control center.

A repository of reusable control components (data types, functions, views,
web forms, data connectors), a composition engine that wires them into a
per-project processing chain, an incremental execution engine that keeps
indicators current as measurement data arrives, and an HTTP service with
role-filtered views.
"""

__version__ = "0.1.0"

"""molview: a molecular visualization engine.

Subpackages:

- ``molio``   -- structure/trajectory file formats, bond perception, PDB fetch
- ``model``   -- scene tree, selections, representations, session persistence
- ``geom``    -- impostor batches, SES fields, marching cubes, cartoon meshes
- ``render``  -- headless software deferred renderer and cameras
- ``analyze`` -- measurements, Kabsch superposition, CE structural alignment
- ``bench``   -- benchmark harness and synthetic system generator
- ``serve``   -- WebSocket geometry streaming service
"""

__version__ = "0.1.0"

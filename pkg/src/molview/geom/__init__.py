"""Renderable geometry builders: impostor batches, SES meshes, cartoons."""

from .batches import (CylinderBatch, SphereBatch, atom_colors,
                      build_sas_batch, build_stick_batches, build_vdw_batch,
                      split_cylinder_batch, split_sphere_batch)
from .cartoon import (Structure, assign_secondary_structure,
                      build_cartoon_mesh)
from .elements import vdw_radii, vdw_radius
from .mc import marching_cubes
from .mesh import TriMesh, empty_mesh, to_obj
from .ses import ScalarField, SesParams, compute_ses_field

__all__ = [
    "SphereBatch", "CylinderBatch", "TriMesh", "ScalarField", "SesParams",
    "Structure", "vdw_radius", "vdw_radii", "atom_colors",
    "build_vdw_batch", "build_sas_batch", "build_stick_batches",
    "build_cartoon_mesh", "build_ses_mesh", "assign_secondary_structure",
    "compute_ses_field", "marching_cubes", "to_obj", "empty_mesh",
    "split_sphere_batch", "split_cylinder_batch",
]


def build_ses_mesh(mol, sel, params=None, spec=None, object_id=0,
                   voxel_budget=None):
    """SES mesh for a selection, vertex-colored by the nearest atom."""
    import numpy as np
    from scipy.spatial import cKDTree

    kwargs = {}
    if voxel_budget is not None:
        kwargs["voxel_budget"] = voxel_budget
    field = compute_ses_field(mol, sel, params, **kwargs)
    mesh = marching_cubes(field, 0.0)
    mesh.object_id = object_id
    if mesh.n_vertices and spec is not None:
        idx = getattr(sel, "atom_indices", sel)
        idx = np.asarray(idx, dtype=np.int64)
        per_atom = atom_colors(mol, idx, spec)
        _, nearest = cKDTree(mol.coords[idx]).query(mesh.vertices, k=1, workers=-1)
        mesh.colors = per_atom[nearest]
    return mesh

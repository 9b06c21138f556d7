"""Quasiconformal surface maps: coefficients, flows, registration."""

from ._bhflow import (
    Chart,
    Mesh,
    curvatures,
    disk_chart,
    disk_embed,
    extract_bc,
    load_mesh,
    map_variation,
    reconstruct_map,
    register_features,
    register_geometry,
    register_landmarks,
    sphere_chart,
)

__all__ = [
    "Chart",
    "Mesh",
    "curvatures",
    "disk_chart",
    "disk_embed",
    "extract_bc",
    "load_mesh",
    "map_variation",
    "reconstruct_map",
    "register_features",
    "register_geometry",
    "register_landmarks",
    "sphere_chart",
]

"""Concrete space models and a small factory for configuration blocks."""
from .base import SpaceModel, UniformModel
from .grassmann import (
    Grassmannian,
    chordal_distance,
    grassmann_bounds,
    grassmann_constant,
    grassmann_projection_cert,
    grassmann_volume,
    principal_angles,
)
from .interval import UnitInterval
from .selfsimilar import (
    SelfSimilarSpace,
    cantor_accumulation_interval,
    cantor_exact_vn,
    cantor_set,
    selfsimilar_build,
    selfsimilar_certs,
)
from .sphere import (
    Hypersphere,
    VonMisesFisher,
    circle_closed_forms,
    sphere_bounds,
    sphere_cap_measure,
    sphere_certificates,
    vmf_functionals,
)


def build_space(block):
    """Construct a SpaceModel from a mapping such as {"type": "sphere", "d": 3}."""
    kind = block.get("type")
    if kind == "interval":
        return UnitInterval(k=float(block.get("k", 2.0)))
    if kind == "sphere":
        return Hypersphere(int(block["d"]), float(block.get("r", 1.0)))
    if kind == "grassmann":
        return Grassmannian(
            block.get("field", "R"), int(block["r"]), int(block.get("s", block["r"])), int(block["d"])
        )
    if kind == "selfsimilar":
        ambient = bool(block.get("ambient", True))
        if block.get("preset") == "cantor":
            return SelfSimilarSpace(cantor_set(), k=float(block.get("k", 2.0)), ambient=ambient)
        maps = block.get("similarities")
        if not maps:
            raise ValueError("space.similarities is required when no preset is given")
        sset = selfsimilar_build(
            [(m["ratio"], m.get("orthogonal", [[1.0]]), m["translation"]) for m in maps],
            diam=block.get("diam"),
            c_sub=block.get("c_sub"),
        )
        return SelfSimilarSpace(sset, k=float(block.get("k", 2.0)), ambient=ambient)
    raise ValueError(f"unknown space.type {kind!r}")


def build_distribution(space, block):
    """Source distribution on ``space``; defaults to the reference measure."""
    block = block or {"type": "uniform"}
    kind = block.get("type", "uniform")
    if kind == "uniform":
        return UniformModel(space)
    if kind == "vmf":
        return VonMisesFisher(space, float(block["kappa"]), block.get("mean_direction"))
    raise ValueError(f"unknown distribution.type {kind!r}")


__all__ = [
    "SpaceModel",
    "UniformModel",
    "UnitInterval",
    "Hypersphere",
    "VonMisesFisher",
    "Grassmannian",
    "SelfSimilarSpace",
    "build_space",
    "build_distribution",
    "cantor_accumulation_interval",
    "cantor_exact_vn",
    "cantor_set",
    "chordal_distance",
    "circle_closed_forms",
    "grassmann_bounds",
    "grassmann_constant",
    "grassmann_projection_cert",
    "grassmann_volume",
    "principal_angles",
    "selfsimilar_build",
    "selfsimilar_certs",
    "sphere_bounds",
    "sphere_cap_measure",
    "sphere_certificates",
    "vmf_functionals",
]

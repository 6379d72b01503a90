"""Algorithm registry: names, factories, and option schemas.

The CLI and the HTTP service resolve algorithms here.  Registering a new
algorithm makes it available on both surfaces; see the extension notes in
layout/base.py.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .layout.base import LayoutAlgorithm, LayoutOptions
from .layout.circular import CircularLayout, CiseLayout
from .layout.cluster import ClusterLayout
from .layout.cose import CoseLayout, SpringLayout
from .layout.sugiyama import SugiyamaLayout


class UnknownAlgorithmError(Exception):
    """The requested algorithm name is not registered."""


@dataclass
class OptionSpec:
    name: str
    kind: str  # "number" or "integer"
    default: float
    description: str

    def as_dict(self) -> dict[str, object]:
        default = int(self.default) if self.kind == "integer" else self.default
        return {
            "name": self.name,
            "type": self.kind,
            "default": default,
            "description": self.description,
        }


@dataclass
class AlgorithmEntry:
    name: str
    factory: Callable[[], LayoutAlgorithm]
    description: str
    options: list[OptionSpec] = field(default_factory=list)


_SHARED_OPTIONS = [
    OptionSpec("idealEdgeLength", "number", 50.0, "rest length of intra-graph edges"),
    OptionSpec("iterations", "integer", 1000, "iteration cap per force phase"),
    OptionSpec("gravityStrength", "number", 0.4, "pull toward the graph barycenter"),
    OptionSpec("coolingInitial", "number", 1.0, "initial cooling factor; decays linearly"),
    OptionSpec("convergenceEps", "number", 0.5, "stop when mean displacement drops below this"),
]
_FORCE_OPTIONS = [
    OptionSpec("springConstant", "number", 0.45, "spring stiffness"),
    OptionSpec("repulsionConstant", "number", 4500.0, "inverse-square repulsion strength"),
]

_REGISTRY: dict[str, AlgorithmEntry] = {}
_ALIASES = {"hierarchical": "sugiyama"}


def register(entry: AlgorithmEntry) -> None:
    _REGISTRY[entry.name] = entry


def resolve(name: str) -> AlgorithmEntry:
    canonical = _ALIASES.get(name, name)
    entry = _REGISTRY.get(canonical)
    if entry is None:
        known = ", ".join(sorted(_REGISTRY))
        raise UnknownAlgorithmError(f"unknown algorithm {name!r}; expected one of: {known}")
    return entry


def algorithm_names() -> list[str]:
    return sorted(_REGISTRY)


def describe_all() -> list[dict[str, object]]:
    out = []
    for name in algorithm_names():
        entry = _REGISTRY[name]
        out.append(
            {
                "name": entry.name,
                "description": entry.description,
                "options": [spec.as_dict() for spec in entry.options],
            }
        )
    return out


_FIELD_MAP = {
    "idealEdgeLength": "ideal_edge_length",
    "iterations": "iterations",
    "gravityStrength": "gravity_strength",
    "coolingInitial": "cooling_initial",
    "convergenceEps": "convergence_eps",
    "compoundMargin": "compound_margin",
    "seed": "seed",
}


def build_options(raw: dict[str, float] | None, seed: int = 1) -> LayoutOptions:
    """Turn an external camelCase option map plus a seed into LayoutOptions."""
    opts = LayoutOptions(seed=seed)
    for key, value in (raw or {}).items():
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ValueError(f"option {key!r} must be a number, got {value!r}") from None
        attr = _FIELD_MAP.get(key)
        if attr == "iterations" or attr == "seed":
            setattr(opts, attr, int(number))
        elif attr is not None:
            setattr(opts, attr, number)
        else:
            opts.extra[key] = number
    return opts


register(
    AlgorithmEntry(
        "cose",
        CoseLayout,
        "force-directed layout for compound graphs",
        _SHARED_OPTIONS + _FORCE_OPTIONS + [
            OptionSpec("compoundMargin", "number", 10.0, "margin reserve around nested graphs"),
        ],
    )
)
register(
    AlgorithmEntry(
        "spring",
        SpringLayout,
        "plain spring embedder, nesting ignored",
        _SHARED_OPTIONS + _FORCE_OPTIONS,
    )
)
register(
    AlgorithmEntry(
        "cise",
        CiseLayout,
        "clustered circular layout (clusterID node key)",
        _SHARED_OPTIONS
        + _FORCE_OPTIONS
        + [
            OptionSpec("nodeSeparation", "number", 10.0, "spacing between nodes on a circle"),
            OptionSpec(
                "interClusterEdgeLengthFactor", "number", 1.0, "rest-length factor for cluster-crossing edges"
            ),
        ],
    )
)
register(
    AlgorithmEntry(
        "circular",
        CircularLayout,
        "all nodes on one circle",
        [OptionSpec("nodeSeparation", "number", 10.0, "spacing between nodes on the circle")],
    )
)
register(
    AlgorithmEntry(
        "cluster",
        ClusterLayout,
        "force layout keeping marked clusters together",
        _SHARED_OPTIONS + _FORCE_OPTIONS + [
            OptionSpec("compoundMargin", "number", 10.0, "margin reserve around cluster hulls"),
        ],
    )
)
register(
    AlgorithmEntry(
        "sugiyama",
        SugiyamaLayout,
        "layered layout for directed flat graphs (alias: hierarchical)",
        [
            OptionSpec("nodeSeparation", "number", 20.0, "horizontal gap inside a layer"),
            OptionSpec("rankSeparation", "number", 50.0, "vertical gap between layers"),
            OptionSpec("sweeps", "integer", 4, "barycenter sweep count"),
        ],
    )
)

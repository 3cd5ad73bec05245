"""Named parameter rows: weight settings and heuristic thresholds per dataset
family, as used in the benchmark protocol."""

from .fitness import FlexParams
from .overlap import OverlapThresholds

PRESETS: dict[str, tuple[FlexParams, OverlapThresholds]] = {
    "karate": (FlexParams(0.8, 0.3, 2), OverlapThresholds(0.3, 0.6, 0.25)),
    "network50": (FlexParams(0.8, 0.3, 2), OverlapThresholds(0.3, 0.6, 0.25)),
    "network100": (FlexParams(0.8, 0.3, 4), OverlapThresholds(0.3, 0.7, 0.25)),
    "network200": (FlexParams(0.8, 0.3, 4), OverlapThresholds(0.3, 0.7, 0.25)),
    "network500": (FlexParams(0.8, 0.3, 4), OverlapThresholds(0.3, 0.7, 0.25)),
    "krebs": (FlexParams(0.8, 0.3, 4), OverlapThresholds(0.3, 0.7, 0.25)),
    "noise": (FlexParams(0.5, 1.0, 4), OverlapThresholds(0.3, 0.7, 0.45)),
    "football": (FlexParams(0.8, 0.6, 4), OverlapThresholds(0.3, 0.6, 0.25)),
    "dolphins": (FlexParams(0.4, 0.3, 4), OverlapThresholds(0.3, 0.6, 0.25)),
}


def resolve_preset(name: str) -> tuple[FlexParams, OverlapThresholds]:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None

"""JSON and CSV formats for configurations, regions, labelings and charts.

Numbers are printed with 12 significant digits and ``inf`` is written as
the string ``"inf"`` so output is stable across runs.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any

from .config import Configuration, PNorm
from .meb import EnclosingBall
from .regions import Box, ComponentLabeling, OpenRegion
from .strata import TIP, Chart, ConePoint, SphereConfig


class FormatError(ValueError):
    """Malformed input file or document."""


def fmt(x: float) -> str:
    if x == math.inf:
        return "inf"
    return f"{x:.12g}"


def _round(obj: Any) -> Any:
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_round(obj), sort_keys=False)


def configuration_to_dict(S: Configuration) -> dict:
    return {"dim": S.dim if S.dim is not None else 0, "points": [list(p) for p in S.points]}


def configuration_from_dict(doc: dict) -> Configuration:
    try:
        dim = int(doc["dim"])
        points = doc["points"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"configuration needs 'dim' and 'points': {exc}") from None
    for p in points:
        if not isinstance(p, list) or len(p) != dim:
            raise FormatError(f"point {p!r} does not have {dim} coordinates")
    try:
        return Configuration(points, dim=dim if points or dim else None)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _read_json(path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def load_configuration(path) -> Configuration:
    """Read a ``.json`` configuration, or a CSV file with one point per row."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
        try:
            pts = [[float(c) for c in r] for r in rows]
        except ValueError as exc:
            raise FormatError(f"{path}: {exc}") from None
        try:
            return Configuration(pts)
        except ValueError as exc:
            raise FormatError(f"{path}: {exc}") from None
    return configuration_from_dict(_read_json(path))


def save_configuration(S: Configuration, path) -> None:
    Path(path).write_text(dumps(configuration_to_dict(S)) + "\n")


def _bound(x, default: float) -> float:
    return default if x is None else float(x)


def region_from_dict(doc: dict) -> OpenRegion:
    try:
        dim = int(doc["dim"])
        boxes = []
        for b in doc["boxes"]:
            lo = [_bound(x, -math.inf) for x in b["lo"]]
            hi = [_bound(x, math.inf) for x in b["hi"]]
            if len(lo) != dim or len(hi) != dim:
                raise FormatError(f"box {b!r} does not have {dim} bounds")
            boxes.append(Box(tuple(lo), tuple(hi)))
        return OpenRegion(tuple(boxes))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"region needs 'dim' and 'boxes' with 'lo'/'hi': {exc}") from None


def region_to_dict(U: OpenRegion) -> dict:
    def b(x):
        return None if math.isinf(x) else x
    return {"dim": U.dim,
            "boxes": [{"lo": [b(x) for x in box.lo], "hi": [b(x) for x in box.hi]}
                      for box in U.boxes]}


def load_region(path) -> OpenRegion:
    return region_from_dict(_read_json(path))


def load_family(path) -> list[OpenRegion]:
    """A JSON list of regions, or ``{"regions": [...]}``."""
    doc = _read_json(path)
    if isinstance(doc, dict):
        doc = doc.get("regions")
    if not isinstance(doc, list):
        raise FormatError(f"{path}: expected a list of regions")
    return [region_from_dict(r) for r in doc]


def labeling_from_dict(doc: dict) -> ComponentLabeling:
    """``{"dim": d, "components": [{"label": ..., "boxes": [...]}, ...]}``."""
    try:
        dim = doc["dim"]
        items = [(c["label"], region_from_dict({"dim": dim, "boxes": c["boxes"]}))
                 for c in doc["components"]]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"labeling needs 'dim' and 'components': {exc}") from None
    return ComponentLabeling(items)


def load_labeling(path) -> ComponentLabeling:
    return labeling_from_dict(_read_json(path))


def ball_to_dict(ball: EnclosingBall) -> dict:
    return ball.to_dict()


def chart_to_dict(chart: Chart) -> dict:
    if chart.cone is TIP:
        return {"center": list(chart.center), "cone": "tip"}
    base = chart.cone.base
    return {"center": list(chart.center),
            "cone": {"scale": chart.cone.scale, "base": configuration_to_dict(base.config)},
            "p": base.norm.p}


def chart_from_dict(doc: dict) -> Chart:
    try:
        center = tuple(float(x) for x in doc["center"])
        cone = doc["cone"]
        if cone == "tip":
            return Chart(center, TIP)
        base = configuration_from_dict(cone["base"])
        if base.dim not in (None, len(center)):
            raise FormatError("chart base and center have different dimensions")
        norm = PNorm(float(doc.get("p", 2.0)))
        return Chart(center, ConePoint(float(cone["scale"]), SphereConfig(base, norm)))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed chart: {exc}") from None
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(f"malformed chart: {exc}") from None


def load_chart(path) -> Chart:
    return chart_from_dict(_read_json(path))

"""Soliton track extraction from an exported |u| field.

Each time row of the |u| matrix is scanned for local maxima above a fraction
of the typical row maximum. Maxima are linked into tracks row by row, each
track predicting its next position by a straight-line fit of its recent
points, with a gap allowance so tracks survive collisions where two peaks
merge. A track is summarized by one slope and two intercepts, one per side
of the defect, so a track crossing x = 0 shows its transmission shift.
"""

import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field

from defect_nls.models.schemas import FieldTable

logger = logging.getLogger(__name__)


class TrackFit(BaseModel):
    """Least-squares line x = slope·t + intercept, intercept chosen by side.

    Attributes:
        slope: Common velocity on both sides
        left_intercept: Intercept of the x < 0 points, if any
        right_intercept: Intercept of the x ≥ 0 points, if any
        rms: Root-mean-square distance of the points from the fit
    """

    slope: float
    left_intercept: Optional[float] = None
    right_intercept: Optional[float] = None
    rms: float = 0.0

    @property
    def shift(self) -> Optional[float]:
        """Left minus right intercept, when the track is seen on both sides."""
        if self.left_intercept is None or self.right_intercept is None:
            return None
        return self.left_intercept - self.right_intercept


class Track(BaseModel):
    """Peak positions (t, x) of one soliton, in time order."""

    points: list[tuple[float, float]] = Field(default_factory=list)
    misses: int = 0

    def predict(self, t: float, history: int = 6) -> float:
        recent = np.array(self.points[-history:])
        if len(recent) < 2:
            return float(recent[-1, 1])
        slope, intercept = np.polyfit(recent[:, 0], recent[:, 1], 1)
        return float(slope * t + intercept)

    def fit(self) -> TrackFit:
        """Common slope with separate intercepts for the two sides of the defect."""
        pts = np.array(self.points)
        t, x = pts[:, 0], pts[:, 1]
        on_left = x < 0
        columns = [t]
        labels = []
        for name, mask in (("left", on_left), ("right", ~on_left)):
            if mask.any():
                columns.append(mask.astype(float))
                labels.append(name)
        design = np.column_stack(columns)
        coef, *_ = np.linalg.lstsq(design, x, rcond=None)
        intercepts = dict(zip(labels, coef[1:]))
        rms = float(np.sqrt(np.mean((design @ coef - x) ** 2)))
        return TrackFit(
            slope=float(coef[0]),
            left_intercept=intercepts.get("left"),
            right_intercept=intercepts.get("right"),
            rms=rms,
        )


def abs_matrix(table: FieldTable) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """|u| on the (t, x) grid, merging the two x = 0 rows by maximum.

    Returns:
        Tuple of (t axis, x axis, matrix of shape (nt, nx)); overflowed nodes are 0
    """
    t_axis = np.unique(table.t)
    x_axis = np.unique(table.x)
    magnitude = np.nan_to_num(np.abs(table.u), nan=0.0)
    matrix = np.zeros((t_axis.size, x_axis.size))
    rows = np.searchsorted(t_axis, table.t)
    cols = np.searchsorted(x_axis, table.x)
    np.maximum.at(matrix, (rows, cols), magnitude)
    return t_axis, x_axis, matrix


def row_peaks(x_axis: np.ndarray, values: np.ndarray, threshold: float) -> list[float]:
    """Interior local maxima above ``threshold``, parabolically refined off x = 0."""
    core = values[1:-1]
    is_peak = (core >= values[:-2]) & (core > values[2:]) & (core >= threshold)
    peaks = []
    for i in np.nonzero(is_peak)[0] + 1:
        x0 = x_axis[i]
        if x0 == 0:
            peaks.append(0.0)
            continue
        denom = values[i - 1] - 2 * values[i] + values[i + 1]
        h = x_axis[i + 1] - x_axis[i]
        peaks.append(float(x0 + 0.5 * h * (values[i - 1] - values[i + 1]) / denom) if denom else float(x0))
    return peaks


def extract_tracks(
    table: FieldTable,
    fraction: float = 0.5,
    max_jump: float = 1.0,
    max_gap: int = 12,
    min_points: int = 8,
) -> list[Track]:
    """Link row-wise |u| maxima into soliton tracks.

    Args:
        table: Evaluated field table
        fraction: Peak threshold as a fraction of the median row maximum
        max_jump: Largest distance between a prediction and an accepted peak
        max_gap: Rows a track may go unmatched before it is closed
        min_points: Shortest track returned

    Returns:
        Tracks ordered by their first time, then position
    """
    t_axis, x_axis, matrix = abs_matrix(table)
    threshold = fraction * float(np.median(matrix.max(axis=1)))
    active: list[Track] = []
    closed: list[Track] = []

    for t, values in zip(t_axis, matrix):
        peaks = row_peaks(x_axis, values, threshold)
        candidates = sorted(
            (abs(track.predict(t) - x), k, j)
            for k, track in enumerate(active)
            for j, x in enumerate(peaks)
        )
        used_tracks, used_peaks = set(), set()
        for distance, k, j in candidates:
            if distance > max_jump or k in used_tracks or j in used_peaks:
                continue
            active[k].points.append((float(t), peaks[j]))
            active[k].misses = 0
            used_tracks.add(k)
            used_peaks.add(j)
        for k, track in enumerate(active):
            if k not in used_tracks:
                track.misses += 1
        for j, x in enumerate(peaks):
            if j not in used_peaks:
                active.append(Track(points=[(float(t), x)]))
        closed.extend(track for track in active if track.misses > max_gap)
        active = [track for track in active if track.misses <= max_gap]

    tracks = [track for track in closed + active if len(track.points) >= min_points]
    tracks.sort(key=lambda track: track.points[0])
    logger.info("extracted %d track(s) above |u| = %.3g", len(tracks), threshold)
    return tracks

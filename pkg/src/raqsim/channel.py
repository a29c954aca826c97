"""User geometry, large-scale fading and Rayleigh channel generation.

Users are dropped uniformly on a disk in front of the array; the large-scale
power gain follows a log-distance law with optional log-normal shadowing, and
the small-scale fading is i.i.d. circularly symmetric complex Gaussian.  All
generation is a deterministic map from a seed, so independent realizations
can be produced concurrently without losing reproducibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError

#: Log-distance model of the reference deployment: -30 dB at 1 m and
#: 38 dB per decade of distance.
DEFAULT_INTERCEPT_DB = -30.0
DEFAULT_SLOPE_DB_PER_DECADE = 38.0


@dataclass(frozen=True)
class UserGeometry:
    """Planar positions (m) of the users; the array sits at the origin."""

    count: int
    center_distance: float
    drop_radius: float
    positions: np.ndarray

    @property
    def distances(self) -> np.ndarray:
        return np.hypot(self.positions[:, 0], self.positions[:, 1])


@dataclass(frozen=True)
class LargeScaleProfile:
    """Per-user large-scale power gains (linear) and the model behind them."""

    beta: np.ndarray
    geometry: UserGeometry
    shadow_std_db: float
    intercept_db: float = DEFAULT_INTERCEPT_DB
    slope_db_per_decade: float = DEFAULT_SLOPE_DB_PER_DECADE

    @property
    def count(self) -> int:
        return int(self.beta.shape[0])

    @property
    def sigma_diag(self) -> np.ndarray:
        """Diagonal entries sqrt(beta_k) of the large-scale scaling."""
        return np.sqrt(self.beta)

    def subset(self, count: int) -> "LargeScaleProfile":
        """Profile restricted to the first ``count`` users.

        Lets a user-count sweep reuse one master drop so the per-user
        statistics are nested rather than redrawn per point.
        """
        if not 1 <= count <= self.count:
            raise DomainError(f"cannot take {count} users from {self.count}")
        geometry = UserGeometry(
            count=count,
            center_distance=self.geometry.center_distance,
            drop_radius=self.geometry.drop_radius,
            positions=self.geometry.positions[:count],
        )
        return LargeScaleProfile(
            beta=self.beta[:count], geometry=geometry,
            shadow_std_db=self.shadow_std_db, intercept_db=self.intercept_db,
            slope_db_per_decade=self.slope_db_per_decade,
        )


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the composite uplink channel H = G * diag(sqrt(beta))."""

    small_scale: np.ndarray
    beta: np.ndarray

    @property
    def composite(self) -> np.ndarray:
        return self.small_scale * np.sqrt(self.beta)[np.newaxis, :]


def pathloss_db(distance, intercept_db: float = DEFAULT_INTERCEPT_DB,
                slope_db_per_decade: float = DEFAULT_SLOPE_DB_PER_DECADE):
    """Distance-dependent gain in dB (negative for distances beyond 1 m)."""
    return intercept_db + slope_db_per_decade * np.log10(1.0 / np.asarray(distance))


def large_scale_profile(count: int, center_distance: float, drop_radius: float,
                        shadow_std_db: float, seed,
                        min_distance: float = 1.0,
                        intercept_db: float = DEFAULT_INTERCEPT_DB,
                        slope_db_per_decade: float = DEFAULT_SLOPE_DB_PER_DECADE,
                        ) -> tuple[UserGeometry, LargeScaleProfile]:
    """Drop users uniformly on a disk and compute their large-scale gains.

    The drop disk of radius ``drop_radius`` is centered ``center_distance``
    in front of the array, which must keep the array outside the disk.
    Shadowing is a real Gaussian in dB of standard deviation
    ``shadow_std_db``.  Identical seeds give identical profiles.
    """
    if count < 1:
        raise DomainError("need at least one user")
    if drop_radius < 0:
        raise GeometryError("drop radius must be nonnegative")
    if center_distance <= drop_radius:
        raise GeometryError(
            f"disk center at {center_distance} m must exceed the drop radius "
            f"{drop_radius} m so users stay in front of the array"
        )
    if shadow_std_db < 0:
        raise DomainError("shadowing standard deviation must be nonnegative")
    rng = np.random.default_rng(seed)
    # Radius via sqrt of a uniform draw keeps the areal density flat.
    radii = drop_radius * np.sqrt(rng.uniform(size=count))
    angles = rng.uniform(0.0, 2.0 * math.pi, size=count)
    positions = np.column_stack((
        center_distance + radii * np.cos(angles),
        radii * np.sin(angles),
    ))
    geometry = UserGeometry(count=count, center_distance=center_distance,
                            drop_radius=drop_radius, positions=positions)
    distances = np.maximum(geometry.distances, min_distance)
    beta_db = pathloss_db(distances, intercept_db, slope_db_per_decade)
    if shadow_std_db > 0:
        beta_db = beta_db + rng.normal(0.0, shadow_std_db, size=count)
    profile = LargeScaleProfile(
        beta=10.0 ** (beta_db / 10.0), geometry=geometry,
        shadow_std_db=shadow_std_db, intercept_db=intercept_db,
        slope_db_per_decade=slope_db_per_decade,
    )
    return geometry, profile


def uniform_profile(count: int, distance: float,
                    intercept_db: float = DEFAULT_INTERCEPT_DB,
                    slope_db_per_decade: float = DEFAULT_SLOPE_DB_PER_DECADE,
                    ) -> LargeScaleProfile:
    """All users at the same distance: a deterministic equal-gain profile."""
    if count < 1 or distance <= 0:
        raise DomainError("need at least one user at a positive distance")
    positions = np.tile([distance, 0.0], (count, 1))
    geometry = UserGeometry(count=count, center_distance=distance,
                            drop_radius=0.0, positions=positions)
    beta = 10.0 ** (pathloss_db(distance, intercept_db, slope_db_per_decade) / 10.0)
    return LargeScaleProfile(
        beta=np.full(count, beta), geometry=geometry, shadow_std_db=0.0,
        intercept_db=intercept_db, slope_db_per_decade=slope_db_per_decade,
    )


def draw_small_scale(rng: np.random.Generator, m_elements: int, count: int) -> np.ndarray:
    """One i.i.d. unit-variance circularly symmetric Gaussian matrix (M x K)."""
    re = rng.standard_normal((m_elements, count))
    im = rng.standard_normal((m_elements, count))
    return (re + 1j * im) / math.sqrt(2.0)


def channel_realization(m_elements: int, profile: LargeScaleProfile,
                        seed) -> ChannelRealization:
    """Draw one composite channel realization, reproducible per seed."""
    if m_elements < 1:
        raise DomainError("array needs at least one element")
    rng = np.random.default_rng(seed)
    g = draw_small_scale(rng, m_elements, profile.count)
    return ChannelRealization(small_scale=g, beta=profile.beta)

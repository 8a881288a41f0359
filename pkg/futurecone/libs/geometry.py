"""
    Author: julij.jegorov
    Date: 12/10/2026
    Description: Geometry helpers: unit vectors, direction fans on the circle and sphere,
                 convex hulls of point clouds and signed point-to-hull distances.
"""

import math

import numpy as np
from scipy.spatial import ConvexHull

try:
    from scipy.spatial import QhullError
except ImportError:
    from scipy.spatial.qhull import QhullError


def unit(vector):
    """Return vector / |vector|, or a zero vector when the norm is zero."""
    vector = np.asarray(vector, dtype=float)
    norm = np.linalg.norm(vector)
    if norm == 0.0:
        return np.zeros_like(vector)
    return vector / norm


def circle_directions(n):
    """n unit vectors at evenly spaced angles, starting at +x and turning counterclockwise."""
    angles = 2.0 * math.pi * np.arange(n) / n
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


def fibonacci_sphere(n):
    """n quasi-uniform unit vectors on the sphere (golden-angle spiral)."""
    idx = np.arange(n) + 0.5
    z = 1.0 - 2.0 * idx / n
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = math.pi * (3.0 - math.sqrt(5.0)) * idx
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def direction_fan(dimension, n):
    if dimension == 2:
        return circle_directions(n)
    return fibonacci_sphere(n)


def sphere_points(center, radius, n):
    """n points on the boundary of the ball (circle in 2-D, sphere in 3-D)."""
    center = np.asarray(center, dtype=float)
    return center + radius * direction_fan(center.size, n)


def build_hull(points):
    """Convex hull of a point cloud, or None if the cloud is degenerate (flat, collinear, too small)."""
    points = np.asarray(points, dtype=float)
    if points.shape[0] <= points.shape[1]:
        return None
    try:
        return ConvexHull(points)
    except (QhullError, ValueError):
        return None


def _segment_distances(points, starts, ends):
    """Distance from every point (M, d) to the nearest of the segments starts[i] -> ends[i]."""
    edge = ends - starts
    length2 = np.einsum('ij,ij->i', edge, edge)
    length2 = np.where(length2 == 0.0, 1.0, length2)
    rel = points[:, None, :] - starts[None, :, :]
    t = np.clip(np.einsum('mij,ij->mi', rel, edge) / length2, 0.0, 1.0)
    nearest = starts[None, :, :] + t[:, :, None] * edge[None, :, :]
    return np.linalg.norm(points[:, None, :] - nearest, axis=2).min(axis=1)


def _facet_distances(points, hull):
    """Distance from every point (M, 3) to the triangulated surface of a 3-D hull.

    A point whose foot on a facet plane falls inside that triangle is at the plane distance;
    otherwise its nearest surface point lies on an edge.
    """
    tri = hull.points[hull.simplices]
    a, ab, ac = tri[:, 0], tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]
    normal = np.cross(ab, ac)
    n2 = np.einsum('ij,ij->i', normal, normal)
    flat = n2 == 0.0
    n2 = np.where(flat, 1.0, n2)
    rel = points[:, None, :] - a[None, :, :]
    height = np.einsum('mfk,fk->mf', rel, normal) / n2
    foot = rel - height[:, :, None] * normal[None, :, :]
    d00 = np.einsum('ij,ij->i', ab, ab)
    d01 = np.einsum('ij,ij->i', ab, ac)
    d11 = np.einsum('ij,ij->i', ac, ac)
    d20 = np.einsum('mfk,fk->mf', foot, ab)
    d21 = np.einsum('mfk,fk->mf', foot, ac)
    denom = np.where(flat, 1.0, d00 * d11 - d01 * d01)
    v = (d11 * d20 - d01 * d21) / denom
    w = (d00 * d21 - d01 * d20) / denom
    on_face = (v >= 0.0) & (w >= 0.0) & (v + w <= 1.0) & ~flat[None, :]
    plane = np.where(on_face, np.abs(height) * np.sqrt(n2), np.inf).min(axis=1)

    edges = np.sort(np.concatenate([hull.simplices[:, [0, 1]], hull.simplices[:, [1, 2]],
                                    hull.simplices[:, [0, 2]]]), axis=1)
    edges = np.unique(edges, axis=0)
    ridge = _segment_distances(points, hull.points[edges[:, 0]], hull.points[edges[:, 1]])
    return np.minimum(plane, ridge)


def hull_signed_distance(points, hull):
    """Signed distance of points to a convex hull: positive inside, negative outside.

    Inside the hull the value is the distance to the nearest facet plane. Outside it is the
    distance to the boundary polygon (2-D) or the triangulated boundary surface (3-D).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    # scipy facet equations are unit normals with n.x + b <= 0 inside
    plane = points @ hull.equations[:, :-1].T + hull.equations[:, -1]
    worst = plane.max(axis=1)
    signed = -worst
    outside = worst > 0.0
    if not outside.any():
        return signed
    if points.shape[1] == 2:
        ring = hull.points[hull.vertices]
        signed[outside] = -_segment_distances(points[outside], ring, np.roll(ring, -1, axis=0))
    else:
        signed[outside] = -_facet_distances(points[outside], hull)
    return signed


def cloud_signed_distance(points, cloud):
    """Fallback for degenerate clouds: minus the distance to the nearest cloud point."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    cloud = np.atleast_2d(np.asarray(cloud, dtype=float))
    gaps = np.linalg.norm(points[:, None, :] - cloud[None, :, :], axis=2)
    return -gaps.min(axis=1)


def project_into_ball(point, center, radius):
    """Closest point of the closed ball to `point`."""
    offset = np.asarray(point, dtype=float) - center
    norm = np.linalg.norm(offset)
    if norm <= radius:
        return np.asarray(point, dtype=float)
    return center + offset * (radius / norm)

"""
    Author: julij.jegorov
    Date: 16/10/2026
    Description: Tables and pictures out of cones and engagements: leaf point tables,
                 CSV writing with round-trip float precision, SVG rendering.
"""

import logging
from collections import OrderedDict

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def leaves_frame(cone):
    """One row per leaf point: time, point_index, px, py[, pz].

    Ball leaves are written as samples of their boundary, clouds as all their points.
    """
    axes = 'xyz'[:cone.vertex.dimension]
    frames = []
    for leaf in cone.leaves:
        if leaf.is_ball:
            points = leaf.boundary_points() if leaf.radius > 0 else leaf.center.reshape(1, -1)
        else:
            points = leaf.points
        data = OrderedDict([('time', np.full(points.shape[0], leaf.time)),
                            ('point_index', np.arange(points.shape[0]))])
        for i, axis in enumerate(axes):
            data['p%s' % axis] = points[:, i]
        frames.append(pd.DataFrame(data))
    if not frames:
        return pd.DataFrame(columns=['time', 'point_index'] + ['p%s' % a for a in axes])
    return pd.concat(frames, ignore_index=True)


def write_csv(frame, path):
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info('wrote %d rows to %s', len(frame), path)


def render_svg(path, result=None, cone=None, title=None):
    """Planar picture of an engagement and/or cone leaf outlines, saved as SVG."""
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    if cone is not None:
        for leaf in cone.leaves:
            outline = leaf.boundary_points()
            if outline.shape[0] > 2 and outline.shape[1] == 2:
                ring = np.vstack([outline, outline[:1]])
                ax.plot(ring[:, 0], ring[:, 1], color='0.6', linewidth=0.6)
        ax.plot(*cone.vertex.position[:2], marker='o', color='k')
    if result is not None:
        xs, ys = result.trajectory_x, result.trajectory_y
        ax.plot(xs[:, 0], xs[:, 1], color='tab:red', label='pursuer')
        ax.plot(ys[:, 0], ys[:, 1], color='tab:blue', label='evader')
        if result.outcome.is_intercept:
            ax.plot(xs[-1, 0], xs[-1, 1], marker='x', color='k', markersize=9,
                    label='intercept t=%.3f' % result.outcome.t)
        ax.legend(loc='best')
    ax.set_aspect('equal')
    ax.set_xlabel('x [m]')
    ax.set_ylabel('y [m]')
    if title:
        ax.set_title(title)
    fig.savefig(path, format='svg')
    plt.close(fig)
    logger.info('wrote %s', path)

"""Planar point-source / point-vortex interaction dynamics."""

from pointflow._core import *  # noqa: F401,F403
from pointflow._core import __version__  # noqa: F401

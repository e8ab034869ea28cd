"""
Command groups, one module per group
"""

from cli.commands import cover, emit, fan, fanifold, fltz, mirror

GROUPS = (fan, fltz, fanifold, cover, mirror, emit)
